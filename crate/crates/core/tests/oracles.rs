//! Hand-derived reference values. Each closed form is first substituted
//! back into its defining equation, independently of the solvers, and only
//! then compared with what the library computes.

mod common;

use common::max_abs_diff;
use netsync::linalg::{eigenvalues, expm, RealMatrix};
use netsync::riccati::{are_residual, solve_are};
use netsync::synthesis::{certify_shifted_gain, linspace, shifted_gain_sweep, synthesize};
use netsync::{CouplingMatrix, Mode, SystemModel};
use num_complex::Complex64;

fn m(rows: &[&[f64]]) -> RealMatrix {
    RealMatrix::from_rows(rows).unwrap()
}

fn double_integrator() -> (RealMatrix, RealMatrix) {
    (m(&[&[0.0, 1.0], &[0.0, 0.0]]), m(&[&[0.0], &[1.0]]))
}

/// `[[√3, 1], [1, √3]]` from 1 - p2² = 0, p1 - p2 p3 = 0, 2 p2 + 1 - p3² = 0.
fn double_integrator_p() -> RealMatrix {
    let s3 = 3f64.sqrt();
    m(&[&[s3, 1.0], &[1.0, s3]])
}

/// Residual of the Riccati equation written out entrywise, without the
/// library's matrix products.
fn hand_residual_2x2(a: [[f64; 2]; 2], b: [f64; 2], p: [[f64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    let pb = [
        p[0][0] * b[0] + p[0][1] * b[1],
        p[1][0] * b[0] + p[1][1] * b[1],
    ];
    for i in 0..2 {
        for j in 0..2 {
            let mut v = if i == j { 1.0 } else { 0.0 };
            for k in 0..2 {
                v += a[k][i] * p[k][j] + p[i][k] * a[k][j];
            }
            v -= pb[i] * pb[j];
            worst = worst.max(v.abs());
        }
    }
    worst
}

#[test]
fn closed_forms_satisfy_the_riccati_equation() {
    // scalar: 2ap + 1 - b²p² = 0
    let scalar = |a: f64, p: f64| 2.0 * a * p + 1.0 - p * p;
    assert!(scalar(0.0, 1.0).abs() < 1e-15);
    assert!(scalar(-1.0, 2f64.sqrt() - 1.0).abs() < 1e-15);
    let s3 = 3f64.sqrt();
    let r = hand_residual_2x2([[0.0, 1.0], [0.0, 0.0]], [0.0, 1.0], [[s3, 1.0], [1.0, s3]]);
    assert!(r < 1e-15);
}

#[test]
fn scalar_integrator() {
    let sol = solve_are(&m(&[&[0.0]]), &m(&[&[1.0]]), 1e-9).unwrap();
    assert!((sol.p[(0, 0)] - 1.0).abs() < 1e-8);
    let sys = SystemModel::new(m(&[&[0.0]]), m(&[&[1.0]]), Mode::Primal).unwrap();
    let g = synthesize(&sys, 1.0).unwrap();
    assert!((g.gain[(0, 0)] - 1.0).abs() < 1e-8);
    assert_eq!(g.scale, 1.0);
}

#[test]
fn stable_scalar() {
    let sol = solve_are(&m(&[&[-1.0]]), &m(&[&[1.0]]), 1e-9).unwrap();
    assert!((sol.p[(0, 0)] - (2f64.sqrt() - 1.0)).abs() < 1e-8);
}

#[test]
fn double_integrator_riccati_and_gain() {
    let (a, b) = double_integrator();
    let sol = solve_are(&a, &b, 1e-9).unwrap();
    assert!(max_abs_diff(&sol.p, &double_integrator_p()) < 1e-8);
    assert!(are_residual(&a, &b, &double_integrator_p()).unwrap() < 1e-14);

    let sys = SystemModel::new(a.clone(), b.clone(), Mode::Primal).unwrap();
    let g = synthesize(&sys, 2.0).unwrap();
    assert!(max_abs_diff(&g.gain, &m(&[&[1.0, 3f64.sqrt()]])) < 1e-8);
    assert_eq!(g.scale, 1.0);
    let g = synthesize(&sys, 0.25).unwrap();
    assert_eq!(g.scale, 4.0);

    // A - BK = [[0, 1], [-1, -√3]], eigenvalues -√3/2 ± j/2
    let closed = sol.closed_loop(&a, &b).unwrap();
    assert!(max_abs_diff(&closed, &m(&[&[0.0, 1.0], &[-1.0, -3f64.sqrt()]])) < 1e-8);
    for z in eigenvalues(&closed, 1e-15).unwrap().values() {
        assert!((z.re + 3f64.sqrt() / 2.0).abs() < 1e-8);
        assert!((z.im.abs() - 0.5).abs() < 1e-8);
    }
}

#[test]
fn certificate_scalar_arithmetic() {
    // shifted matrix -2-3j; identity (-2+3j) + (-2-3j) = -4 = -1 - 3
    let c =
        certify_shifted_gain(&m(&[&[0.0]]), &m(&[&[1.0]]), &m(&[&[1.0]]), 2.0, 3.0, 1e-8).unwrap();
    assert!((c.max_real_part + 2.0).abs() < 1e-14);
    assert!(c.identity_residual < 1e-14);
}

#[test]
fn certificate_double_integrator() {
    let (a, b) = double_integrator();
    let p = double_integrator_p();
    let c = certify_shifted_gain(&a, &b, &p, 1.0, 0.0, 1e-8).unwrap();
    assert!(c.max_real_part < 0.0);
    assert!((c.max_real_part + 3f64.sqrt() / 2.0).abs() < 1e-12);
    let c = certify_shifted_gain(&a, &b, &p, 1.0, 5.0, 1e-8).unwrap();
    assert!(c.identity_residual <= 1e-9);

    let sigmas = linspace(1.0, 10.0, 21);
    let omegas = linspace(-10.0, 10.0, 21);
    let certs = shifted_gain_sweep(&a, &b, &p, &sigmas, &omegas, 1e-8).unwrap();
    assert_eq!(certs.len(), 441);
    assert!(certs.iter().all(|c| c.passed()));
}

#[test]
fn cycle_and_complete_graph_spectra() {
    let s = CouplingMatrix::cycle(4).spectrum(1e-8).unwrap();
    // circulant: ω^k - 1 with ω = j
    let want: Vec<Complex64> = (0..4)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * k as f64) - 1.0)
        .collect();
    for w in want {
        assert!(s
            .eigenvalues
            .values()
            .iter()
            .any(|z| (z - w).norm() < 1e-12));
    }
    assert!((s.lambda2.unwrap().re + 1.0).abs() < 1e-12);

    // λ(λ + 3)²
    let s = CouplingMatrix::complete(3).spectrum(1e-8).unwrap();
    assert!((s.lambda2.unwrap() - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
    assert!(s.r.iter().all(|r| (r - 1.0 / 3.0).abs() < 1e-14));
}

#[test]
fn exponential_of_nilpotent() {
    let e = expm(&m(&[&[0.0, 1.0], &[0.0, 0.0]]), 2.5).unwrap();
    assert!(max_abs_diff(&e, &m(&[&[1.0, 2.5], &[0.0, 1.0]])) < 1e-14);
}
