// Certify that A - (σ + jω)BB'P stays Hurwitz over a grid of σ >= 1 and
// real ω, which is what makes every coupling strength above δ work.

use std::error::Error;

use netsync::linalg::RealMatrix;
use netsync::riccati::solve_are;
use netsync::synthesis::{
    certify_shifted_gain, shifted_gain_sweep, SweepGrid, SweepSummary, DEFAULT_IDENTITY_TOL,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = RealMatrix::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.5, -1.0, 0.2]])?;
    let b = RealMatrix::from_rows(&[[0.0], [0.0], [1.0]])?;
    let p = solve_are(&a, &b, 1e-9)?.p;

    let one = certify_shifted_gain(&a, &b, &p, 3.0, -7.5, DEFAULT_IDENTITY_TOL)?;
    println!(
        "sigma = 3, omega = -7.5: max Re = {:.4}, identity residual {:.2e}",
        one.max_real_part, one.identity_residual
    );

    let grid = SweepGrid::default();
    let certs = shifted_gain_sweep(
        &a,
        &b,
        &p,
        &grid.sigmas(),
        &grid.omegas(),
        DEFAULT_IDENTITY_TOL,
    )?;
    let summary = SweepSummary::from_certificates(&certs);
    println!(
        "{} grid points, {} failures, worst max Re {:.4} at {:?}",
        summary.points,
        summary.failures,
        summary.worst_max_real_part.unwrap_or(f64::NAN),
        summary.worst_max_real_part_at
    );
    if !summary.passed {
        return Err("certificate sweep failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
