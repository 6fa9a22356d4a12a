//! Stabilizability test and solver for `A'P + PA + I - PBB'P = 0`.
//!
//! The solver takes the stable invariant subspace of the Hamiltonian
//! `[[A, -BB'], [-I, -A']]` from an ordered complex Schur form, sets
//! `P = U2 U1^{-1}`, and polishes with Newton (Kleinman) steps until the
//! residual meets `tol * (1 + |P|^2)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues, inverse, smallest_singular_value, solve_lyapunov, ComplexMatrix, RealMatrix, Schur,
};

pub const DEFAULT_ARE_TOL: f64 = 1e-9;
pub const DEFAULT_PBH_TOL: f64 = 1e-9;
const MAX_NEWTON_STEPS: usize = 5;

/// Stabilizing solution of the Riccati equation.
#[derive(Debug, Clone)]
pub struct AreSolution {
    pub p: RealMatrix,
    /// Frobenius norm of `A'P + PA + I - PBB'P`.
    pub residual: f64,
    pub newton_steps: usize,
}

impl AreSolution {
    /// `A - BB'P`.
    pub fn closed_loop(&self, a: &RealMatrix, b: &RealMatrix) -> Result<RealMatrix> {
        a.try_sub(&b.matmul(&b.transpose())?.matmul(&self.p)?)
    }
}

fn check_dims(a: &RealMatrix, b: &RealMatrix) -> Result<usize> {
    let n = a.require_square("Riccati A")?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch {
            op: "Riccati",
            detail: format!("A is {n}x{n} but B has {} rows", b.rows()),
        });
    }
    Ok(n)
}

/// PBH test. Returns the first eigenvalue with `Re >= 0` at which
/// `[A - λI, B]` loses rank, as an [`Error::Unstabilizable`].
pub fn pbh_check(a: &RealMatrix, b: &RealMatrix, tol: f64) -> Result<()> {
    let n = check_dims(a, b)?;
    let scale = 1.0 + a.frobenius_norm() + b.frobenius_norm();
    let bc = b.to_complex();
    for lambda in eigenvalues(a, f64::EPSILON)? {
        if lambda.re < -tol * scale {
            continue;
        }
        let shifted = a.to_complex().shift_diagonal(-lambda);
        let pencil = if b.cols() == 0 {
            shifted
        } else {
            shifted.hstack(&bc)?
        };
        let sv = smallest_singular_value(&pencil)?;
        if sv <= tol * scale {
            return Err(Error::Unstabilizable {
                eigenvalue: lambda,
                singular_value: sv,
            });
        }
        debug_assert_eq!(pencil.rows(), n);
    }
    Ok(())
}

/// True iff `(A, B)` passes the PBH test at every eigenvalue of `A` in
/// the closed right half plane.
pub fn is_stabilizable(a: &RealMatrix, b: &RealMatrix, tol: f64) -> Result<bool> {
    match pbh_check(a, b, tol) {
        Ok(()) => Ok(true),
        Err(Error::Unstabilizable { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Frobenius norm of `A'P + PA + I - PBB'P`.
pub fn are_residual(a: &RealMatrix, b: &RealMatrix, p: &RealMatrix) -> Result<f64> {
    let n = a.rows();
    let pb = p.matmul(b)?;
    let r = a
        .transpose()
        .matmul(p)?
        .try_add(&p.matmul(a)?)?
        .shift_diagonal(1.0)
        .try_sub(&pb.matmul(&pb.transpose())?)?;
    debug_assert_eq!(r.rows(), n);
    Ok(r.frobenius_norm())
}

/// Solves the Riccati equation for its symmetric positive definite,
/// stabilizing solution.
pub fn solve_are(a: &RealMatrix, b: &RealMatrix, tol: f64) -> Result<AreSolution> {
    let n = check_dims(a, b)?;
    pbh_check(a, b, DEFAULT_PBH_TOL)?;

    let bbt = b.matmul(&b.transpose())?;
    let mut h = RealMatrix::zeros(2 * n, 2 * n);
    h.set_block(0, 0, a);
    h.set_block(0, n, &bbt.scale(-1.0));
    h.set_block(n, 0, &RealMatrix::identity(n).scale(-1.0));
    h.set_block(n, n, &a.transpose().scale(-1.0));

    let mut schur = Schur::new(&h.to_complex(), f64::EPSILON)?;
    let stable = schur.reorder(|z: Complex64| z.re < 0.0);
    if stable != n {
        return Err(Error::HamiltonianSplit {
            stable,
            expected: n,
        });
    }
    let u1 = schur.q.submatrix(0, 0, n, n);
    let u2 = schur.q.submatrix(n, 0, n, n);
    let x = u2.matmul(&inverse(&u1)?)?;
    let mut p = RealMatrix::real_part(&x).hermitian_part();

    let target = |p: &RealMatrix| tol * (1.0 + p.frobenius_norm().powi(2));
    let mut residual = are_residual(a, b, &p)?;
    let mut steps = 0;
    while residual > target(&p) && steps < MAX_NEWTON_STEPS {
        p = newton_step(a, &bbt, &p)?;
        residual = are_residual(a, b, &p)?;
        steps += 1;
    }
    if residual > target(&p) {
        return Err(Error::RiccatiResidual {
            residual,
            target: target(&p),
        });
    }

    let sol = AreSolution {
        p,
        residual,
        newton_steps: steps,
    };
    let min_eig = eigenvalues(&sol.p, f64::EPSILON)?
        .values()
        .iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    if min_eig <= 0.0 {
        return Err(Error::NoConvergence {
            what: "Riccati solve (solution not positive definite)",
            iterations: steps,
        });
    }
    let closed = sol.closed_loop(a, b)?;
    if eigenvalues(&closed, f64::EPSILON)?.abscissa() >= 0.0 {
        return Err(Error::NoConvergence {
            what: "Riccati solve (solution not stabilizing)",
            iterations: steps,
        });
    }
    Ok(sol)
}

/// Kleinman step: solve `Ak'X + X Ak + I + P BB' P = 0` with `Ak = A - BB'P`.
fn newton_step(a: &RealMatrix, bbt: &RealMatrix, p: &RealMatrix) -> Result<RealMatrix> {
    let ak = a.try_sub(&bbt.matmul(p)?)?;
    let q = p.matmul(bbt)?.matmul(p)?.shift_diagonal(1.0);
    let x: ComplexMatrix = solve_lyapunov(&ak.to_complex(), &q.to_complex(), 1e-8)?;
    Ok(RealMatrix::real_part(&x).hermitian_part())
}
