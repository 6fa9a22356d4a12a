//! Dense Lyapunov solver: `F^H P + P F + Q = 0`.

use num_complex::Complex64;

use super::lu::Lu;
use super::matrix::{ComplexMatrix, Scalar};
use super::spectrum::eigenvalues;
use crate::error::{Error, Result};

/// Solves `f^H P + P f + q = 0` for Hermitian `P`, with `f` Hurwitz.
///
/// The equation is vectorized into a `d^2 x d^2` linear system, which is
/// cheap at the dimensions this crate targets (`d <= 32`). The returned
/// `P` is Hermitian by construction; the residual is checked against
/// `tol * (1 + |P|)`.
pub fn solve_lyapunov(f: &ComplexMatrix, q: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let d = f.require_square("solve_lyapunov")?;
    if q.shape() != (d, d) {
        return Err(Error::DimensionMismatch {
            op: "solve_lyapunov",
            detail: format!("f is {d}x{d} but q is {}x{}", q.rows(), q.cols()),
        });
    }
    let spec = eigenvalues(f, f64::EPSILON)?;
    let max_re = spec.abscissa();
    if d > 0 && max_re >= 0.0 {
        return Err(Error::NotHurwitz {
            max_real_part: max_re,
        });
    }
    let p = solve_vectorized(f, q)?.hermitian_part();
    let res = lyapunov_residual(f, &p, q)?;
    if res > tol * (1.0 + p.frobenius_norm()) {
        return Err(Error::NoConvergence {
            what: "Lyapunov solve (residual above tolerance)",
            iterations: 1,
        });
    }
    Ok(p)
}

/// `|f^H P + P f + q|_F`.
pub fn lyapunov_residual(f: &ComplexMatrix, p: &ComplexMatrix, q: &ComplexMatrix) -> Result<f64> {
    let r = f.adjoint().matmul(p)?.try_add(&p.matmul(f)?)?.try_add(q)?;
    Ok(r.frobenius_norm())
}

fn solve_vectorized(f: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = f.rows();
    let idx = |a: usize, b: usize| a * d + b;
    // entry (i, j): sum_k conj(f[k][i]) P[k][j] + sum_k P[i][k] f[k][j] = -q[i][j]
    let mut op = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let row = idx(i, j);
            for k in 0..d {
                op[(row, idx(k, j))] += f[(k, i)].conj();
                op[(row, idx(i, k))] += f[(k, j)];
            }
        }
    }
    let rhs: Vec<Complex64> = q.as_slice().iter().map(|&z| -z).collect();
    let lu = Lu::new(&op)?;
    let mut x = lu.solve_vec(&rhs);
    // one step of iterative refinement
    let ax = op.matvec_unchecked(&x);
    let r: Vec<Complex64> = rhs.iter().zip(&ax).map(|(b, a)| *b - *a).collect();
    let dx = lu.solve_vec(&r);
    for (xi, di) in x.iter_mut().zip(dx) {
        *xi += di;
    }
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("Lyapunov solution"));
    }
    ComplexMatrix::from_row_major(d, d, x)
}
