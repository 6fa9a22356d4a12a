//! Singular values by one-sided (Hestenes) Jacobi rotations.

use num_complex::Complex64;

use super::matrix::{Matrix, Scalar};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// All `min(rows, cols)` singular values in descending order.
pub fn singular_values<T: Scalar>(m: &Matrix<T>) -> Result<Vec<f64>> {
    let m = if m.cols() > m.rows() {
        m.adjoint()
    } else {
        m.clone()
    };
    let (rows, cols) = m.shape();
    // column-major working copy
    let mut columns: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m[(i, j)].to_complex()).collect())
        .collect();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha: f64 = columns[i].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = columns[j].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = columns[i]
                    .iter()
                    .zip(&columns[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = columns.split_at_mut(j);
                let (ci, cj) = (&mut left[i], &mut right[0]);
                for (a, b) in ci.iter_mut().zip(cj.iter_mut()) {
                    let bj = *b * phase;
                    let ai = *a;
                    *a = ai * c - bj * s;
                    *b = ai * s + bj * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi SVD",
            iterations: MAX_SWEEPS,
        });
    }
    let mut sv: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Smallest singular value; zero for an empty dimension.
pub fn smallest_singular_value<T: Scalar>(m: &Matrix<T>) -> Result<f64> {
    Ok(singular_values(m)?.last().copied().unwrap_or(0.0))
}
