//! LU factorization with partial pivoting.

use super::matrix::{Matrix, Scalar};
use crate::error::{Error, Result};

pub struct Lu<T> {
    factors: Matrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Factors `m` as `P m = L U`. Fails when a pivot vanishes relative to
    /// the largest entry of `m`.
    pub fn new(m: &Matrix<T>) -> Result<Self> {
        let n = m.require_square("lu")?;
        let mut a = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (piv, piv_abs) =
                (k..n)
                    .map(|i| (i, a[(i, k)].modulus()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if piv_abs <= f64::EPSILON * scale * 1e-3 || piv_abs == 0.0 {
                return Err(Error::Singular("lu"));
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let tmp = a[(k, j)];
                    a[(k, j)] = a[(piv, j)];
                    a[(piv, j)] = tmp;
                }
            }
            let d = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / d;
                a[(i, k)] = f;
                if f == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= f * u;
                }
            }
        }
        Ok(Lu { factors: a, perm })
    }

    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.perm.len();
        let a = &self.factors;
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= a[(i, j)] * x[j];
            }
            x[i] = s / a[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.perm.len();
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "lu solve",
                detail: format!("{n}x{n} system with {} right-hand rows", b.rows()),
            });
        }
        let mut out = Matrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col: Vec<T> = (0..n).map(|i| b[(i, j)]).collect();
            for (i, v) in self.solve_vec(&col).into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }
}

/// Solves `a x = b` for a square `a`.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    Lu::new(a)?.solve(b)
}

pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.require_square("inverse")?;
    Lu::new(a)?.solve(&Matrix::identity(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;

    #[test]
    fn solves_small_system() {
        let a = RealMatrix::from_rows(&[[0.0, 2.0], [1.0, 1.0]]).unwrap();
        let b = RealMatrix::from_rows(&[[4.0], [3.0]]).unwrap();
        let x = solve(&a, &b).unwrap();
        assert!((x[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((x[(1, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_is_reported() {
        let a = RealMatrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert!(matches!(Lu::new(&a), Err(Error::Singular(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let a =
            RealMatrix::from_rows(&[[4.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]]).unwrap();
        let prod = a.matmul(&inverse(&a).unwrap()).unwrap();
        let err = prod.try_sub(&RealMatrix::identity(3)).unwrap().max_abs();
        assert!(err < 1e-14);
    }
}
