//! Complex Schur decomposition by Hessenberg reduction and single-shift QR.
//!
//! `m = Q T Q^H` with `Q` unitary and `T` upper triangular. The diagonal of
//! `T` carries the eigenvalues; [`Schur::reorder`] moves a selected set of
//! them to the leading positions so that the first `k` columns of `Q` span
//! the matching invariant subspace.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Scalar};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Iterations allowed per eigenvalue before giving up.
const MAX_ITER_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct Schur {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    /// Computes the Schur form. `tol` is the relative deflation threshold
    /// for subdiagonal entries; values below machine epsilon are raised
    /// to it.
    pub fn new(m: &ComplexMatrix, tol: f64) -> Result<Self> {
        let n = m.require_square("schur")?;
        if !m.is_finite() {
            return Err(Error::NonFinite("schur input"));
        }
        let mut t = m.clone();
        let mut q = ComplexMatrix::identity(n);
        hessenberg(&mut t, &mut q);
        hessenberg_qr(&mut t, &mut q, tol.max(f64::EPSILON))?;
        Ok(Schur { q, t })
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Reorders the triangular factor so every eigenvalue for which `select`
    /// holds comes first, preserving relative order within each group.
    /// Returns the number of selected eigenvalues.
    pub fn reorder(&mut self, select: impl Fn(Complex64) -> bool) -> usize {
        let n = self.t.rows();
        let mut placed = 0;
        for j in 0..n {
            if select(self.t[(j, j)]) {
                let mut k = j;
                while k > placed {
                    swap_adjacent(&mut self.t, &mut self.q, k - 1);
                    k -= 1;
                }
                placed += 1;
            }
        }
        placed
    }
}

/// Unitary rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

/// Applies the rotation from the left to rows `k`, `k+1`, columns `cols`.
fn rotate_rows(
    m: &mut ComplexMatrix,
    k: usize,
    c: f64,
    s: Complex64,
    cols: std::ops::Range<usize>,
) {
    for j in cols {
        let x = m[(k, j)];
        let y = m[(k + 1, j)];
        m[(k, j)] = x * c + s * y;
        m[(k + 1, j)] = -s.conj() * x + y * c;
    }
}

/// Applies the adjoint rotation from the right to columns `k`, `k+1`.
fn rotate_cols(
    m: &mut ComplexMatrix,
    k: usize,
    c: f64,
    s: Complex64,
    rows: std::ops::Range<usize>,
) {
    for i in rows {
        let x = m[(i, k)];
        let y = m[(i, k + 1)];
        m[(i, k)] = x * c + y * s.conj();
        m[(i, k + 1)] = -x * s + y * c;
    }
}

/// Householder reduction to upper Hessenberg form, accumulating into `q`.
fn hessenberg(a: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let alpha_norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        // v = x + phase*|x| e1, H = I - 2 v v^H / (v^H v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] += phase * alpha_norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // a <- H a
        for j in 0..n {
            let mut dot = ZERO;
            for (idx, vi) in v.iter().enumerate() {
                dot += vi.conj() * a[(k + 1 + idx, j)];
            }
            let f = dot * beta;
            for (idx, vi) in v.iter().enumerate() {
                a[(k + 1 + idx, j)] -= *vi * f;
            }
        }
        // a <- a H, q <- q H
        for mat in [&mut *a, &mut *q] {
            for i in 0..n {
                let mut dot = ZERO;
                for (idx, vi) in v.iter().enumerate() {
                    dot += mat[(i, k + 1 + idx)] * *vi;
                }
                let f = dot * beta;
                for (idx, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + idx)] -= f * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Eigenvalue of the trailing 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut ComplexMatrix, q: &mut ComplexMatrix, tol: f64) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let norm = h.frobenius_norm();
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = MAX_ITER_PER_EIGENVALUE * n;
    while hi > 0 {
        // find the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let reference = if diag == 0.0 { norm } else { diag };
            if sub <= tol * reference || sub <= f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence {
                what: "Hessenberg QR",
                iterations: total,
            });
        }
        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)] + Complex64::new(0.75, 0.4375) * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        // implicit single-shift bulge chase on [lo, hi]
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let (c, s) = givens(x, y);
            let col_start = if k > lo { k - 1 } else { lo };
            rotate_rows(h, k, c, s, col_start..n);
            let row_end = (k + 3).min(hi + 1);
            rotate_cols(h, k, c, s, 0..row_end);
            rotate_cols(q, k, c, s, 0..n);
            if k > lo {
                h[(k + 1, k - 1)] = ZERO;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    // clean strictly lower part
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok(())
}

/// Swaps diagonal entries `k` and `k+1` of the triangular `t` by a unitary
/// similarity, updating `q`.
fn swap_adjacent(t: &mut ComplexMatrix, q: &mut ComplexMatrix, k: usize) {
    let n = t.rows();
    let a = t[(k, k)];
    let b = t[(k, k + 1)];
    let d = t[(k + 1, k + 1)];
    // eigenvector of the 2x2 block for eigenvalue d
    let v1 = b;
    let v2 = d - a;
    let nv = v1.norm().hypot(v2.norm());
    if nv == 0.0 {
        return;
    }
    let (v1, v2) = (v1 / nv, v2 / nv);
    // Z = [[v1, -conj(v2)], [v2, conj(v1)]]; t <- Z^H t Z, q <- q Z
    for j in 0..n {
        let x = t[(k, j)];
        let y = t[(k + 1, j)];
        t[(k, j)] = v1.conj() * x + v2.conj() * y;
        t[(k + 1, j)] = -v2 * x + v1 * y;
    }
    for mat in [&mut *t, &mut *q] {
        for i in 0..n {
            let x = mat[(i, k)];
            let y = mat[(i, k + 1)];
            mat[(i, k)] = x * v1 + y * v2;
            mat[(i, k + 1)] = -x * v2.conj() + y * v1.conj();
        }
    }
    t[(k + 1, k)] = ZERO;
    t[(k, k)] = d;
    t[(k + 1, k + 1)] = a;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RealMatrix;

    fn reconstruct(s: &Schur) -> ComplexMatrix {
        s.q.matmul(&s.t).unwrap().matmul(&s.q.adjoint()).unwrap()
    }

    #[test]
    fn schur_reconstructs_and_q_is_unitary() {
        let m = RealMatrix::from_rows(&[
            [1.0, 2.0, 3.0, -1.0],
            [0.5, -2.0, 1.0, 4.0],
            [2.0, 1.0, 0.0, 1.0],
            [-3.0, 0.0, 1.0, 2.0],
        ])
        .unwrap()
        .to_complex();
        let s = Schur::new(&m, f64::EPSILON).unwrap();
        let err = reconstruct(&s).try_sub(&m).unwrap().frobenius_norm();
        assert!(err < 1e-12 * m.frobenius_norm(), "err = {err}");
        let qq = s.q.adjoint().matmul(&s.q).unwrap();
        let ierr = qq
            .try_sub(&ComplexMatrix::identity(4))
            .unwrap()
            .frobenius_norm();
        assert!(ierr < 1e-13);
        for i in 1..4 {
            for j in 0..i {
                assert_eq!(s.t[(i, j)], ZERO);
            }
        }
    }

    #[test]
    fn reorder_moves_selected_first() {
        let m = ComplexMatrix::from_rows(&[
            [
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
            ],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(3.0, 0.0),
            ],
            [
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-4.0, 0.5),
            ],
        ])
        .unwrap();
        let mut s = Schur::new(&m, f64::EPSILON).unwrap();
        let k = s.reorder(|z| z.re < 0.0);
        assert_eq!(k, 2);
        let ev = s.eigenvalues();
        assert!(ev[0].re < 0.0 && ev[1].re < 0.0 && ev[2].re > 0.0);
        let err = reconstruct(&s).try_sub(&m).unwrap().frobenius_norm();
        assert!(err < 1e-12 * m.frobenius_norm());
        // leading column block spans an invariant subspace: m U = U T11
        let u = s.q.submatrix(0, 0, 3, 2);
        let t11 = s.t.submatrix(0, 0, 2, 2);
        let res = m
            .matmul(&u)
            .unwrap()
            .try_sub(&u.matmul(&t11).unwrap())
            .unwrap();
        assert!(res.frobenius_norm() < 1e-12 * m.frobenius_norm());
    }

    #[test]
    fn empty_and_scalar() {
        let s = Schur::new(&ComplexMatrix::zeros(0, 0), 1e-15).unwrap();
        assert!(s.eigenvalues().is_empty());
        let s = Schur::new(&ComplexMatrix::diag(&[Complex64::new(3.0, -1.0)]), 1e-15).unwrap();
        assert_eq!(s.eigenvalues(), vec![Complex64::new(3.0, -1.0)]);
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            Schur::new(&ComplexMatrix::zeros(2, 3), 1e-15),
            Err(Error::NotSquare { .. })
        ));
    }
}
