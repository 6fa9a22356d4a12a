use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Matrix, Scalar};
use super::schur::Schur;
use super::svd::smallest_singular_value;
use crate::error::Result;

/// Eigenvalues of a square matrix, repeated by algebraic multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>) -> Self {
        Spectrum { values }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest real part (spectral abscissa); `-inf` when empty.
    pub fn abscissa(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// Values sorted by real part then imaginary part; for display.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

impl IntoIterator for Spectrum {
    type Item = Complex64;
    type IntoIter = std::vec::IntoIter<Complex64>;
    fn into_iter(self) -> Self::IntoIter {
        self.values.into_iter()
    }
}

/// All eigenvalues of `m`. `tol` is the relative deflation threshold of
/// the QR iteration; failure to converge is reported as an error.
pub fn eigenvalues<T: Scalar>(m: &Matrix<T>, tol: f64) -> Result<Spectrum> {
    let schur = Schur::new(&m.to_complex(), tol)?;
    Ok(Spectrum::new(schur.eigenvalues()))
}

/// True iff every eigenvalue has real part below `-margin`.
pub fn is_hurwitz<T: Scalar>(m: &Matrix<T>, margin: f64) -> Result<bool> {
    let spec = eigenvalues(m, f64::EPSILON)?;
    Ok(spec.values().iter().all(|z| z.re < -margin))
}

/// Smallest singular value of `m - lambda I`: a backward-error certificate
/// for a computed eigenvalue.
pub fn eigenvalue_residual<T: Scalar>(m: &Matrix<T>, lambda: Complex64) -> Result<f64> {
    let shifted: ComplexMatrix = m.to_complex().shift_diagonal(-lambda);
    smallest_singular_value(&shifted)
}
