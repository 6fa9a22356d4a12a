//! Coupling gains from the Riccati solution and the shifted-gain
//! certificate: for `σ >= 1` and any `ω`, `A - (σ + jω)BB'P` is Hurwitz,
//! because
//!
//! ```text
//! F^H P + P F = -I - (1 + 2(σ - 1)) P BB' P,   F = A - (σ + jω)BB'P.
//! ```

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, ComplexMatrix, RealMatrix};
use crate::riccati::{solve_are, AreSolution, DEFAULT_ARE_TOL};
use crate::system::{Mode, SystemModel};

/// Default relative tolerance for the certificate identity residual.
pub const DEFAULT_IDENTITY_TOL: f64 = 1e-8;

/// Gains and coupling scale for one system.
#[derive(Debug, Clone)]
pub struct GainSynthesis {
    pub are: AreSolution,
    pub mode: Mode,
    /// `K = B'P` (m x n) in primal mode, `L = PB` (n x m) in dual mode.
    pub gain: RealMatrix,
    pub delta: f64,
    /// `max(1, 1/delta)`.
    pub scale: f64,
}

impl GainSynthesis {
    /// The gain actually applied to the coupling signal: `scale * gain`.
    pub fn scaled_gain(&self) -> RealMatrix {
        self.gain.scale(self.scale)
    }
}

/// `max(1, 1/delta)`.
pub fn coupling_scale(delta: f64) -> f64 {
    (1.0 / delta).max(1.0)
}

/// Solves the Riccati equation for `(A, B)` and forms `K = B'P` (primal)
/// or `L = PB` (dual) together with the coupling scale for `delta`.
pub fn synthesize(system: &SystemModel, delta: f64) -> Result<GainSynthesis> {
    synthesize_with_tol(system, delta, DEFAULT_ARE_TOL)
}

pub fn synthesize_with_tol(system: &SystemModel, delta: f64, tol: f64) -> Result<GainSynthesis> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidDelta(delta));
    }
    let (a, b) = (system.a(), system.b());
    let are = solve_are(a, b, tol)?;
    let gain = match system.mode() {
        Mode::Primal => b.transpose().matmul(&are.p)?,
        Mode::Dual => are.p.matmul(b)?,
    };
    Ok(GainSynthesis {
        are,
        mode: system.mode(),
        gain,
        delta,
        scale: coupling_scale(delta),
    })
}

/// Evidence that `A - (σ + jω)BB'P` is Hurwitz at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftedGainCertificate {
    pub sigma: f64,
    pub omega: f64,
    /// Spectral abscissa of the shifted matrix.
    pub max_real_part: f64,
    /// Frobenius norm of `F^H P + P F + I + (1 + 2(σ-1)) PBB'P`.
    pub identity_residual: f64,
    /// Absolute bound the residual is held to: `tol * (1 + |P|^2)`.
    pub threshold: f64,
}

impl ShiftedGainCertificate {
    pub fn passed(&self) -> bool {
        self.max_real_part < 0.0 && self.identity_residual <= self.threshold
    }
}

/// Certifies one `(σ, ω)` point. Rejects `σ < 1`.
pub fn certify_shifted_gain(
    a: &RealMatrix,
    b: &RealMatrix,
    p: &RealMatrix,
    sigma: f64,
    omega: f64,
    tol: f64,
) -> Result<ShiftedGainCertificate> {
    let ctx = CertifyContext::new(a, b, p)?;
    ctx.certify(sigma, omega, tol)
}

struct CertifyContext {
    a: ComplexMatrix,
    p: ComplexMatrix,
    bbtp: ComplexMatrix,
    pbbtp: ComplexMatrix,
    p_norm: f64,
}

impl CertifyContext {
    fn new(a: &RealMatrix, b: &RealMatrix, p: &RealMatrix) -> Result<Self> {
        let bbt = b.matmul(&b.transpose())?;
        let bbtp = bbt.matmul(p)?;
        let pbbtp = p.matmul(&bbtp)?;
        if a.shape() != p.shape() {
            return Err(Error::DimensionMismatch {
                op: "certify_shifted_gain",
                detail: format!("A is {:?} but P is {:?}", a.shape(), p.shape()),
            });
        }
        Ok(CertifyContext {
            a: a.to_complex(),
            p: p.to_complex(),
            bbtp: bbtp.to_complex(),
            pbbtp: pbbtp.to_complex(),
            p_norm: p.frobenius_norm(),
        })
    }

    fn certify(&self, sigma: f64, omega: f64, tol: f64) -> Result<ShiftedGainCertificate> {
        if !(sigma >= 1.0) {
            return Err(Error::SigmaBelowOne(sigma));
        }
        let s = Complex64::new(sigma, omega);
        let f = self.a.try_sub(&self.bbtp.scale(s))?;
        let max_real_part = eigenvalues(&f, f64::EPSILON)?.abscissa();
        let eps = sigma - 1.0;
        let identity = f
            .adjoint()
            .matmul(&self.p)?
            .try_add(&self.p.matmul(&f)?)?
            .shift_diagonal(Complex64::new(1.0, 0.0))
            .try_add(&self.pbbtp.scale(Complex64::new(1.0 + 2.0 * eps, 0.0)))?;
        Ok(ShiftedGainCertificate {
            sigma,
            omega,
            max_real_part,
            identity_residual: identity.frobenius_norm(),
            threshold: tol * (1.0 + self.p_norm * self.p_norm),
        })
    }
}

/// Rectangular `(σ, ω)` grid: σ log-spaced on `[sigma_min, sigma_max]`,
/// ω evenly spaced on `[-omega_max, omega_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub n_sigma: usize,
    pub omega_max: f64,
    pub n_omega: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            sigma_min: 1.0,
            sigma_max: 100.0,
            n_sigma: 15,
            omega_max: 100.0,
            n_omega: 41,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_min >= 1.0) {
            return Err(Error::SigmaBelowOne(self.sigma_min));
        }
        if !(self.sigma_max >= self.sigma_min) || !self.sigma_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "sigma range [{}, {}] is empty",
                self.sigma_min, self.sigma_max
            )));
        }
        if !(self.omega_max >= 0.0) || !self.omega_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "omega_max must be nonnegative, got {}",
                self.omega_max
            )));
        }
        Ok(())
    }

    pub fn sigmas(&self) -> Vec<f64> {
        match self.n_sigma {
            0 => vec![],
            1 => vec![self.sigma_min],
            k => {
                let (lo, hi) = (self.sigma_min.ln(), self.sigma_max.ln());
                (0..k)
                    .map(|i| (lo + (hi - lo) * i as f64 / (k - 1) as f64).exp())
                    .map(|s| s.max(self.sigma_min))
                    .collect()
            }
        }
    }

    pub fn omegas(&self) -> Vec<f64> {
        linspace(-self.omega_max, self.omega_max, self.n_omega)
    }
}

/// `count` evenly spaced points on `[lo, hi]`; a single point sits at the
/// midpoint.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        k => (0..k)
            .map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)
            .collect(),
    }
}

/// Certifies every `(σ, ω)` pair, σ-major. Points are evaluated in
/// parallel; the output order is the grid order.
pub fn shifted_gain_sweep(
    a: &RealMatrix,
    b: &RealMatrix,
    p: &RealMatrix,
    sigmas: &[f64],
    omegas: &[f64],
    tol: f64,
) -> Result<Vec<ShiftedGainCertificate>> {
    if let Some(&s) = sigmas.iter().find(|&&s| !(s >= 1.0)) {
        return Err(Error::SigmaBelowOne(s));
    }
    let ctx = CertifyContext::new(a, b, p)?;
    let points: Vec<(f64, f64)> = sigmas
        .iter()
        .flat_map(|&s| omegas.iter().map(move |&w| (s, w)))
        .collect();
    points
        .par_iter()
        .map(|&(s, w)| ctx.certify(s, w, tol))
        .collect()
}

/// Worst-case view over a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSummary {
    pub points: usize,
    pub failures: usize,
    pub worst_max_real_part: Option<f64>,
    pub worst_max_real_part_at: Option<(f64, f64)>,
    pub worst_identity_residual: Option<f64>,
    pub passed: bool,
}

impl SweepSummary {
    pub fn from_certificates(certs: &[ShiftedGainCertificate]) -> Self {
        let worst = certs
            .iter()
            .max_by(|x, y| x.max_real_part.total_cmp(&y.max_real_part));
        let worst_res = certs
            .iter()
            .map(|c| c.identity_residual)
            .fold(None, |acc: Option<f64>, r| {
                Some(acc.map_or(r, |a| a.max(r)))
            });
        let failures = certs.iter().filter(|c| !c.passed()).count();
        SweepSummary {
            points: certs.len(),
            failures,
            worst_max_real_part: worst.map(|c| c.max_real_part),
            worst_max_real_part_at: worst.map(|c| (c.sigma, c.omega)),
            worst_identity_residual: worst_res,
            passed: failures == 0,
        }
    }
}
