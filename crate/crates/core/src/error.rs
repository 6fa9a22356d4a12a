use num_complex::Complex64;
use thiserror::Error;

/// Everything that can go wrong between reading a system and simulating
/// the coupled network.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("matrix is singular to working precision in {0}")]
    Singular(&'static str),

    #[error("matrix exponential overflows (norm of m*t = {norm:e})")]
    ExpOverflow { norm: f64 },

    #[error("Lyapunov operator is not Hurwitz (max Re(lambda) = {max_real_part:e})")]
    NotHurwitz { max_real_part: f64 },

    #[error("negative coupling weight {weight} on arc ({i}, {j})")]
    NegativeWeight { i: usize, j: usize, weight: f64 },

    #[error("invalid coupling matrix: {0}")]
    InvalidCoupling(String),

    #[error("coupling graph is not connected: no node is reachable from every other node")]
    Disconnected,

    #[error("zero eigenvalue of the coupling matrix has multiplicity {0}, expected 1")]
    ZeroMultiplicity(usize),

    #[error("left null vector cannot be normalized (r.1 = {0:e})")]
    NullVectorNormalization(f64),

    #[error("left null vector fails r'G = 0, r'1 = 1 (residual {residual:e})")]
    BadNullVector { residual: f64 },

    #[error("PBH test failed at eigenvalue λ={eigenvalue}: smallest singular value of [A-λI, B] is {singular_value:e}")]
    Unstabilizable {
        eigenvalue: Complex64,
        singular_value: f64,
    },

    #[error("Riccati solver stalled at residual {residual:e} (target {target:e})")]
    RiccatiResidual { residual: f64, target: f64 },

    #[error("Hamiltonian has {stable} stable eigenvalues, expected {expected}")]
    HamiltonianSplit { stable: usize, expected: usize },

    #[error("delta must be positive, got {0}")]
    InvalidDelta(f64),

    #[error("coupling strength condition violated: -Re(lambda2) = {strength} < delta = {delta}")]
    CouplingTooWeak { strength: f64, delta: f64 },

    #[error("sigma = {0} is below 1; the shifted-gain certificate requires sigma >= 1")]
    SigmaBelowOne(f64),

    #[error("state became non-finite at t = {time}")]
    IntegrationDiverged { time: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the failure is a violated modelling hypothesis
    /// (stabilizability, connectivity, coupling strength, sign of delta)
    /// rather than a numerical breakdown.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::Unstabilizable { .. }
                | Error::Disconnected
                | Error::ZeroMultiplicity(_)
                | Error::InvalidDelta(_)
                | Error::CouplingTooWeak { .. }
                | Error::NegativeWeight { .. }
                | Error::InvalidCoupling(_)
        )
    }
}
