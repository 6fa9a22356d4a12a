use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RealMatrix;

/// Which network problem the pair `(A, B)` describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `x_i' = A x_i + B u_i`, coupling through states.
    #[default]
    Primal,
    /// `x_i' = A' x_i + u_i`, `y_i = B' x_i`, coupling through outputs.
    Dual,
}

impl Mode {
    /// Human-readable form of the synchronized trajectory.
    pub fn reference_form(self) -> &'static str {
        match self {
            Mode::Primal => "(r' ⊗ e^{At}) x(0)",
            Mode::Dual => "(r' ⊗ e^{A't}) x(0)",
        }
    }
}

/// The agent model shared by every node of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    a: RealMatrix,
    b: RealMatrix,
    mode: Mode,
}

impl SystemModel {
    pub fn new(a: RealMatrix, b: RealMatrix, mode: Mode) -> Result<Self> {
        let n = a.require_square("system matrix A")?;
        if b.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "SystemModel",
                detail: format!("A is {n}x{n} but B has {} rows", b.rows()),
            });
        }
        if n == 0 {
            return Err(Error::InvalidInput(
                "state dimension must be positive".into(),
            ));
        }
        Ok(SystemModel { a, b, mode })
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn b(&self) -> &RealMatrix {
        &self.b
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// State dimension `n`.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Input (primal) or output (dual) dimension `m`.
    pub fn m(&self) -> usize {
        self.b.cols()
    }

    /// Drift matrix of a single agent: `A` in primal mode, `A'` in dual.
    pub fn drift(&self) -> RealMatrix {
        match self.mode {
            Mode::Primal => self.a.clone(),
            Mode::Dual => self.a.transpose(),
        }
    }
}
