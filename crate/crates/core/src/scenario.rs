//! JSON scenario files.
//!
//! ```json
//! {
//!   "system": { "a": [[0, 1], [0, 0]], "b": [[0], [1]], "mode": "primal" },
//!   "graph": "complete 3",
//!   "delta": 3.0,
//!   "sim": { "horizon": 10.0, "seed": 7, "x0": "random" },
//!   "outputs": { "dir": "out" }
//! }
//! ```
//!
//! `graph` is either a shortcut string (`"cycle p"`, `"path p"`,
//! `"complete p"`, `"random p density seed"`) or `{"p": 3, "weights":
//! [[i, j, w], ...]}` with one-based indices. `delta` defaults to
//! `-Re(lambda2)` of the graph.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::linalg::RealMatrix;
use crate::simulate::Integrator;
use crate::system::{Mode, SystemModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemSpec,
    #[serde(default)]
    pub graph: Option<GraphSpec>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    pub horizon: Option<f64>,
    pub step: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub x0: InitialState,
    #[serde(default)]
    pub integrator: Option<IntegratorName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegratorName {
    Rk4,
    Exact,
}

impl From<IntegratorName> for Integrator {
    fn from(v: IntegratorName) -> Self {
        match v {
            IntegratorName::Rk4 => Integrator::Rk4,
            IntegratorName::Exact => Integrator::Exact,
        }
    }
}

/// Explicit stacked initial state, or the keyword `"random"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Values(Vec<f64>),
    Keyword(String),
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Keyword("random".into())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn system_model(&self) -> Result<SystemModel> {
        let a = matrix_from_nested(&self.system.a, None, "system.a")?;
        let b = matrix_from_nested(&self.system.b, Some(a.rows()), "system.b")?;
        SystemModel::new(a, b, self.system.mode)
    }
}

/// Row-major nested array to matrix. An empty `b` with `rows` known
/// becomes an `rows x 0` matrix.
fn matrix_from_nested(
    rows: &[Vec<f64>],
    expected_rows: Option<usize>,
    what: &str,
) -> Result<RealMatrix> {
    if rows.is_empty() {
        return match expected_rows {
            Some(0) => Ok(RealMatrix::zeros(0, 0)),
            _ => Err(Error::InvalidInput(format!("{what} is empty"))),
        };
    }
    if rows.iter().all(|r| r.is_empty()) {
        return Ok(RealMatrix::zeros(rows.len(), 0));
    }
    RealMatrix::from_rows(rows).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}
