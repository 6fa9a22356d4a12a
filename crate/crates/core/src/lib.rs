// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod riccati;
pub mod scenario;
pub mod simulate;
pub mod synthesis;
pub mod system;

pub use error::{Error, Result};
pub use graph::{CouplingMatrix, GraphSpec, GraphSpectrum};
pub use riccati::{is_stabilizable, solve_are, AreSolution};
pub use simulate::{
    build_closed_loop, closed_loop_spectrum_check, integrate, reference_trajectory, simulate,
    sync_error, Integrator, NetworkSetup, SimOptions, SimulationResult,
};
pub use synthesis::{
    certify_shifted_gain, shifted_gain_sweep, synthesize, GainSynthesis, SweepGrid,
};
pub use system::{Mode, SystemModel};
