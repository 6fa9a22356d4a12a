//! Dense real and complex linear algebra.

mod expm;
mod lu;
mod lyapunov;
mod matrix;
mod schur;
mod spectrum;
mod svd;

pub use expm::expm;
pub use lu::{inverse, solve, Lu};
pub use lyapunov::{lyapunov_residual, solve_lyapunov};
pub use matrix::{kron, ComplexMatrix, Matrix, RealMatrix, Scalar};
pub use schur::Schur;
pub use spectrum::{eigenvalue_residual, eigenvalues, is_hurwitz, Spectrum};
pub use svd::{singular_values, smallest_singular_value};
