//! Exact construction and verification of trigonometric R-matrices for the
//! twisted quantum affine algebras U_q(A₂ₗ⁽²⁾), U_q(A₂ₗ₋₁⁽²⁾) and U_q(Dₗ₊₁⁽²⁾).
//!
//! Two independent routes are provided: eigenvalues from the twisted tensor
//! product graph, and a direct null-space solve of Jimbo's intertwining
//! equations. Everything runs in exact rational arithmetic.

pub mod branching;
pub mod character;
pub mod error;
pub mod jimbo;
pub mod liealg;
pub mod linalg;
pub mod qrep;
pub mod report;
pub mod sample;
pub mod scalars;
pub mod tensor;
pub mod tpg;
pub mod weight;

pub use error::{Error, Result};
