//! Compatibility of quasilinear first-order systems with local and nonlocal
//! first-order Hamiltonian operators: geometric condition systems and an
//! independent cotangent-covering check.

pub mod compat;
pub mod corpus;
pub mod covering;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod operators;
pub mod problem;
pub mod report;
pub mod systems;
pub mod tensor;

pub use error::{CoreError, Result};
