//! Exact verification of Hermitian structures on Lie algebras.

pub mod catalog;
pub mod constructions;
pub mod error;
pub mod exterior;
pub mod hermitian;
pub mod liealg;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod sample;
pub mod search;

pub use error::{Error, Result};
pub use exterior::KForm;
pub use liealg::LieAlgebra;
pub use linalg::{Endomorphism, Matrix, Subspace, Vector};
pub use scalar::Scalar;
