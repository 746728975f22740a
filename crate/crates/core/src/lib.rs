//! Exact sub-Riemannian exterior calculus on the Heisenberg group and slicing of
//! simplicial currents.

pub mod chain_file;
pub mod cli;
pub mod currents;
pub mod error;
pub mod exterior;
pub mod forms;
pub mod heis;
pub mod linalg;
pub mod parser;
pub mod poly;
pub mod quadrature;
pub mod random;
pub mod region;
pub mod rumin;
pub mod scalar;
pub mod shapes;
pub mod slicing;
pub mod verify;

pub use error::{Error, Result};
