//! Exact computations around the differential field of transseries: a
//! finitely supported exp-log fragment with derivation and asymptotic order,
//! differential polynomials, a strong d-independence rank test, a dimension
//! calculus on set descriptors, constant-creation decisions for order-one
//! equations, and a finite co-analysis laboratory.

pub mod cli;
pub mod coanalysis;
pub mod codim;
pub mod constant_param;
pub mod diffpoly;
pub mod dimension;
pub mod error;
pub mod exact_algebra;
pub mod parse;
pub mod transseries;

pub use error::{Error, Result};
