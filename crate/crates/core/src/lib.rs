//! Quantum Horn bodies at finite multiplicity, the closed-form description of
//! the asymptotic body for a pair of rank-one-projection coefficients, and
//! numeric and exact evidence that this asymptotic body is not convex.

pub mod certalg;
pub mod counterexample;
pub mod eigenfunc;
pub mod error;
pub mod hornbody;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
