//! Numerical matrix analysis around symmetric norms and anti-norms on
//! positive semi-definite matrices: a catalog of (anti-)norms as gauges on
//! singular values, majorization with constructive witnesses, block
//! decompositions, trace-functional convexity checks, and a randomized
//! verifier for a registry of inequalities with counterexample searches.

pub mod blockdecomp;
pub mod error;
pub mod functions;
pub mod majorization;
pub mod norms;
pub mod report;
pub mod section5;
pub mod spectral;
pub mod verifier;

pub use error::{Error, Result};
