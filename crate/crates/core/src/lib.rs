//! Bivariate copulas through their Markov kernels.
//!
//! Exact kernels for Archimedean, extreme-value, checkerboard and
//! Marshall–Olkin copulas; kernel-based metrics and dependence measures;
//! rank-based estimators; a conditional-inversion sampler; and a seeded
//! replication-study runner.

pub mod archimedean;
pub mod checkerboard;
pub mod convergence;
pub mod copula;
pub mod counterexamples;
pub mod error;
pub mod estimation;
pub mod extreme_value;
pub mod io;
pub mod metrics;
pub mod registry;
pub mod sampling;
pub mod study;

pub use error::{Error, Result};
