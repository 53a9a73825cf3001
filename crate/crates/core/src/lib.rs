//! Certified verification toolkit for the critical friendly-bisection
//! constant of the dense random graph `G(n, 1/2)`.
//!
//! The crate is organized around a small interval-arithmetic kernel
//! ([`rint`]), certified one-dimensional quadrature ([`quad`]), the
//! correlated Gaussian orthant probability and its derivatives ([`gaussfn`]),
//! the first/second-moment functionals and envelope machinery
//! ([`functional`]), and claim-level verifiers that assemble those pieces
//! into machine-readable certificates ([`certify`]). Exact binomial oracles
//! ([`binom`]) and a small random-graph laboratory ([`graphsim`]) validate
//! the Gaussian approximations and the counting model at desk scale.

// numeric literals throughout keep full printed precision
#![allow(clippy::excessive_precision)]

pub mod binom;
pub mod certify;
pub mod cli;
pub mod functional;
pub mod gaussfn;
pub mod graphsim;
pub mod manifest;
pub mod quad;
pub mod report;
pub mod rint;
pub mod rng;

pub use rint::{Interval, RintError};
