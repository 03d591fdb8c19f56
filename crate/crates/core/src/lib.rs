//! Exact characteristic-class calculus, Riemann-Roch integration over model
//! varieties and the combinatorics of Calabi-Yau pairs with simple normal
//! crossing divisors.
//!
//! Every scalar is an exact [`Rational`]; nothing in the crate rounds.
//!
//! - [`symcalc`]: truncated symmetric series in Chern roots (Todd, derived
//!   Todd, Chern characters of exterior powers) and machine checks of the
//!   total-class identities.
//! - [`chow`]: finite cohomology-ring models (points, projective spaces,
//!   products, projective bundles) with integration and Hirzebruch-Riemann-Roch.
//! - [`sncpair`]: multiplicity vectors, stratum tables, weighted Euler
//!   characteristics and the blow-up transform.
//! - [`hodge`]: Hodge diamonds, Betti numbers and determinant-line ledgers.
//! - [`cli`]: the command-line front end used by the `charcalc` binary.

pub mod chow;
pub mod cli;
mod error;
pub mod hodge;
pub mod poly;
pub mod rational;
pub mod report;
pub mod sncpair;
pub mod symcalc;

pub use error::{Error, Result};
pub use rational::Rational;
