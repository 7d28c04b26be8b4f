//! Exact construction, iteration, sampling and metric analysis of
//! d-stochastic measures with self-similar support.
//!
//! The pipeline: a sparse rational probability tensor on a multi-index grid
//! (a *transformation matrix*) induces a partition of the unit cube, an
//! iterated function system with probabilities, a Hutchinson operator on
//! rectangle sets and a Markov operator on grid measures. This crate builds
//! all of those exactly (rational arithmetic end to end), solves the
//! similarity-dimension equation for the attractor, samples the fixed-point
//! measure by chaos game, and measures distances between grid measures
//! (Wasserstein-1 via an exact transport solver, a conditional-kernel L1
//! metric, copula sup-distance bounds, KS uniformity tests).
//!
//! All values are immutable after construction and safe to share across
//! threads; every operation is deterministic (sampling is deterministic
//! given the recorded RNG algorithm and seed).

pub mod analysis;
pub mod cellset;
pub mod chaos;
pub mod constructions;
pub mod error;
pub mod formats;
pub mod grid;
pub mod ifsp;
pub mod matrix;
pub mod rational;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use rational::Rational;
