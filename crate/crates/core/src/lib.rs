//! Dimension calculus for Hodge, de Rham and Hochschild invariants of smooth
//! proper varieties over a field of any characteristic.
//!
//! The crate evaluates the blow-up, projective-bundle and Künneth formulas on
//! Hodge grids, tracks Hodge–de Rham and HKR degeneracy defects through those
//! formulas, computes twisted cohomology of projective space, and cross-checks
//! everything against the combinatorics of smooth complete toric fans.

pub mod bott;
pub mod cli;
pub mod constructors;
pub mod dsl;
pub mod grid;
pub mod json;
pub mod spectral;
pub mod toric;

pub use grid::{Characteristic, GridPair, HodgeGrid, Violation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("codimension must be at least 2, got {0}")]
    Codimension(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Supplied data contradicts an inequality that holds for every variety.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    /// An operation's hypothesis (characteristic bound, open question) is not met.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
