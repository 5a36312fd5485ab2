use thiserror::Error;

use crate::simplicial::Simplex;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("complex is not orientable; orientation-reversing facet cycle: {cycle:?}")]
    NonOrientable { cycle: Vec<Simplex> },

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("enumeration cap exceeded: {orbits} vertex orbits (cap {cap}), {candidates} candidate maps")]
    CapExceeded {
        orbits: usize,
        cap: usize,
        candidates: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
