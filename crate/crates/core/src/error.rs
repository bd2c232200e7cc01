use alloc::string::String;
use core::fmt;

use crate::linkage::Criterion;

/// Errors produced by clustering, cutting and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Malformed data or out-of-range parameter.
    InvalidInput(String),
    /// The criterion needs coordinates but only dissimilarities were given.
    CriterionUnsupported(Criterion),
    /// The operation is not defined for the current state (e.g. fewer than
    /// two clusters, or an unfinished dendrogram).
    InvalidState(&'static str),
    /// A broken internal invariant. Seeing this is a bug.
    Internal(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::CriterionUnsupported(c) => {
                write!(f, "{c} linkage requires point coordinates, not a dissimilarity matrix")
            }
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
