use thiserror::Error;

use crate::graph::DegreeKind;

pub type Result<T> = std::result::Result<T, Error>;

/// Which end of an edge a degenerate series belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Source(DegreeKind),
    Target(DegreeKind),
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Source(k) => write!(f, "source {k}-degree"),
            Side::Target(k) => write!(f, "target {k}-degree"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("zero variance in the {0} series")]
    ZeroVariance(Side),

    #[error("measure undefined for {edges} edge(s)")]
    DegenerateSize { edges: usize },

    #[error("stub totals differ: {out_total} out-stubs vs {in_total} in-stubs")]
    UnbalancedStubs { out_total: u64, in_total: u64 },

    #[error("degree sequence not balanced after {attempts} attempts")]
    BalanceFailed { attempts: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Machine-readable reason for an undefined measure, if this error is one.
    pub fn undefined_reason(&self) -> Option<&'static str> {
        match self {
            Error::ZeroVariance(_) => Some("zero_variance"),
            Error::DegenerateSize { .. } | Error::EmptyGraph => Some("degenerate_size"),
            _ => None,
        }
    }
}
