//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the arithmetic, lattice, enumeration and report layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("window mismatch: {left} vs {right} coefficients")]
    WindowMismatch { left: usize, right: usize },
    #[error("window overflow: {0}")]
    WindowOverflow(String),
    #[error("rank deficient generator set: rank {rank} < {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("lattice not contained in the claimed superlattice")]
    NotContained,
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {what} would need {needed} > {limit}")]
    SizeGuard { what: String, needed: u128, limit: u128 },
    #[error("invalid parahoric tuple: {0}")]
    InvalidTuple(String),
    #[error("infeasible index: {0}")]
    InfeasibleIndex(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
