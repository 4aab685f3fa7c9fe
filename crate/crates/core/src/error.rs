use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("range error: {0}")]
    Range(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid volume curve: {0}")]
    InvalidCurve(String),
    #[error("not log Fano in toric model: {0}")]
    NotLogFano(String),
    #[error("non-simplicial cone {0:?} contains the valuation")]
    NonSimplicial(Vec<usize>),
    #[error("cover not crepant-compatible: {0}")]
    CoverIncompatible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
