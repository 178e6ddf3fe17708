use thiserror::Error;

/// Errors surfaced by the library and mapped to exit codes by the CLI.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size limit exceeded for {what}: {got} > {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    #[error("graph is not totally ordered")]
    NotTotallyOrdered,
    #[error("graph is not sorted ordered")]
    NotSortedOrdered,
    #[error("representing sequence is degenerate")]
    DegenerateSequence,
    #[error("operation undefined on the empty graph")]
    EmptyGraph,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_limit(what: &'static str, got: usize, limit: usize) -> Result<()> {
    if got > limit {
        Err(Error::SizeLimit { what, limit, got })
    } else {
        Ok(())
    }
}
