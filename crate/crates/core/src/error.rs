use alloc::string::String;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A terminal subset is empty, out of range, or overlaps where it must not.
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    /// A partition is malformed or has too few cells for the operation.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    /// The number of terminals is outside what the operation supports.
    #[error("size limit: {0}")]
    SizeLimit(String),
    /// A joint source failed validation.
    #[error("invalid source: {0}")]
    InvalidSource(String),
    /// A PIN graph failed validation.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    /// An operation was called on an input that does not satisfy its hypothesis.
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    /// Two computations that must agree did not.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = core::result::Result<T, Error>;
