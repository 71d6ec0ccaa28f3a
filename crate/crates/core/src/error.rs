use crate::shor::FactorReport;

/// Errors raised by circuit builders, the simulator and the factoring pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Malformed circuits or layouts: overlapping registers, out-of-range
    /// qubit indices, mismatched widths.
    #[error("structural error: {0}")]
    Structural(String),

    /// The request does not fit the simulator or the supplied registers.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Operand or modulus outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The factoring attempt budget ran out; the trace is kept for inspection.
    #[error("no factor found after {} attempts", report.attempts.len())]
    Exhausted { report: Box<FactorReport> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> Error {
    Error::Capacity(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
