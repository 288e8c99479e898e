use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("integration failed at t = {time} ns: {reason}")]
    Integration { time: f64, reason: String },
    #[error("trace drifted by {drift:e} at t = {time} ns")]
    TraceDrift { time: f64, drift: f64 },
    #[error("target angle {target} rad is unreachable (maximum {max} rad)")]
    UnreachableAngle { target: f64, max: f64 },
    #[error("Fock truncation too small: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
