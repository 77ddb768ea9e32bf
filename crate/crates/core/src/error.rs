use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {n} out of range [1, {cap}] (16 * 2^n bytes per state)")]
    Capacity { n: usize, cap: usize },

    #[error("tau out of range [0, {size}): got {tau}")]
    IndexOutOfRange { tau: usize, size: usize },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    Dimension { left: usize, right: usize },

    #[error("database size {size} outside domain: {reason}")]
    Domain { size: usize, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
