use thiserror::Error;

/// Errors shared by every layer of the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid group parameters: {0}")]
    InvalidGroup(String),
    #[error("witness does not satisfy the statement")]
    WitnessMismatch,
    #[error("prover state already consumed")]
    StateConsumed,
    #[error("extraction impossible: {0}")]
    Extraction(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("public file error: {0}")]
    PublicFile(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
