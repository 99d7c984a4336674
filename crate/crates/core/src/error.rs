use thiserror::Error;

/// Errors produced across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("qubit count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("identity Pauli has a trivial estimator; use the trace directly")]
    IdentityPauli,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
