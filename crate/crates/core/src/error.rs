use thiserror::Error;

/// Errors raised by the state-vector, density-matrix and graph kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("qubit count {0} exceeds the supported maximum of {1}")]
    Capacity(usize, usize),

    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("gate of arity {arity} applied to {targets} targets")]
    ArityMismatch { arity: usize, targets: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("outcome {outcome} has probability {probability:e}; branch is impossible")]
    ImpossibleBranch { outcome: u8, probability: f64 },

    #[error("dimension mismatch: expected {expected} qubits, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("expected {expected} values, got {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("value {value} at position {index} outside [-1, 1]")]
    ValueOutOfRange { index: usize, value: f64 },

    #[error("invalid pauli string {0:?}")]
    InvalidPauli(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("pauli strings anticommute; product is not hermitian")]
    Anticommuting,
}

pub type Result<T> = std::result::Result<T, QuantumError>;
