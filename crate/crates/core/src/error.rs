use thiserror::Error;

pub type Result<T, E = GeqieError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeqieError {
    /// A numeric argument is outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },

    /// The encoding needs more qubits than the configured cap allows.
    #[error("capacity exceeded: {required} qubits required, {allowed} allowed")]
    Capacity { required: usize, allowed: usize },

    /// An encoding model violates its own contract (e.g. a non-injective position map).
    #[error("model error: {0}")]
    Model(String),

    #[error("unknown encoding method `{0}`")]
    NotFound(String),

    #[error("image family mismatch: method `{method}` expects {expected}, got {found}")]
    FamilyMismatch {
        method: String,
        expected: String,
        found: String,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate normalization scale: {statistic} is zero")]
    DegenerateScale { statistic: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for GeqieError {
    fn from(err: std::io::Error) -> Self {
        GeqieError::Io(err.to_string())
    }
}

impl From<serde_json::Error> for GeqieError {
    fn from(err: serde_json::Error) -> Self {
        GeqieError::Parse(err.to_string())
    }
}
