use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("slot {slot} of operand {position} is assigned twice")]
    DuplicateSlot { position: usize, slot: u8 },
    #[error("invalid slot assignment: {0}")]
    InvalidAssignment(String),
    #[error("unsupported dimension {0}; only 2 and 4 are allowed")]
    UnsupportedDimension(usize),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("interaction graph is disconnected")]
    DisconnectedGraph,
    #[error("need {needed} slots but the device only offers {available}")]
    InsufficientCapacity { needed: usize, available: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("routing made no progress on gate {gate_index}")]
    NoProgress { gate_index: usize },
    #[error("no gate in the library realizes {0}")]
    UnknownConfiguration(String),
    #[error("register of dimension {dimension} exceeds the simulator ceiling of {ceiling}")]
    SimulationRefused { dimension: u128, ceiling: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
