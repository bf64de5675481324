use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("elements belong to different posets or families")]
    FamilyMismatch,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("{0} is not comparable to {1}")]
    NotComparable(String, String),
    #[error("invalid stage configuration: {0}")]
    InvalidStages(String),
    #[error("stage premise does not hold: {0}")]
    PremiseViolated(String),
    #[error("input set is not an antichain")]
    NotAntichain,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
