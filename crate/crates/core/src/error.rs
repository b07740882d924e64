use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("vertex {vertex} out of range for n = {n}")]
    InvalidVertex { vertex: u64, n: usize },
    #[error("empty domain: {0}")]
    EmptyDomain(String),
    #[error("edge {0:?} has a vertex outside every part")]
    PartitionMismatch(Vec<u32>),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("construction failed certification: {0}")]
    ConstructionInvalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("partition must be verified before it can be used for a cover")]
    RequiresVerifiedPartition,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("ragged input: {0}")]
    RaggedInput(String),
    #[error("instance too large for the brute-force oracle: {0}")]
    OracleTooLarge(String),
    #[error("certification required: {0}")]
    CertificationRequired(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
