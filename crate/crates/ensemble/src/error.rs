use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("district count {m} is not in 1..={nodes}")]
    DistrictCount { m: usize, nodes: usize },
    #[error("population tolerance {0} is not in [0, 1)")]
    Epsilon(f64),
    #[error("duplicate node id {0}")]
    DuplicateNode(String),
    #[error("edge references unknown node {0}")]
    UnknownNode(String),
    #[error("edge joins node {0} to itself")]
    SelfLoop(String),
    #[error("{0}")]
    Geometry(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid deviation: {0}")]
    Deviation(String),
    #[error("dataset {dataset:?} missing on node {node}")]
    MissingDataset { dataset: String, node: String },
}

#[derive(Debug, Error)]
pub enum DistrictingError {
    #[error("assignment has {got} entries for {expected} nodes")]
    Length { got: usize, expected: usize },
    #[error("district label {label} is outside 1..={m}")]
    Label { label: usize, m: usize },
    #[error("district {0} is empty")]
    Empty(usize),
    #[error("district {0} is not contiguous")]
    Contiguity(usize),
    #[error("district {district} has population {pop}, outside tolerance")]
    Population { district: usize, pop: u64 },
}

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("steps ({steps}) must be at least burn-in ({burn_in})")]
    Schedule { steps: usize, burn_in: usize },
    #[error("no valid initial districting found after {attempts} attempts")]
    Seeding { attempts: usize },
    #[error("initial districting invalid: {0}")]
    Initial(#[from] DistrictingError),
    #[error("state after step {step} is invalid: {source}")]
    Invariant { step: usize, source: DistrictingError },
}

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("graph has {0} nodes; enumeration supports at most 64")]
    TooLarge(usize),
}
