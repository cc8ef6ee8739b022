use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("invalid number {0:?}: expected \"p/q\", an integer or a decimal")]
    Number(String),
    #[error("density pieces must tile [0, 1]: {0}")]
    Tiling(String),
    #[error("density value {0} outside [0, 1]")]
    Value(String),
    #[error("district count must be at least 1")]
    DistrictCount,
    #[error("missing density for party {0}")]
    MissingDensity(u8),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("expected {expected} districts, found {found}")]
    DistrictCount { expected: usize, found: usize },
    #[error("district {index} has measure {measure}, expected 1/{m}")]
    DistrictMeasure { index: usize, measure: String, m: usize },
    #[error("districts overlap or do not cover [0, 1] (union measure {0})")]
    Coverage(String),
    #[error("tie-breaking map has {found} labels for {expected} districts")]
    TiebreakCount { expected: usize, found: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CutError {
    #[error("cut fraction must be positive, got {0}")]
    NonPositiveFraction(String),
    #[error("cut fraction must lie in [0, 1], got {0}")]
    FractionOutOfRange(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{atoms} atoms exceeds the enumeration bound of {bound}")]
    TooLarge { atoms: usize, bound: usize },
    #[error("atom count {atoms} must equal m * q = {expected}")]
    Shape { atoms: usize, expected: usize },
    #[error("atom value {0} outside [0, 1]")]
    Value(String),
}
