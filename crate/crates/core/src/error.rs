use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("Johnson weight w = {w} exceeds n/2 for n = {n}; use the complement weight w' = {complement} (the map x -> 1 - x preserves distances)")]
    JohnsonWeightTooLarge { n: u32, w: u32, complement: u32 },

    #[error("degree {k} is outside the family range 0..={max}")]
    DegreeOutOfRange { k: usize, max: usize },

    #[error("distance parameter out of range: {0}")]
    DistanceOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("eigensolver did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("Hahn normalization check failed at degree {k}: numeric norm^2 = {norm_sq}")]
    NormalizationMismatch { k: usize, norm_sq: f64 },

    #[error("generic and closed-form values disagree at k = {k}: {generic} vs {closed}")]
    ClosedFormMismatch { k: usize, generic: f64, closed: f64 },

    #[error("degree {k} is outside the feasibility window {window}")]
    OutsideWindow { k: usize, window: String },

    #[error("certificate coefficient F_{index} = {value} is structurally negative")]
    NegativeCoefficient { index: usize, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
