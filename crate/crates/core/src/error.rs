use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error(
        "weight is not plurisubharmonic: smallest Levi eigenvalue {eigenvalue:e} at {point:?}"
    )]
    NotPlurisubharmonic { point: Vec<f64>, eigenvalue: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid has {nodes} nodes, above the configured cap of {cap}")]
    GridCap { nodes: usize, cap: usize },

    #[error("complex dimension n = {0} is not supported here (n must be 1 or 2)")]
    UnsupportedDimension(usize),

    #[error("scaling overflow; reduce L or rescale φ (max |s·φ| = {0:.1} > 700)")]
    ScalingOverflow(f64),

    #[error("density is negative ({value:e}) at ({re}, {im})")]
    NegativeDensity { value: f64, re: f64, im: f64 },

    #[error("LDL factorization broke down at pivot {index} (|d| = {pivot:e})")]
    Breakdown { index: usize, pivot: f64 },

    #[error("band storage of {entries} entries exceeds the limit of {limit}")]
    BandTooWide { entries: usize, limit: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
