use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate in event")]
    NonFinite,

    #[error("operation requires dimension {required}, metric has {found}")]
    UnsupportedDimension { required: usize, found: usize },

    #[error("degenerate velocity: |v| = {v} is not below c = {c}")]
    DegenerateVelocity { v: f64, c: f64 },

    #[error("scale factor must be nonzero")]
    ZeroScale,

    #[error("matrix is singular")]
    SingularMap,

    #[error("matrix is not conformal to the metric (deviation {deviation:e})")]
    NotConformal { deviation: f64 },

    #[error("conformal factor {lambda:e} is not positive")]
    Signature { lambda: f64 },

    #[error("cones are not tangent: interval between vertices is {interval:e}")]
    ConesNotTangent { interval: f64 },

    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),

    #[error("line is not lightlike")]
    NotNull,

    #[error("planes do not meet in a unique line")]
    NoUniqueLine,

    #[error("lines do not span a unique plane: {0}")]
    NoUniquePlane(&'static str),

    #[error("samples are underdetermined: affine rank {rank}, need {needed}")]
    Underdetermined { rank: usize, needed: usize },

    #[error("bad sample input: {0}")]
    Input(String),

    #[error("zero-length image direction for marker {0}")]
    ZeroImageDirection(usize),
}
