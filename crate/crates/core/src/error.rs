use thiserror::Error;

/// Errors reported by the solvers and their helpers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}-D vs {1}-D")]
    DimensionMismatch(usize, usize),

    #[error("only 1-D and 2-D points are supported, got {0} coordinates")]
    UnsupportedDimension(usize),

    #[error("coordinates must be finite")]
    NonFinite,

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("index set is empty")]
    EmptySubset,

    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("the empty location requires an empty-solution factor alpha")]
    MissingAlpha,

    #[error("coincident points do not determine a ball center")]
    DegeneratePair,

    #[error("mean pairwise distance needs at least two points")]
    TooFewPoints,

    #[error("exhaustive oracle is limited to {max} points, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("unknown fixture '{0}'")]
    UnknownFixture(String),

    #[error("malformed input at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
