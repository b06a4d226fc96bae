use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("form is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("matrix is not invertible over {0}")]
    NotInvertible(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("closure exceeded {0} elements (infinite group or cap too small)")]
    NotFiniteWithinBound(usize),

    #[error("orbit exceeded {0} points")]
    OrbitExplosion(usize),

    #[error("invalid root system type: {0}")]
    InvalidType(String),

    #[error("group is not finite: {0}")]
    NotFinite(String),

    #[error("not a subgroup of the acting group: {0}")]
    NotASubgroup(String),

    #[error("generating sets do not define a common group: {0}")]
    MismatchedGroups(String),

    #[error("seed set incomplete for dimension {dimension}: found {found} classes, expected {expected}")]
    IncompleteSeedSet {
        dimension: usize,
        found: usize,
        expected: usize,
    },

    #[error("no classification available in dimension {0}")]
    UnsupportedDimension(usize),

    #[error("conjugacy undecided within search bound {0}")]
    UndecidedConjugacy(u32),

    #[error("group not found in catalog")]
    NotInCatalog,

    #[error("unsupported catalog format version {found} (reader supports {supported})")]
    FormatVersionMismatch { found: u64, supported: u64 },

    #[error("catalog checksum mismatch")]
    ChecksumMismatch,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("bound check failed: {0}")]
    AssertionFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
