use thiserror::Error;

/// Errors raised by the engines. Internal invariant violations are kept
/// separate so the CLI can map them onto their own exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point does not lie on the variety: {0}")]
    PointOffVariety(String),

    #[error("series error: {0}")]
    Series(String),

    #[error("arc is not certified on the variety: {0}")]
    UncertifiedArc(String),

    #[error("no arc sampling strategy applies: {0}")]
    NoArcStrategy(String),

    #[error("weights do not make the family weighted homogeneous: {0}")]
    WeightVerification(String),

    #[error("fast path inapplicable: {0}")]
    FastPathInapplicable(String),

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("computation limit exceeded: {0}")]
    Limit(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
