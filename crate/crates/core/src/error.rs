use thiserror::Error;

/// Progress of an interrupted facet enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationProgress {
    pub inequalities_processed: usize,
    pub inequalities_total: usize,
    pub rays: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Shape or symmetry problems: wrong lengths, non-symmetric input, mixed sizes.
    #[error("structural error: {0}")]
    Structural(String),

    /// A value outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is outside what this build supports (e.g. n too large).
    #[error("unsupported: {0}")]
    Capability(String),

    #[error("resource limit exceeded: {message} (processed {}/{} inequalities, {} rays)",
        .progress.inequalities_processed, .progress.inequalities_total, .progress.rays)]
    ResourceLimit {
        message: String,
        progress: EnumerationProgress,
    },

    /// A mathematical fact the library relies on did not hold.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code used in error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Structural(_) => "structural",
            Error::Domain(_) => "domain",
            Error::Capability(_) => "capability",
            Error::ResourceLimit { .. } => "resource_limit",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::Parse(_) | Error::Json(_) => "parse",
        }
    }
}
