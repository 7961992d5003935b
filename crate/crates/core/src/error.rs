use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("invalid graph parameters: {0}")]
    InvalidGraph(String),

    #[error("{what} limited to {limit}, got {got}")]
    LimitExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("term matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid term: {0}")]
    InvalidTerm(String),

    #[error("step refinement did not reach tolerance {tol:.3e} (last discrepancy {reached:.3e} at {steps} steps)")]
    NonConvergent { tol: f64, reached: f64, steps: usize },

    #[error("state norm drifted by {drift:.3e}")]
    NormDrift { drift: f64 },

    #[error("parameter `{name}` out of domain: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("observable support {support:?} is not contained in region {region:?}")]
    SupportViolation {
        support: Vec<usize>,
        region: Vec<usize>,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("P-K-P sandwich violated: lower margin {lower_margin:.3e}, upper margin {upper_margin:.3e}")]
    SandwichViolation { lower_margin: f64, upper_margin: f64 },

    #[error("configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
