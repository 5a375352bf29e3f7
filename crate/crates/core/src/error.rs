use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the domain of {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("non-finite kernel value: {0}")]
    Singularity(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("cannot evaluate: {0}")]
    Evaluation(String),

    #[error("point lies on the branch cut: {0}")]
    Branch(String),

    #[error("no closed form is known for {0}")]
    NoOracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
