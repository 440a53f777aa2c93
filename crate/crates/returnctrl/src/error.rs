use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction error ({constraint}): {detail}")]
    Construction { constraint: String, detail: String },

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("coupling degeneracy: {0}")]
    CouplingDegeneracy(String),

    #[error("weight configuration error: {0}")]
    WeightConfig(String),

    #[error("conjugate gradient stalled at relative residual {residual:.3e} after {iterations} iterations")]
    Convergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("Picard iteration stopped after {iterations} steps with relative update {last_update:.3e}")]
    NotConverged { iterations: usize, last_update: f64 },

    #[error("Picard iteration diverged at step {step}: update norms {history:?}; try smaller initial data")]
    Divergence { step: usize, history: Vec<f64> },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    pub fn construction(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Construction {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_)
            | Error::Config(_)
            | Error::Geometry(_)
            | Error::Precondition(_)
            | Error::Io { .. }
            | Error::Serialization(_) => 2,
            Error::Construction { .. }
            | Error::Consistency(_)
            | Error::CouplingDegeneracy(_)
            | Error::WeightConfig(_) => 3,
            Error::Convergence { .. } | Error::NotConverged { .. } | Error::Divergence { .. } => 4,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Config(_) => "config",
            Error::Geometry(_) => "geometry",
            Error::Precondition(_) => "precondition",
            Error::Construction { .. } => "construction",
            Error::Consistency(_) => "consistency",
            Error::CouplingDegeneracy(_) => "coupling-degeneracy",
            Error::WeightConfig(_) => "weight-config",
            Error::Convergence { .. } => "convergence",
            Error::NotConverged { .. } => "not-converged",
            Error::Divergence { .. } => "divergence",
            Error::Io { .. } => "io",
            Error::Serialization(_) => "serialization",
        }
    }
}
