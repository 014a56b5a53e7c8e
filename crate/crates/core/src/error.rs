use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("unknown preset `{name}` (valid: {})", valid.join(", "))]
    UnknownPreset {
        name: String,
        valid: Vec<&'static str>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular resolvent at delta = {delta:e} rad/s (condition number {condition:e})")]
    SingularResolvent { delta: f64, condition: f64 },

    #[error("search did not converge: {0}")]
    NonConvergence(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the user's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularResolvent { .. } | Error::NonConvergence(_)
        )
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
