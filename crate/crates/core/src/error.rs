use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision loss: {0}")]
    Precision(String),

    #[error("quadrature did not converge for {what}: estimate {estimate:e}, error {error:e}")]
    Quadrature {
        what: String,
        estimate: f64,
        error: f64,
    },

    #[error("{what} did not converge after {iterations} iterations (last residual {last:e})")]
    NonConvergence {
        what: String,
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("invalid `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("grid misalignment: {0}")]
    Grid(String),

    #[error("sequencing error: {0}")]
    Sequencing(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    /// True for errors that signal an iteration or quadrature failing to converge.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::Quadrature { .. } | Error::Precision(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
