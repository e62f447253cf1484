use std::path::PathBuf;

use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A table (sieve, zero list, integer range) is too small for the request.
    #[error("out of range: {what} (requires limit {required})")]
    OutOfRange { what: String, required: u64 },

    #[error("{path}:{line}: cannot parse {content:?}")]
    Format {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("pole of the Gamma function at s = {0}")]
    Pole(Complex64),

    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical method did not reach its tolerance.
    #[error("accuracy failure in {context}: achieved {achieved:e}, wanted {wanted:e}")]
    Accuracy {
        context: String,
        achieved: f64,
        wanted: f64,
    },

    #[error("non-finite summand at gamma = {gamma}")]
    NonFinite { gamma: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn out_of_range(what: impl Into<String>, required: u64) -> Self {
        Error::OutOfRange {
            what: what.into(),
            required,
        }
    }

    pub(crate) fn accuracy(context: impl Into<String>, achieved: f64, wanted: f64) -> Self {
        Error::Accuracy {
            context: context.into(),
            achieved,
            wanted,
        }
    }
}
