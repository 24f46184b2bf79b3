use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation precondition was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Propagation constants are undefined inside a perfect conductor.
    #[error("propagation constant is undefined for a perfect conductor")]
    ConductorPropagation,

    /// The boundary-matching system could not be solved reliably at one frequency.
    #[error("ill-conditioned boundary system at {frequency_hz} Hz (condition estimate {condition_estimate:.3e})")]
    IllConditioned {
        frequency_hz: f64,
        condition_estimate: f64,
    },

    /// Two spectra that must share a frequency grid do not.
    #[error("frequency grids do not match")]
    GridMismatch,

    /// The background and metal traces coincide everywhere, so the
    /// calibration divisor vanishes at every point.
    #[error("degenerate calibration: background and metal traces coincide at every point")]
    DegenerateCalibration,

    /// No start point led the fit to a convergent minimum.
    #[error("fit did not converge from any start point (best residual {best_residual:.3e})")]
    NonConvergence { best_residual: f64 },

    /// Too few valid points to support the requested operation.
    #[error("insufficient data: {valid} valid points, at least {required} required")]
    InsufficientData { valid: usize, required: usize },

    /// A data or scenario file could not be parsed.
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Filesystem failure, tagged with the path involved.
    #[error("{}: {source}", path.display())]
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

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
