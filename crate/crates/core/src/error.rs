use thiserror::Error;

use crate::solver::DiagnosticsRecord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid grid, solver, or experiment parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was called with inputs that violate its contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// Non-finite state or a mass jump; carries whatever diagnostics were
    /// recorded before the failure.
    #[error("divergence at step {step} (t = {time}): {reason}")]
    Divergence {
        step: usize,
        time: f64,
        reason: String,
        partial: Vec<DiagnosticsRecord>,
    },

    /// Too much mass near the box edge for a periodic-wrap-sensitive quantity.
    #[error("edge contamination: edge mass fraction {fraction:e} exceeds {limit:e}")]
    Contamination { fraction: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
