use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum MdsError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The eigenvalue at `index` (0-based) of the block named by `context`
    /// is not strictly positive, so the requested dimension cannot be embedded.
    #[error("degenerate rank: eigenvalue {index} is {value:e} (not positive){context}")]
    DegenerateRank {
        index: usize,
        value: f64,
        context: String,
    },

    #[error("format error in {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("join error: {0}")]
    Join(String),

    #[error("metric error: {0}")]
    Metric(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl MdsError {
    pub(crate) fn degenerate(index: usize, value: f64) -> Self {
        MdsError::DegenerateRank {
            index,
            value,
            context: String::new(),
        }
    }

    /// Attach a location (e.g. "subset 3") to a rank error; other variants pass through.
    pub(crate) fn in_block(self, block: impl std::fmt::Display) -> Self {
        match self {
            MdsError::DegenerateRank {
                index,
                value,
                context,
            } => MdsError::DegenerateRank {
                index,
                value,
                context: format!(" in {block}{context}"),
            },
            other => other,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MdsError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        MdsError::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 1 = usage / parameter error, 2 = data error, 3 = numerical error.
    pub fn exit_code(&self) -> i32 {
        match self {
            MdsError::Param(_) => 1,
            MdsError::InvalidInput(_)
            | MdsError::Shape(_)
            | MdsError::Format { .. }
            | MdsError::Join(_)
            | MdsError::Io { .. } => 2,
            MdsError::Numerical(_) | MdsError::DegenerateRank { .. } | MdsError::Metric(_) => 3,
        }
    }
}

pub type Result<T, E = MdsError> = std::result::Result<T, E>;
