use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The caller violated an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// A computed object failed one of its own structural checks. This
    /// always signals a bug upstream, never bad input.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("singular linear system ({rows}x{cols})")]
    Singular { rows: usize, cols: usize },

    #[error("path {path} did not exit after {steps} steps")]
    StepCap { path: u64, steps: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
