use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A search or solver ran out of budget. `partial` carries the best value
    /// found so far when one exists; it is a bound, never a final answer.
    #[error("resource limit exceeded: {what}{}", partial_suffix(.partial))]
    ResourceLimit { what: String, partial: Option<u64> },

    /// A certified interval straddles the value it is being compared with.
    #[error("indeterminate at this precision: {0}")]
    Indeterminate(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

fn partial_suffix(partial: &Option<u64>) -> String {
    match partial {
        Some(v) => format!(" (best so far {v}, not final)"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn limit(what: impl Into<String>, partial: Option<u64>) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            partial,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

/// Bails out with `Error::InvalidInput` unless the condition holds.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::InvalidInput(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
