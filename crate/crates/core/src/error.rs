use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the correlation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A computation would exceed one of the configured resource budgets.
    #[error("budget exceeded: {what} needs {requested}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An identity that must hold exactly did not.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("malformed cache file {path}, line {line}: {reason}")]
    CacheFormat {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_budget(what: &'static str, requested: u128, cap: u128) -> Result<()> {
    if requested > cap {
        Err(Error::BudgetExceeded {
            what,
            requested,
            cap,
        })
    } else {
        Ok(())
    }
}
