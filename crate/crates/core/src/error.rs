use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} would need {needed} items, cap is {cap}")]
    Resource { what: &'static str, needed: u128, cap: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("({0}) is not in the fundamental domain: first letters coincide")]
    NotInDomain(String),

    #[error("rectangle touches the diagonal, refine it: {0}")]
    RefineRequired(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, needed: u128, cap: u64) -> Result<()> {
    if needed > cap as u128 {
        Err(Error::Resource { what, needed, cap })
    } else {
        Ok(())
    }
}
