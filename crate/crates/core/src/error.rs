use thiserror::Error;

/// Errors surfaced by every module of the crate.
///
/// The variants are grouped by how a caller is expected to react: bad input,
/// a size cap that can be raised, or a broken internal invariant.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("size cap exceeded: {what} is {actual}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn check_cap(what: &'static str, actual: usize, cap: usize) -> Result<()> {
        if actual > cap {
            Err(Error::SizeCap { what, actual, cap })
        } else {
            Ok(())
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
