use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Endpoints of two morphisms do not line up.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A value violates the invariants of its type.
    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    /// An enumeration would produce more items than allowed.
    #[error("enumeration refused: {count} items exceed the ceiling of {ceiling}")]
    Ceiling { count: u128, ceiling: u128 },

    #[error("residual of size {size} exceeds the residual bound {bound}")]
    ResidualBound { size: usize, bound: usize },

    /// The operation is only defined for a particular instance.
    #[error("unsupported instance: {0}")]
    Unsupported(String),

    /// A slide whose other end is not uniquely determined by its input.
    #[error("slide is not determined: {0}")]
    SlideUndetermined(String),

    #[error("not a pullback square: {0}")]
    NotPullback(String),

    #[error("not an isomorphism: {0}")]
    NotIso(String),
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid { what, reason: reason.into() }
    }

    pub(crate) fn mismatch(reason: impl Into<String>) -> Self {
        Error::Mismatch(reason.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Refuse an enumeration of `count` items when it exceeds `ceiling`.
pub(crate) fn guard(count: u128, ceiling: usize) -> Result<()> {
    if count > ceiling as u128 {
        Err(Error::Ceiling { count, ceiling: ceiling as u128 })
    } else {
        Ok(())
    }
}
