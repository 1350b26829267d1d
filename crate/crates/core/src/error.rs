use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("window not certified: {0}")]
    WindowNotCertified(String),
    #[error("window is unbounded and cannot be materialized")]
    UnboundedWindow,
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("characteristic {0} unsupported: {1}")]
    CharacteristicUnsupported(u64, String),
    #[error("product {0} exceeds the materialized filtration bound {1}")]
    OverflowAccess(String, u32),
    #[error("not a twisting cochain: {0}")]
    NotATwistingCochain(String),
    #[error("cochains live on different sides")]
    MixedSides,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
