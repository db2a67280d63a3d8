use thiserror::Error;

use crate::weingarten::QGFamily;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("{what} needs n = {n}, above the cap of {cap}")]
    CapExceeded { what: String, n: usize, cap: usize },
    #[error("Gram matrix is singular for {family} at n = {n}, N = {big_n}")]
    SingularGram { family: QGFamily, n: usize, big_n: u32 },
    #[error("N = {big_n} is below the minimum {min} for {family}")]
    NTooSmall { family: QGFamily, big_n: u32, min: u32 },
    #[error("size mismatch: {0}")]
    MismatchedSize(String),
    #[error("index {index} out of range 1..={big_n}")]
    IndexOutOfRange { index: u32, big_n: u32 },
    #[error("partition has {blocks} blocks but N = {big_n}")]
    TooManyBlocks { blocks: usize, big_n: u32 },
    #[error("invalid label {label:?} for {family}")]
    InvalidLabel { family: QGFamily, label: String },
    #[error("family mismatch: expected {expected}, found {found}")]
    FamilyMismatch { expected: QGFamily, found: QGFamily },
    #[error("functional has no value for label {0}")]
    MissingLabel(String),
    #[error("vanishing denominator: {0}")]
    VanishingDenominator(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by a configured resource limit.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
