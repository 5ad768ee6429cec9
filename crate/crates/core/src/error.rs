use thiserror::Error;

/// Errors raised by the engine. Every variant carries enough context to
/// locate the offending object without rerunning.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("element not in lattice: {0}")]
    NotInLattice(String),
    #[error("invalid category: {0}")]
    Category(String),
    #[error("group too large: order {order} exceeds the supported bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("invalid module: {0}")]
    Module(String),
    #[error("base category mismatch: {0}")]
    BaseMismatch(String),
    #[error("free marker missing: {0}")]
    MarkerMissing(String),
    #[error("invalid chain complex: {0}")]
    ChainComplex(String),
    #[error("unbounded input: {0}")]
    Unbounded(String),
    #[error("truncation insufficient: {0}")]
    Truncation(String),
    #[error("invalid CW data: {0}")]
    Cells(String),
    #[error("isotropy outside family: {0}")]
    Isotropy(String),
    #[error("invalid sequence specification: {0}")]
    Sequence(String),
    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
