use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension vector must have at least one positive entry")]
    EmptyDimVector,
    #[error("dimension vector entry {0} exceeds the supported maximum of 255")]
    EntryTooLarge(u32),
    #[error("multi-index {index:?} is outside the poset for dimension vector {dims:?}")]
    OutOfPoset { index: Vec<u8>, dims: Vec<u8> },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("multi-indices {0:?} and {1:?} are not strictly increasing")]
    NotStrictlyLess(Vec<u8>, Vec<u8>),
    #[error("chain of points is not strictly increasing from zero")]
    InvalidChain,
    #[error("monomial is not standard")]
    NotStandard,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("weight is not weakly decreasing: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("support is not linearly independent in degree one")]
    DependentSupport,
    #[error("matrix budget exceeded: {needed} potential entries, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("straightening did not terminate on {0}")]
    StraighteningLoop(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
