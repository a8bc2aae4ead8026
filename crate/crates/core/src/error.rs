use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NctError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("deformation matrices differ between operands")]
    ThetaMismatch,

    #[error("deformation matrix is not antisymmetric: entry ({i},{j})")]
    NotAntisymmetric { i: usize, j: usize },

    #[error("invalid deformation matrix: {0}")]
    InvalidTheta(String),

    #[error("invalid scalar term: {0}")]
    InvalidTerm(String),

    #[error("symbol is not classical: {0}")]
    NotClassical(String),

    #[error("resolution depth shortfall: component {required} requested, depth {available} available")]
    DepthShortfall { required: usize, available: usize },

    #[error("not trace-class by declared order: Re(order) = {order_re} >= -{dim}")]
    NotTraceClass { order_re: f64, dim: usize },

    #[error("canonical sum undefined at this order: {order} is an integer >= -{dim}")]
    IntegerOrder { order: i64, dim: usize },

    #[error("symbol has no finite Weyl support")]
    InfiniteSupport,

    #[error("symbol is not of exact order {0}: leading component vanishes")]
    NotExactOrder(String),

    #[error("fit configuration: {0}")]
    FitConfig(String),

    #[error("numerical non-convergence: {0}")]
    NonConvergent(String),

    #[error("bump profile: {0}")]
    Profile(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, NctError>;
