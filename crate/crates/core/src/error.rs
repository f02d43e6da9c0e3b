use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("set system is not closed under subsets: missing {missing:?}")]
    ClosureViolation { missing: Vec<usize> },
    #[error("the empty set cannot be a member of a simplicial complex")]
    EmptySetMember,
    #[error("bad generator parameter: {0}")]
    BadParameter(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("operation needs a single product term with coefficient 1")]
    NotASingleTerm,
    #[error("operation needs a non-empty product term")]
    EmptyTerm,
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("level {0} is attained by the function")]
    ValueInRange(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("matrix is singular")]
    Singular,
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("bad order {0} for the Wu characteristic (need k >= 2)")]
    BadOrder(usize),
    #[error("{what} has size {size}, above the cap {cap}")]
    TooLarge { what: String, size: usize, cap: usize },
    #[error("function is not injective on the cell {0:?}")]
    NotLocallyInjective(Vec<usize>),
    #[error("exact enumeration needs at most {cap} zero-cells per term, found {found}")]
    TooLargeForExact { found: usize, cap: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("spectral drift {drift:e} at t={t} exceeds the bound; reduce the step")]
    StepTooLarge { t: f64, drift: f64 },
    #[error("contraction bound {bound} is not below 1")]
    ContractionBoundViolated { bound: f64 },
    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("bad signature: {0}")]
    BadSignature(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("matrix market: {0}")]
    MatrixMarket(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by a configurable resource cap.
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::TooLargeForExact { .. })
    }
}
