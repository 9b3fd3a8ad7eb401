use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ruler: {0}")]
    InvalidRuler(String),

    #[error("invalid gap vector: {0}")]
    InvalidGaps(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// The requested computation would exceed the configured work budget.
    #[error("work budget exceeded: {required} units required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    /// A structural size guard (region count, graph size, ...) was hit.
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("operation requires a hyperplane arrangement")]
    NotHyperplaneArrangement,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("samples inconsistent with a polynomial of degree {degree}: at t = {t} expected {expected}, got {actual}")]
    InconsistentSamples {
        degree: usize,
        t: String,
        expected: String,
        actual: String,
    },

    #[error("singular interpolation system: {0}")]
    SingularSystem(String),

    #[error("quasipolynomial has no constituent for residue {residue} mod {period}")]
    MissingConstituent { residue: u64, period: u64 },

    #[error("point lies on arrangement element {index}")]
    PointOnHyperplane { index: usize },

    #[error("tie on edge between vertices {u} and {v}")]
    TieOnEdge { u: usize, v: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
