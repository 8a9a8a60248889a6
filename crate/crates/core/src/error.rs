use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} duplicates edge {first} between {u} and {v}")]
    DuplicateEdge {
        edge: usize,
        first: usize,
        u: usize,
        v: usize,
    },
    #[error("edge {edge} has non-positive weight {weight}")]
    NonPositiveWeight { edge: usize, weight: f64 },
    #[error("vertex {vertex} has non-positive measure {value}")]
    NonPositiveMeasure { vertex: usize, value: f64 },
    #[error("{what} at index {index} is not finite")]
    NonFinite { what: &'static str, index: usize },
    #[error("vertex index {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} has sign {value}, expected 1 or -1")]
    InvalidSign { edge: usize, value: i64 },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("no edge between {u} and {v}")]
    UnknownEdge { u: usize, v: usize },
    #[error("exponent p = {p} must exceed 1")]
    InvalidExponent { p: f64 },
    #[error("exponent p = {p} exceeds the solver cap {cap}")]
    ExponentTooLarge { p: f64, cap: f64 },
    #[error("function vanishes identically")]
    ZeroFunction,
    #[error("solver did not converge: best residual {best_residual:e} after {iterations} iterations")]
    NonConvergence { best_residual: f64, iterations: usize },
    #[error("graph with {n} vertices exceeds the enumeration cap {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("index {k} out of range 1..={n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not antibalanced")]
    NotAntibalanced,
    #[error("vertex {vertex} is isolated")]
    IsolatedVertex { vertex: usize },
    #[error("matrix entry ({i}, {j}) is nonzero but {i} and {j} are not adjacent")]
    SupportViolation { i: usize, j: usize },
    #[error("tensor order p = {p} must be a positive even integer")]
    InvalidTensorOrder { p: f64 },
    #[error("eigenpair residual {residual:e} exceeds tolerance {tol:e}")]
    UncertifiedPair { residual: f64, tol: f64 },
    #[error("bracket for k = {k} is inconsistent: lower {lower} > upper {upper}")]
    InconsistentBracket { k: usize, lower: f64, upper: f64 },
    #[error("no certified upper bound is available for index {k}")]
    UnsupportedIndex { k: usize },
}
