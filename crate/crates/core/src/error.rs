use thiserror::Error;

/// Broad classification of an [`Error`], used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller asked for something the operation does not accept.
    Usage,
    /// Input data failed validation.
    Validation,
    /// An internal invariant was violated.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point set is empty")]
    EmptyPointSet,
    #[error("point index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("query points must be distinct (got {0} twice)")]
    SamePoint(usize),
    #[error("no triangle exists: need at least 3 points, have {0}")]
    NoTriangle(usize),
    #[error("dilation undefined for fewer than 3 points (have {0})")]
    DilationUndefined(usize),
    #[error("no neighbour: index is empty")]
    NoNeighbour,
    #[error("point {0} is already a member of the index")]
    AlreadyPresent(usize),
    #[error("point {0} is not a member of the index")]
    NotPresent(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("edges ({0}, {1}) and ({1}, {0}) both present")]
    AntiParallel(usize, usize),
    #[error("too many edges for exhaustive search: {count} > {cap}")]
    TooManyEdges { count: usize, cap: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: duplicate of the point on line {first}")]
    DuplicatePoint { line: usize, first: usize },
    #[error("duplicate point: indices {0} and {1} have identical coordinates")]
    DuplicateIndex(usize, usize),
    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),
    #[error("metric is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("triangle inequality violated: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleInequality { i: usize, j: usize, k: usize },
    #[error("render requires planar input (dimension {0})")]
    NotPlanar(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Parse { .. }
            | DuplicatePoint { .. }
            | DuplicateIndex(..)
            | NonFinite(_)
            | Asymmetric(..)
            | TriangleInequality { .. }
            | AntiParallel(..)
            | NotPlanar(_) => ErrorKind::Validation,
            Invariant(_) => ErrorKind::Internal,
            _ => ErrorKind::Usage,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
