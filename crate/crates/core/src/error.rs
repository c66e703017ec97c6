use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch, {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("SVD of a {rows}x{cols} matrix did not converge after {sweeps} sweeps")]
    SvdNoConvergence {
        rows: usize,
        cols: usize,
        sweeps: usize,
    },
    #[error("{op}: matrix is singular to working precision")]
    Singular { op: &'static str },
    #[error("requested rank {rank} exceeds dimension {n}")]
    RankTooLarge { rank: usize, n: usize },
    #[error("{op}: argument is zero within tolerance")]
    ZeroArgument { op: &'static str },
    #[error("{op}: {what} is not unitary within tolerance (residual {residual:.3e})")]
    NotUnitary {
        op: &'static str,
        what: &'static str,
        residual: f64,
    },
    #[error("block matrices have incompatible block structure")]
    BlockStructure,
    #[error("unknown order kind `{0}`")]
    UnknownKind(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
