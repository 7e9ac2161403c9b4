use thiserror::Error;

pub type Result<T> = std::result::Result<T, TcpError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TcpError {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error(
        "invalid tensor shape: order {order}, dimension {dim} (need order >= 2, dimension >= 1)"
    )]
    InvalidShape { order: usize, dim: usize },

    #[error("index {index:?} is invalid for a tensor of order {order} and dimension {dim}")]
    InvalidIndex {
        index: Vec<usize>,
        order: usize,
        dim: usize,
    },

    #[error("operation requires an even tensor order, got {0}")]
    OddOrder(usize),

    #[error("real root of even degree {0} is ambiguous on negative inputs")]
    EvenRoot(u32),

    #[error("tensor is not positive diagonal: {0}")]
    NotPositiveDiagonal(String),

    #[error("not a P-tensor certificate: {0}")]
    NotPCertificate(String),

    #[error("degenerate q: (-q)_+ is zero")]
    DegenerateQ,

    #[error("degenerate z: the solution is zero")]
    DegenerateZ,

    #[error(
        "candidate is not a solution: max violation {max_violation:e} exceeds tolerance {tol:e}"
    )]
    SolutionRejected { max_violation: f64, tol: f64 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("dimension {dim} exceeds the solver limit {max_dim}")]
    DimensionTooLarge { dim: usize, max_dim: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl TcpError {
    /// True for failures of a mathematical hypothesis (non-P input, degenerate
    /// data, rejected candidate) as opposed to malformed input.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            TcpError::NotPositiveDiagonal(_)
                | TcpError::NotPCertificate(_)
                | TcpError::DegenerateQ
                | TcpError::DegenerateZ
                | TcpError::SolutionRejected { .. }
                | TcpError::InvariantViolation(_)
        )
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(TcpError::DimensionMismatch { expected, found })
    }
}
