use thiserror::Error;

/// Errors raised across the crate.
///
/// Variants split into validation failures (bad shapes, bad parameters, wrong
/// cardinalities) and numerical failures (singular blocks, simplex breakdown);
/// see [`Error::is_numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid matrix data: {0}")]
    InvalidData(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("index set has {got} elements but rank is {expected}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("selected block is singular")]
    SingularBlock,
    #[error("selected columns do not have full column rank")]
    RankDeficientBlock,
    #[error("expected rank {expected}, found {got}")]
    WrongRank { expected: usize, got: usize },
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("linearizer is not an ah-symmetric reflexive generalized inverse (residual {0:e})")]
    InvalidLinearizer(f64),
    #[error("simplex iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("LP is infeasible (phase-one objective {0:e})")]
    Infeasible(f64),
    #[error("matrix is not skew-symmetric (max residual {0:e})")]
    NotSkew(f64),
    #[error("certificate has non-positive dual objective {0:e}")]
    DegenerateCertificate(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by floating-point degeneracy rather than by
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix
                | Error::SingularBlock
                | Error::RankDeficientBlock
                | Error::IterationLimit(_)
                | Error::NumericalBreakdown(_)
                | Error::Infeasible(_)
                | Error::DegenerateCertificate(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
