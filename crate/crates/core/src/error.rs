use thiserror::Error;

/// Broad classes of failure, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input supplied by the caller.
    Input,
    /// An internal invariant (d∘d = 0, compatibility, span membership) broke.
    Internal,
    /// A mathematical validation failed (e.g. Jacobi identity).
    Validation,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("simplex {0:?} lists a vertex twice")]
    DuplicateVertex(Vec<usize>),

    #[error("empty simplex in input")]
    EmptySimplex,

    #[error("simplex {0:?} is not in the complex")]
    NotInComplex(Vec<usize>),

    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("invalid input: {0}")]
    Parse(String),

    #[error("d∘d ≠ 0 starting in degree {degree}")]
    NotACochainComplex { degree: usize },

    #[error("Jacobi identity fails on the triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("vector is not in the span of the basis: {0}")]
    NotInSpan(String),

    #[error("truncation obstruction at coefficient degree {coeff_degree}: {detail}")]
    TruncationObstruction { coeff_degree: usize, detail: String },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotACochainComplex { .. } | Error::NotInSpan(_) => ErrorKind::Internal,
            Error::TruncationObstruction { .. } => ErrorKind::Internal,
            Error::JacobiViolation(..) => ErrorKind::Validation,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
