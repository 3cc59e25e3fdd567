use thiserror::Error;

/// Errors raised by the numerical and structural operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vectors are linearly dependent (residual {residual:.3e} at vector {index})")]
    RankDeficient { index: usize, residual: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not skew-Hermitian (deviation {deviation:.3e})")]
    NotSkewHermitian { deviation: f64 },

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not real symmetric (deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("matrices do not commute (defect {defect:.3e})")]
    NotCommuting { defect: f64 },

    #[error("no convergence after {sweeps} sweeps (residual {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("monomial of degree {degree} exceeds truncation degree {bound}")]
    TruncationOverflow { degree: usize, bound: usize },

    #[error("labels {first} and {second} are not orthogonal (overlap {overlap:.3e})")]
    NotOrthogonal {
        first: usize,
        second: usize,
        overlap: f64,
    },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("labels folded onto target {target} carry different sphere points")]
    IncompatiblePoints { target: usize },

    #[error("A - Id is singular (smallest gap {gap:.3e})")]
    SingularAtOne { gap: f64 },

    #[error("element is not in the open stratum: {0}")]
    WrongStratum(String),

    #[error("eigenspaces are not complexifications of real subspaces (deviation {deviation:.3e})")]
    NotRealizable { deviation: f64 },

    #[error("tuple is zero and cannot be normalized")]
    ZeroTuple,

    #[error("matrix is not traceless (trace {trace:.3e})")]
    NotTraceless { trace: f64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("tuple has no ambient universe")]
    MissingAmbient,

    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
}

pub type Result<T> = std::result::Result<T, Error>;
