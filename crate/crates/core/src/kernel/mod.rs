//! Scalars, polynomials, jets, Hermitian factorization and partitions.

pub mod jet;
pub mod ldl;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use jet::{bell, jet_compose, partitions, Jet};
pub use ldl::{ldl_hermitian, HermitianMatrix, LdlFactorization, PivotStrategy, Verdict};
pub use linalg::QMatrix;
pub use poly::MultiPoly;
pub use scalar::{rat, rat_int, Field, GaussianRational, Rational, Ring, Scalar, ScalarKind};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("partition size {n} exceeds the guard {max}")]
    PartitionGuard { n: usize, max: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("inner jet {index} has a nonzero constant term")]
    NonzeroConstant { index: usize },
    #[error("order {order} exceeds a truncation order")]
    OrderTooLarge { order: u32 },
    #[error("matrix is not Hermitian at ({row},{col})")]
    NotHermitian { row: usize, col: usize },
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("exact and float scalars cannot be combined without promotion")]
    KindMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}

/// `k!` as a rational.
pub fn factorial(k: u32) -> Rational {
    (1..=k as i64).fold(rat_int(1), |acc, j| acc * rat_int(j))
}
