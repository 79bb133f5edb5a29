use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix must be square with rank at least 1")]
    Degenerate,
    #[error("matrix is not symmetric at entry ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("half-integer surgery type needs even rank, got {0}")]
    OddRank(usize),
    #[error("matrix is singular modulo 2")]
    SingularMod2,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid half-integer certificate: {0}")]
    InvalidCertificate(String),
    #[error("matrix is not in the required block shape: {0}")]
    BlockShape(String),
    #[error("sublattice has even index {0}")]
    EvenIndex(BigInt),
    #[error("inclusion is not of full rank")]
    NotFullRank,
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid form constraints: {0}")]
    InvalidConstraints(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("invalid fraction {p}/{q}")]
    InvalidFraction { p: u64, q: u64 },
    #[error("row {row}: {msg}")]
    Table { row: usize, msg: String },
    #[error("search budget exhausted: {0}")]
    SearchExhausted(String),
    #[error("determinant mismatch: |det Q| = {form}, |H_1| = {space}")]
    DeterminantMismatch { form: BigInt, space: u64 },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
