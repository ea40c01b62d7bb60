use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("cannot parse coefficient {0:?}")]
    BadCoefficient(String),
    #[error("forms live in different rings")]
    RingMismatch,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("monomial {monomial} has degree {found}, expected {expected}")]
    Inhomogeneous {
        monomial: String,
        found: u32,
        expected: u32,
    },
    #[error("zero form")]
    ZeroForm,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("linear forms L_{0} and L_{1} are proportional")]
    DependentLinearForms(usize, usize),
    #[error("the forms p_i are linearly dependent (rank {rank} < {expected})")]
    NotFull { rank: usize, expected: usize },
    #[error("points are not in general position")]
    NotGeneralPosition,
    #[error("general position not reached after {0} resamples")]
    RetriesExhausted(usize),
    #[error("degree window too small for Betti cells {0:?}")]
    WindowTooSmall(Vec<(usize, i64)>),
    #[error("monomial ideal is not stable: {generator} needs {witness}")]
    NotStable { generator: String, witness: String },
    #[error("{0}")]
    NotMinimal(String),
    #[error("entry does not fit in 64 bits: {0}")]
    Overflow(String),
    #[error("empty Betti table")]
    EmptyTable,
}
