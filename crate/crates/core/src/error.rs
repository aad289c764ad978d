use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,

    #[error("field order {p}^{k} exceeds the supported maximum of 2^20")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("element index {index} is out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },

    #[error("zero has no multiplicative inverse")]
    InverseOfZero,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,

    #[error("interpolation nodes are not distinct (repeated x = {0})")]
    DuplicateNode(u32),

    #[error("interpolation needs at least one point")]
    EmptyInterpolation,

    #[error("invalid rational map: {0}")]
    InvalidRationalMap(String),

    #[error("invalid partial permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("enumeration of {size} members exceeds the cap of {cap}")]
    CapExceeded { size: String, cap: u64 },

    #[error("iteration budget of {0} steps exhausted")]
    BudgetExhausted(u64),

    #[error("invalid cycle query: {0}")]
    InvalidQuery(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("accumulators over different ensembles or configurations cannot be merged")]
    IncompatibleMerge,

    #[error("moment spec {0:?} is not tracked by this accumulator")]
    UntrackedMoment(Vec<u32>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown verification suite `{name}`; known suites: {known}")]
    UnknownSuite { name: String, known: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
