use thiserror::Error;

/// Errors raised by the length-spectrum toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polynomial must be non-constant")]
    DegreeZero,
    #[error("zero element has no lower bound")]
    ZeroElement,
    #[error("element is not in the denominator class: {0}")]
    NotInClass(String),
    #[error("class parameters disagree: {0}")]
    ClassMismatch(String),
    #[error("polynomial is reducible over Q: {0}")]
    Reducible(String),
    #[error("number field degree {0} exceeds the supported maximum of 16")]
    DegreeTooLarge(usize),
    #[error("could not certify root enclosures: {0}")]
    RootIsolation(String),
    #[error("scalar kinds do not match: {0}")]
    ScalarMismatch(String),
    #[error("operation not supported for this scalar kind: {0}")]
    UnsupportedScalar(String),
    #[error("generator index {index} out of range for a tuple of {arity}")]
    Arity { index: usize, arity: usize },
    #[error("matrix is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("cannot decide at the current precision: {0}")]
    Undecided(String),
    #[error("relation repair failed: no real determinant-one solution")]
    NoRealSolution,
    #[error("relation repair failed: no rational determinant-one solution found")]
    NoRationalSolution,
    #[error("relation repair failed: degenerate solution space ({0})")]
    DegenerateSolution(String),
    #[error("empty word has no conjugacy class")]
    EmptyWord,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("generators commute")]
    Commuting,
    #[error("search caps exhausted; nearest miss {nearest_miss} at (k, m) = ({k}, {m})")]
    CapsExhausted { nearest_miss: f64, k: u32, m: u32 },
    #[error("lower-left entry vanishes; perturb the third generator")]
    DegenerateEntry,
    #[error("sampling failed after {0} attempts")]
    SamplingFailed(usize),
    #[error("missing tail model for tabulated sequence")]
    MissingTailModel,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
