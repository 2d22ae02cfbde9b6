use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant onto an exit code
/// through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,

    #[error("alphabet size {0} exceeds the supported maximum of 255 generators")]
    AlphabetTooLarge(usize),

    #[error("graded space with n = {n}, degree = {degree} does not fit in a 64-bit index")]
    DimensionOverflow { n: usize, degree: usize },

    #[error("letter {letter} is outside 1..={n}")]
    LetterOutOfRange { letter: i64, n: usize },

    #[error("word of length {len} exceeds the truncation degree {degree}")]
    WordTooLong { len: usize, degree: usize },

    #[error("alphabet sizes differ ({left} vs {right})")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("outer_cap = 0 with a nonconstant outer series is degenerate")]
    DegenerateOuterCap,

    #[error("point has norm {norm} but must lie in the open unit ball")]
    OutsideBall { norm: f64 },

    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("symbol fails the self-map check: row norm estimate {estimate} > 1")]
    NotSelfMap { estimate: f64 },

    #[error("point is not fixed by the symbol (residual {residual:e})")]
    NotFixedPoint { residual: f64 },

    #[error("conjugation tail bound {bound:e} exceeds {limit:e}")]
    ConjugationTail { bound: f64, limit: f64 },

    #[error("operation requires an exact (phi(0) = 0) composition matrix")]
    NotExact,

    #[error("norm estimate {estimate} exceeds the upper bound {upper}")]
    BoundViolation { estimate: f64, upper: f64 },

    #[error("{what} has size {size}, above the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("non-finite coefficient encountered")]
    NonFinite,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl Error {
    /// 1 for malformed input, 3 for inconclusive computations, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Json { .. } | Error::Parse(_) | Error::Io(_) => 1,
            Error::Inconclusive(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
