use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("test #{0} is empty")]
    EmptyTest(usize),
    #[error("outcome `{0}` is not covered by any test")]
    UncoveredOutcome(String),
    #[error("test #{second} duplicates test #{first}")]
    DuplicateTest { first: usize, second: usize },
    #[error("outcome `{0}` declared twice")]
    DuplicateOutcome(String),
    #[error("unknown outcome `{0}`")]
    UnknownOutcome(String),
    #[error("{{{0}}} is not contained in any test")]
    NotAnEvent(String),
    #[error("event enumeration needs {required} subsets, cap is {cap}")]
    EventCapExceeded { required: u128, cap: u128 },
    #[error("test space is not algebraic: {0}")]
    NotAlgebraic(String),
    #[error("orthoalgebra axiom violated: {0}")]
    AxiomViolation(String),
    #[error("{outcomes} outcomes exceed the dispersion-free search cap of {cap}")]
    OutcomeCapExceeded { outcomes: usize, cap: usize },
    #[error("state has no value for outcome `{0}`")]
    MissingValue(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid metric sample: {0}")]
    InvalidSample(String),
    #[error("point set is empty")]
    EmptySet,
    #[error("cardinality mismatch: {left} vs {right}")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("sequence does not converge within {tol}: final Hausdorff distance {distance}")]
    NotConvergent { distance: f64, tol: f64 },
    #[error("cap around `{center}` contains orthogonal outcomes `{first}` and `{second}`")]
    CapNotTotallyNonOrthogonal {
        center: String,
        first: String,
        second: String,
    },
    #[error("tests {first} and {second} overlap")]
    NotSemiclassical { first: usize, second: usize },
    #[error("test {0} has a single outcome")]
    DegenerateTest(usize),
    #[error("basis is empty")]
    EmptyBasis,
    #[error("extraction selected no tests")]
    EmptySelection,
    #[error("unknown corpus instance `{0}`")]
    UnknownInstance(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
