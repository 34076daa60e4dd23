use thiserror::Error;

/// Errors raised by constructions, transforms and experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("enumeration too large: 2^{dimension} codewords exceeds the budget of {budget}")]
    EnumerationTooLarge { dimension: usize, budget: u64 },
    #[error(
        "exact coset enumeration too large: 2^{redundancy} cosets exceeds the budget of {budget}; \
         use Monte Carlo mode instead"
    )]
    CosetBudgetExceeded { redundancy: usize, budget: u64 },
    #[error("{name} out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generator rows are linearly dependent")]
    RankDeficient,
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("degenerate BCH parameters (t={t}, r={r}): dimension {found}, expected {expected}")]
    DegenerateBch {
        t: usize,
        r: usize,
        expected: usize,
        found: usize,
    },
    #[error("not a linear-code enumerator")]
    NotLinearEnumerator,
    #[error("spectrum is not from a linear code: mean-square value {0:e} is negative")]
    NotLinearSpectrum(f64),
    #[error("distribution is not normalized: total mass {0}")]
    NotNormalized(f64),
    #[error("the zero field element has no minimal polynomial")]
    ZeroElement,
    #[error("inequality violated: {0}")]
    InequalityViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(name: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        name,
        detail: detail.into(),
    }
}
