use thiserror::Error;

/// Errors raised by the differential-algebra kernel.
///
/// Every variant maps to a stable machine-readable code through
/// [`Error::code`]; the CLI puts that code in its JSON error object.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("polynomial has no leader: it lies in the coefficient field")]
    NoLeader,
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
    #[error("the system generates the unit ideal")]
    UnitIdeal,
    #[error("chain invariant violated: {0}")]
    InvalidChain(String),
    #[error("ranking must be orderly to read off the order")]
    NotOrderly,
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division")]
    InexactDivision,
    #[error("both gcd arguments are zero")]
    ZeroGcd,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("deadline exceeded")]
    Deadline,
    #[error("elimination failed: {0}")]
    Elimination(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("incomplete assignment: `{0}` has no value")]
    IncompleteAssignment(String),
    #[error("template cannot carry the leading derivative: {0}")]
    DegenerateTemplate(String),
    #[error("numeric sampling failed: {0}")]
    Sampling(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable error code for structured output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::RingMismatch => "ring_mismatch",
            Error::NegativeExponent(_) => "negative_exponent",
            Error::Syntax { .. } => "syntax",
            Error::UnknownVariable(_) => "unknown_variable",
            Error::DuplicateVariable(_) => "duplicate_variable",
            Error::NoLeader => "no_leader",
            Error::InvalidRanking(_) => "invalid_ranking",
            Error::UnitIdeal => "unit_ideal",
            Error::InvalidChain(_) => "invalid_chain",
            Error::NotOrderly => "not_orderly",
            Error::DivisionByZero => "division_by_zero",
            Error::InexactDivision => "inexact_division",
            Error::ZeroGcd => "zero_gcd",
            Error::ResourceLimit(_) => "resource_limit",
            Error::Deadline => "deadline",
            Error::Elimination(_) => "elimination",
            Error::InvalidInput(_) => "invalid_input",
            Error::SingularMatrix => "singular_matrix",
            Error::IncompleteAssignment(_) => "incomplete_assignment",
            Error::DegenerateTemplate(_) => "degenerate_template",
            Error::Sampling(_) => "sampling",
            Error::Internal(_) => "internal",
        }
    }

    /// Usage-level errors (bad input text) as opposed to mathematical failures.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownVariable(_)
                | Error::DuplicateVariable(_)
                | Error::InvalidRanking(_)
                | Error::InvalidInput(_)
                | Error::NegativeExponent(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
