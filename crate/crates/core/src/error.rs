use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("characteristic {0} is not a prime below 2^31")]
    NonPrimeCharacteristic(u64),

    #[error("unknown key `{0}`")]
    UnknownKey(String),

    #[error("generator `{0}` is not homogeneous; only homogeneous ideals in the standard grading are supported")]
    NonHomogeneous(String),

    #[error(
        "Failed to compute Bass numbers. You may raise the number of attempts (currently {attempts}, giving {tries} tries) with --attempts"
    )]
    ReductionFailed { attempts: u32, tries: u64 },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("operands live in different rings")]
    RingMismatch,

    #[error("exponent vectors of length {0} and {1} cannot be compared")]
    LengthMismatch(usize, usize),

    #[error("invariant `{0}` is required by this branch but was not supplied")]
    MissingInvariant(&'static str),

    #[error("attempts parameter must be at least 1")]
    InvalidAttempts,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::UnknownVariable(_)
            | Error::NonPrimeCharacteristic(_)
            | Error::UnknownKey(_)
            | Error::InvalidAttempts => 2,
            Error::NonHomogeneous(_) => 3,
            Error::ReductionFailed { .. } => 4,
            Error::ResourceLimit(_) => 5,
            Error::RingMismatch | Error::LengthMismatch(..) | Error::MissingInvariant(_) | Error::Consistency(_) => 1,
        }
    }
}
