use thiserror::Error;

/// Errors shared by all modules.
///
/// `InvalidInput` covers violated preconditions (the message names the
/// violated hypothesis).  `TraceUnavailable` and `TraceRequired` mark the
/// gap where no closed form for the Atkin-Lehner trace is implemented and
/// an externally supplied value is needed.  `Internal` signals that an
/// exactness assertion failed (e.g. a dimension came out non-integral),
/// which always indicates a formula misapplication rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "trace of the Atkin-Lehner operator is unavailable: no closed form is \
         implemented for composite T with M > 1; supply an explicit trace"
    )]
    TraceUnavailable,

    #[error("an S-minimal Atkin-Lehner trace must be supplied when S is nonempty")]
    TraceRequired,

    #[error("enumeration of {size} elements exceeds the guard of {guard}")]
    SizeGuard { size: u64, guard: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
