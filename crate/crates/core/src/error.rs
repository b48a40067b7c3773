use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured work or storage bound would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Two routes that must agree produced different values.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(alloc::format!($($arg)*))
    };
}

macro_rules! ensure_domain {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::domain!($($arg)*));
        }
    };
}

pub(crate) use domain;
pub(crate) use ensure_domain;
