use alloc::boxed::Box;
use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("average is not rational, residual {0}")]
    NonRational(String),
    #[error("no preimage with support bound {bound}; retry with a larger --support")]
    SupportExhausted { bound: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("at place {label}: {inner}")]
    AtPlace { label: String, inner: Box<Error> },
}

impl Error {
    pub fn at_place(label: &str, inner: Error) -> Self {
        Error::AtPlace { label: label.into(), inner: Box::new(inner) }
    }

    /// Whether the root cause is an exhausted support bound.
    pub fn is_support_exhausted(&self) -> bool {
        match self {
            Error::SupportExhausted { .. } => true,
            Error::AtPlace { inner, .. } => inner.is_support_exhausted(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
