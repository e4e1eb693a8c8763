use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Usage,
    Numerics,
    Resource,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the set on which the quantity is defined.
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },
    /// The call itself is malformed (wrong model kind, empty grid, ...).
    #[error("{op}: usage error: {msg}")]
    Usage { op: &'static str, msg: String },
    /// A numerical procedure did not reach its tolerance. `best` carries the
    /// best objective value seen, when there is one.
    #[error("{op}: numerics error: {msg}")]
    Numerics {
        op: &'static str,
        msg: String,
        best: Option<f64>,
    },
    /// A configured size or memory cap would be exceeded.
    #[error("{op}: resource error: {msg}")]
    Resource { op: &'static str, msg: String },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain { .. } => ErrorKind::Domain,
            Error::Usage { .. } => ErrorKind::Usage,
            Error::Numerics { .. } => ErrorKind::Numerics,
            Error::Resource { .. } => ErrorKind::Resource,
        }
    }

    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn usage(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Usage { op, msg: msg.into() }
    }

    pub(crate) fn numerics(op: &'static str, msg: impl Into<String>, best: Option<f64>) -> Self {
        Error::Numerics {
            op,
            msg: msg.into(),
            best,
        }
    }

    pub(crate) fn resource(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Resource { op, msg: msg.into() }
    }
}
