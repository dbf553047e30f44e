use alloc::string::String;
use core::fmt;

use crate::context::RecursionPath;

/// Errors raised by lookups and similarity evaluation on validated data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    UnknownClass(String),
    UnknownInstance(String),
    /// No entry of the context starts at the instance's class or one of its
    /// ancestors.
    NoApplicablePath {
        context: String,
        class: String,
    },
    /// The context has no entry at this path.
    UndefinedPath(RecursionPath),
    /// The instance's class does not conform to the class the path ends in.
    ClassMismatch {
        instance: String,
        expected: String,
        found: String,
    },
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownClass(name) => write!(f, "unknown class `{name}`"),
            Error::UnknownInstance(id) => write!(f, "unknown instance `{id}`"),
            Error::NoApplicablePath { context, class } => write!(
                f,
                "context `{context}` has no entry applicable to class `{class}`"
            ),
            Error::UndefinedPath(path) => write!(f, "no context entry at path {path}"),
            Error::ClassMismatch {
                instance,
                expected,
                found,
            } => write!(
                f,
                "instance `{instance}` has class `{found}`, which is not `{expected}` or a subclass of it"
            ),
            Error::InvalidConfig(msg) => write!(f, "invalid engine configuration: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
