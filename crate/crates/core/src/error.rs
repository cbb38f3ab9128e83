use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range for list of length {len}")]
    Range { index: usize, len: usize },

    #[error("expected {expected}, got {found}")]
    Type { expected: &'static str, found: String },

    #[error("list parse error at position {pos}: {msg}")]
    ListParse { pos: usize, msg: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("Type \"{0}\" can't be cast to string")]
    CannotCastToText(String),

    #[error("wrong # args for \"{command}\": expected {expected}, got {actual}")]
    Arity {
        command: String,
        expected: String,
        actual: usize,
    },

    #[error("invalid command name \"{0}\"")]
    UnknownCommand(String),

    #[error("command \"{0}\" already exists")]
    DuplicateCommand(String),

    #[error("can't read \"{0}\": no such variable")]
    UnboundVariable(String),

    #[error("class {class} has no field \"{field}\"")]
    UnknownField { class: String, field: String },

    #[error("field \"{field}\" of class {class} is private; use my.{accessor}.{field}")]
    PrivateField {
        class: String,
        field: String,
        accessor: &'static str,
    },

    #[error("class {class} has no static field \"{name}\"")]
    UnknownStatic { class: String, name: String },

    #[error("validation failed for class {class}: {msg}")]
    Validation { class: String, msg: String },

    #[error("class \"{0}\" already declared")]
    DuplicateClass(String),

    #[error("unknown class \"{0}\"")]
    UnknownClass(String),

    #[error("dispatch error: {0}")]
    Dispatch(String),

    #[error("method {class}::{method} has no bound body")]
    UnboundMethod { class: String, method: String },

    #[error("class {class} has no method \"{method}\"")]
    UnknownMethod { class: String, method: String },

    #[error("{0}")]
    Constructor(String),

    #[error("Failed to convert to \"{type_name}\": {reason}")]
    Conversion { type_name: String, reason: String },

    #[error("native type \"{0}\" already registered")]
    DuplicateNativeType(String),

    #[error("native type \"{type_name}\" is missing its {hook} hook")]
    MissingHook {
        type_name: String,
        hook: &'static str,
    },

    #[error("unknown native type \"{0}\"")]
    UnknownNativeType(String),

    #[error("invalid object handle \"{0}\" (destroyed or never created)")]
    DanglingHandle(String),

    #[error("unknown framework \"{0}\"")]
    UnknownFramework(String),

    #[error("unknown suite \"{0}\"")]
    UnknownSuite(String),

    /// Error raised by a host-bound method body.
    #[error("{0}")]
    Host(String),
}

impl Error {
    pub fn host(msg: impl Into<String>) -> Self {
        Error::Host(msg.into())
    }
}
