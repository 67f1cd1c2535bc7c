use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("too large to materialize: {what} (limit {limit})")]
    TooLarge { what: String, limit: String },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("not in the field of the ordering")]
    NotInField,
    #[error("duplicate term at position {0}")]
    DuplicateTerm(usize),
    #[error("fields overlap in concatenation (ordering {0})")]
    Overlap(usize),
    #[error("not a linear ordering")]
    NotAnOrdering,
    #[error("not a numeration base")]
    NotABase,
    #[error("value {value} out of range (must be below {bound})")]
    OutOfRange { value: String, bound: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("not a term of {0}")]
    NotATerm(String),
    #[error("not a number of {0}")]
    NotANumber(String),
    #[error("function is not regular: {0}")]
    NotRegular(String),
    #[error("bad system spec `{0}`")]
    BadSpec(String),
    #[error("syntax error at column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("binder `{0}` clashes with a variable in scope")]
    Hygiene(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("bad budget entry `{0}`")]
    BadBudget(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn too_large(what: impl Into<String>, limit: impl ToString) -> Error {
    Error::TooLarge { what: what.into(), limit: limit.to_string() }
}
