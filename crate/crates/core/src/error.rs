use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("arity mismatch for `{name}`: expected {expected}, found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("function variable `{0}` is not defined by any equation")]
    FreeFunctionVariable(String),
    #[error("function variable `{0}` is defined twice")]
    DuplicateDefinition(String),
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("not irreducible: {0}")]
    NotIrreducible(String),
    #[error("no redex at this position: {0}")]
    NotReducibleHere(String),
    #[error("variable `{0}` is not fresh")]
    NotFresh(String),
    #[error("sort or arity mismatch: {0}")]
    SortArityMismatch(String),
    #[error("enumeration exceeds the bound of {bound} assignments")]
    CarrierTooLargeForEnumeration { bound: u64 },
    #[error("identity is not of form (4-4): {0}")]
    NotForm44(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}, column {col}: {inner}")]
    Located {
        line: usize,
        col: usize,
        inner: Box<Error>,
    },
}

impl Error {
    /// The error with any source position stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Located { inner, .. } => inner.root(),
            e => e,
        }
    }

    /// Line number, when the error carries one.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Syntax { line, .. } | Error::Format { line, .. } | Error::Located { line, .. } => {
                Some(*line)
            }
            _ => None,
        }
    }

    pub(crate) fn at(self, line: usize, col: usize) -> Error {
        match self {
            e @ (Error::Syntax { .. } | Error::Located { .. } | Error::Format { .. }) => e,
            e => Error::Located {
                line,
                col,
                inner: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
