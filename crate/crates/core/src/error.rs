use thiserror::Error;

use crate::value::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }

    /// An error about a well-formed s-expression that does not translate.
    pub(crate) fn translate(msg: impl Into<String>) -> Self {
        ParseError { line: 0, col: 0, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(Symbol),
    #[error("no evaluator registered for `{0}`")]
    Unregistered(Symbol),
    #[error("`{func}`: {reason}")]
    Domain { func: Symbol, reason: String },
    #[error("malformed term: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{form}: {msg}")]
    Form { form: String, msg: String },
    #[error("rule `{rule}` is invalid: {}", violations.join("; "))]
    Invalid { rule: String, violations: Vec<String> },
    #[error("cannot attach `{lemma}` to `{rule}`: {msg}")]
    Attach { rule: Symbol, lemma: Symbol, msg: String },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: Symbol },
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: Symbol },
    #[error("defthm-lambda `{name}`: {msg}")]
    Lambda { name: Symbol, msg: String },
    #[error("meta rule `{name}`: {msg}")]
    Meta { name: Symbol, msg: String },
}

impl RuleError {
    pub(crate) fn form(form: impl std::fmt::Display, msg: impl Into<String>) -> Self {
        RuleError::Form { form: form.to_string(), msg: msg.into() }
    }
}
