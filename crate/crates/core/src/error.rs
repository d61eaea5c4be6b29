//! Error types shared across the engine.

use crate::ast::Span;
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq)]
#[error("{span}: parse error: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: Span,
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum CheckError {
    #[error("{span}: type error: {message}")]
    Type { message: String, span: Span },
    #[error("{span}: unbound name `{name}`")]
    UnboundName { name: String, span: Span },
    #[error("{span}: {message}")]
    Redeclaration { message: String, span: Span },
}

impl CheckError {
    pub fn ty(message: impl Into<String>, span: &Span) -> CheckError {
        CheckError::Type { message: message.into(), span: span.clone() }
    }
}

/// Runtime failures of the concrete collecting interpreter. An empty
/// result set is not an error; these signal that evaluation itself went
/// wrong (or ran out of fuel).
#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no meaning registered for unspecified term `{0}`")]
    MissingInstantiation(String),
    #[error("fuel exhausted")]
    FuelExhausted,
    #[error("value is not a function: {0}")]
    NotAFunction(String),
    #[error("too many arguments applied to `{0}`")]
    ArityViolation(String),
    #[error("invalid program point {0}")]
    InvalidPath(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("cannot build a value of program type `{0}` in program-point mode")]
    ProgramTypeConstruction(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Failures of abstract-domain operations on values of incompatible shape.
#[derive(Clone, Debug, Error, PartialEq)]
#[error("abstract type mismatch: {0}")]
pub struct DomainError(pub String);

/// Failures of the abstract interpreter.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("no abstract meaning registered for unspecified term `{0}`")]
    MissingInstantiation(String),
    #[error("step budget exceeded")]
    StepBudgetExceeded,
    #[error("applied the top abstract value at an arrow type; soundness cannot be guaranteed ({0})")]
    TopFunctionApplied(String),
    #[error("value is not a function: {0}")]
    NotAFunction(String),
    #[error("too many arguments applied to `{0}`")]
    ArityViolation(String),
    #[error("invalid program point {0}")]
    InvalidPath(String),
    #[error("update hook for `{0}` received arguments of unexpected shape: {1}")]
    HookShapeMismatch(String, String),
    #[error("cannot build a value of program type `{0}` during analysis")]
    ProgramTypeConstruction(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Unsupported(String),
}
