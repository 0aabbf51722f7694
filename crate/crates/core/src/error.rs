use thiserror::Error;

use crate::dsl::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("not a total divergence: Euler-Lagrange derivatives do not vanish")]
    NotExact,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("equation system has no solved forms")]
    MissingSolvedForm,
    #[error("invalid solved form: {0}")]
    InvalidSolvedForm(String),
    #[error("internal identity check failed: {0}")]
    Invariant(String),
    #[error("not a Noether symmetry: {0}")]
    NotSymmetry(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("{0}")]
    Parse(Diagnostic),
    #[error("no such {kind} `{name}`")]
    NotFound { kind: &'static str, name: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
