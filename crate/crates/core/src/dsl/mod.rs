//! Model files (`.vps`): a small declarative language for bundles,
//! Lagrangians, symmetries, linear operators and solved forms, plus the
//! canonical text syntax for expressions and forms.
//!
//! ```text
//! version 1;
//! model "oscillator" {
//!   independent t;
//!   dependent u;
//!   lagrangian L = 1/2*u[t]^2 - 1/2*u^2;
//!   symmetry timeshift { chi[u] = u[t]; }
//!   solved { u[t,t] = -u; }
//! }
//! ```

mod lexer;
mod parser;
pub(crate) mod print;

use std::fmt;

pub use parser::{parse_expr, parse_form, parse_model, parse_operator};
pub use print::{print_expr, print_form, print_model, print_operator, print_operator_entry};

use crate::error::{Error, Result};
use crate::jetcalc::EvolField;
use crate::linop::LinDiffOp;
use crate::onshell::EquationSystem;
use crate::symexpr::{BundleSpec, Expr, JetVar};
use crate::varcalc::{euler_lagrange, Lagrangian};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    Lexical,
    Syntax,
    Undeclared,
    AmbiguousJetSuffix,
    Semantic,
}

impl DiagnosticKind {
    pub fn label(self) -> &'static str {
        match self {
            DiagnosticKind::Lexical => "lexical error",
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Undeclared => "undeclared identifier",
            DiagnosticKind::AmbiguousJetSuffix => "ambiguous jet suffix",
            DiagnosticKind::Semantic => "invalid model",
        }
    }
}

/// A parse failure with 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Tokens that would have been accepted, for syntax errors.
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(kind: DiagnosticKind, line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            kind,
            line,
            col,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    pub fn with_expected<I, S>(mut self, expected: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.expected = expected.into_iter().map(Into::into).collect();
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.kind.label(), self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Self {
        Error::Parse(d)
    }
}

/// A declared linear operator with named input components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorDecl {
    pub params: Vec<String>,
    pub op: LinDiffOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub bundle: BundleSpec,
    pub lagrangians: Vec<(String, Lagrangian)>,
    pub symmetries: Vec<(String, EvolField)>,
    pub operators: Vec<(String, OperatorDecl)>,
    pub solved: Option<Vec<(JetVar, Expr)>>,
}

impl Model {
    pub fn lagrangian(&self, name: &str) -> Result<&Lagrangian> {
        find(&self.lagrangians, "lagrangian", name)
    }

    pub fn symmetry(&self, name: &str) -> Result<&EvolField> {
        find(&self.symmetries, "symmetry", name)
    }

    pub fn operator(&self, name: &str) -> Result<&OperatorDecl> {
        find(&self.operators, "operator", name)
    }

    /// The only Lagrangian, or the one named `name`.
    pub fn pick_lagrangian(&self, name: Option<&str>) -> Result<(&str, &Lagrangian)> {
        pick(&self.lagrangians, "lagrangian", name)
    }

    /// Euler-Lagrange equations of a Lagrangian together with the model's
    /// solved forms, if any.
    pub fn equations(&self, lagrangian: &Lagrangian) -> Result<EquationSystem> {
        let el = euler_lagrange(&self.bundle, lagrangian);
        let sys = EquationSystem::new(self.bundle.clone(), el.components().to_vec());
        match &self.solved {
            Some(solved) => sys.with_solved_forms(solved.clone()),
            None => Ok(sys),
        }
    }
}

fn find<'a, T>(items: &'a [(String, T)], kind: &'static str, name: &str) -> Result<&'a T> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, t)| t)
        .ok_or_else(|| Error::NotFound {
            kind,
            name: name.to_string(),
        })
}

fn pick<'a, T>(
    items: &'a [(String, T)],
    kind: &'static str,
    name: Option<&str>,
) -> Result<(&'a str, &'a T)> {
    match name {
        Some(n) => find(items, kind, n).map(|t| (n_of(items, n), t)),
        None if items.len() == 1 => Ok((items[0].0.as_str(), &items[0].1)),
        None => Err(Error::NotFound {
            kind,
            name: if items.is_empty() {
                "(none declared)".into()
            } else {
                "(ambiguous: name one explicitly)".into()
            },
        }),
    }
}

fn n_of<'a, T>(items: &'a [(String, T)], name: &str) -> &'a str {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(n, _)| n.as_str())
        .unwrap_or_default()
}
