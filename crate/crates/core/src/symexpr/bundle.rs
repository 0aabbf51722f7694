use std::collections::HashSet;
use std::fmt;

use super::MultiIndex;
use crate::error::{Error, Result};

/// Coordinates of a trivial bundle: `n` independent variables, `m` fields
/// and a list of named constant parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundleSpec {
    independent: Vec<String>,
    dependent: Vec<String>,
    constants: Vec<String>,
}

impl BundleSpec {
    pub fn new<S: AsRef<str>>(independent: &[S], dependent: &[S], constants: &[S]) -> Result<Self> {
        let own = |v: &[S]| v.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>();
        let spec = Self {
            independent: own(independent),
            dependent: own(dependent),
            constants: own(constants),
        };
        if spec.independent.is_empty() {
            return Err(Error::InvalidBundle("at least one independent variable is required".into()));
        }
        if spec.dependent.is_empty() {
            return Err(Error::InvalidBundle("at least one dependent variable is required".into()));
        }
        let mut seen = HashSet::new();
        for name in spec.names() {
            if !seen.insert(name) {
                return Err(Error::InvalidBundle(format!("duplicate name `{name}`")));
            }
        }
        Ok(spec)
    }

    fn names(&self) -> impl Iterator<Item = &str> {
        self.independent
            .iter()
            .chain(&self.dependent)
            .chain(&self.constants)
            .map(String::as_str)
    }

    /// `n`.
    pub fn dim(&self) -> usize {
        self.independent.len()
    }

    /// `m`.
    pub fn fields(&self) -> usize {
        self.dependent.len()
    }

    pub fn independent(&self) -> &[String] {
        &self.independent
    }

    pub fn dependent(&self) -> &[String] {
        &self.dependent
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn independent_index(&self, name: &str) -> Option<usize> {
        self.independent.iter().position(|s| s == name)
    }

    pub fn dependent_index(&self, name: &str) -> Option<usize> {
        self.dependent.iter().position(|s| s == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|s| s == name)
    }

    /// Resolves a plain name to a coordinate, constant or zero-order field.
    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        if let Some(i) = self.independent_index(name) {
            Some(Symbol::Coord(i))
        } else if let Some(i) = self.constant_index(name) {
            Some(Symbol::Const(i))
        } else {
            self.dependent_index(name)
                .map(|a| Symbol::Jet(JetVar::new(a, MultiIndex::empty(self.dim()))))
        }
    }

    /// Appends extra fields (e.g. gauge parameters) to the dependent list.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Self> {
        let mut dependent = self.dependent.clone();
        dependent.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Self::new(&self.independent, &dependent, &self.constants)
    }

    /// Whether a symbol refers to something declared in this bundle.
    pub fn contains(&self, s: &Symbol) -> bool {
        match s {
            Symbol::Coord(i) => *i < self.dim(),
            Symbol::Const(i) => *i < self.constants.len(),
            Symbol::Jet(v) => v.field < self.fields() && v.index.dim() == self.dim(),
        }
    }

    pub fn jet(&self, field: usize, positions: &[usize]) -> JetVar {
        JetVar::new(field, MultiIndex::from_positions(self.dim(), positions))
    }

    /// Field `field` with no derivatives.
    pub fn field(&self, field: usize) -> JetVar {
        JetVar::new(field, MultiIndex::empty(self.dim()))
    }

    pub fn symbol_name(&self, s: &Symbol) -> String {
        match s {
            Symbol::Coord(i) => self.independent[*i].clone(),
            Symbol::Const(i) => self.constants[*i].clone(),
            Symbol::Jet(v) => self.jet_name(v),
        }
    }

    /// Bracket rendering `u[t,x]`; zero-order fields print bare.
    pub fn jet_name(&self, v: &JetVar) -> String {
        let base = &self.dependent[v.field];
        if v.index.is_empty() {
            return base.clone();
        }
        let parts: Vec<&str> = v
            .index
            .positions()
            .into_iter()
            .map(|i| self.independent[i].as_str())
            .collect();
        format!("{base}[{}]", parts.join(","))
    }
}

/// `u^alpha_I`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetVar {
    pub field: usize,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(field: usize, index: MultiIndex) -> Self {
        Self { field, index }
    }

    pub fn order(&self) -> u32 {
        self.index.order()
    }

    /// `u^alpha_{I i}`.
    pub fn derive(&self, i: usize) -> Self {
        Self::new(self.field, self.index.with(i))
    }

    /// Ranking used for elimination: order first, then field, then index.
    pub fn rank_key(&self) -> (u32, usize, &MultiIndex) {
        (self.order(), self.field, &self.index)
    }
}

impl fmt::Debug for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}{:?}", self.field, self.index.counts())
    }
}

/// A polynomial variable. The derived order is the canonical variable order:
/// base coordinates, then constants, then jet variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    Coord(usize),
    Const(usize),
    Jet(JetVar),
}

impl From<JetVar> for Symbol {
    fn from(v: JetVar) -> Self {
        Symbol::Jet(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(BundleSpec::new(&["t"], &["t"], &[]).is_err());
        assert!(BundleSpec::new(&[] as &[&str], &["u"], &[]).is_err());
        assert!(BundleSpec::new(&["t"], &[] as &[&str], &[]).is_err());
    }

    #[test]
    fn names_render_in_bracket_form() {
        let b = BundleSpec::new(&["t", "x"], &["u"], &["m"]).unwrap();
        assert_eq!(b.jet_name(&b.jet(0, &[0, 1, 1])), "u[t,x,x]");
        assert_eq!(b.jet_name(&b.field(0)), "u");
        assert_eq!(b.lookup("m"), Some(Symbol::Const(0)));
    }
}
