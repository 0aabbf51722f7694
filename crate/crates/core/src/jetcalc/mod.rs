//! Total derivatives and the variational bicomplex.
//!
//! Forms are stored with contact factors first and horizontal factors after,
//! so a source form reads `phi_alpha omega^alpha ^ dx^1 ^ ... ^ dx^n`. The sign
//! sheet in [`crate::convention`] spells out every rule.

mod evol;
mod form;
mod total;

pub use evol::EvolField;
pub use form::{canonicalize, dvert_function, volume_interior, BigradedForm, Form, FormBasis, Gen};
pub use total::{total_derivative, total_derivative_multi};

use crate::error::{Error, Result};
use crate::symexpr::{BundleSpec, Expr, JetVar, MultiIndex};

/// A source section `phi = phi_alpha dagger^alpha`, e.g. the Euler-Lagrange
/// derivatives of a Lagrangian.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSection {
    components: Vec<Expr>,
}

impl SourceSection {
    pub fn new(components: Vec<Expr>) -> Self {
        Self { components }
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn component(&self, alpha: usize) -> &Expr {
        &self.components[alpha]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Expr::is_zero)
    }

    /// The (1,n)-form `phi_alpha omega^alpha_O ^ d^n x`.
    pub fn to_form(&self, n: usize) -> BigradedForm {
        let mut out = BigradedForm::zero(1, n);
        for (alpha, phi) in self.components.iter().enumerate() {
            let v = JetVar::new(alpha, MultiIndex::empty(n));
            let mut gens = vec![Gen::Contact(v)];
            gens.extend((0..n).map(Gen::Horizontal));
            out.add_gens(phi.clone(), gens);
        }
        out
    }

    /// Reads a (1,n)-form back; fails if any contact factor has positive order.
    pub fn from_form(form: &BigradedForm, bundle: &BundleSpec) -> Result<Self> {
        let n = bundle.dim();
        if form.bidegree() != (1, n) {
            return Err(Error::Unsupported(format!(
                "source form must have bidegree (1, {n}), found {:?}",
                form.bidegree()
            )));
        }
        let mut comps = vec![Expr::zero(); bundle.fields()];
        for (b, c) in form.terms() {
            let v = &b.contact()[0];
            if !v.index.is_empty() {
                return Err(Error::Unsupported(
                    "source form contains a contact factor of positive order".into(),
                ));
            }
            comps[v.field] += c;
        }
        Ok(Self::new(comps))
    }
}

#[cfg(test)]
mod tests;
