use crate::error::{Error, Result};
use crate::symexpr::{BundleSpec, Expr, JetVar, MultiIndex};

use super::total_derivative_multi;

/// Generating section `chi = chi^alpha d_alpha` of an evolutionary vector
/// field. Prolongation coefficients `D_I chi^alpha` are derived on demand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvolField {
    components: Vec<Expr>,
}

impl EvolField {
    pub fn new(components: Vec<Expr>) -> Self {
        Self { components }
    }

    pub fn zero(m: usize) -> Self {
        Self::new(vec![Expr::zero(); m])
    }

    /// The field `chi^alpha = u^alpha`, generator of fibre scalings.
    pub fn euler(bundle: &BundleSpec) -> Self {
        Self::new((0..bundle.fields()).map(|a| Expr::jet(bundle.field(a))).collect())
    }

    pub fn checked(bundle: &BundleSpec, components: Vec<Expr>) -> Result<Self> {
        if components.len() != bundle.fields() {
            return Err(Error::ArityMismatch {
                expected: bundle.fields(),
                found: components.len(),
            });
        }
        Ok(Self::new(components))
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

    /// `D_I chi^alpha`, the coefficient of `d/du^alpha_I` in `E_chi`.
    pub fn prolonged(&self, alpha: usize, index: &MultiIndex) -> Expr {
        total_derivative_multi(&self.components[alpha], index)
    }

    /// `E_chi(f) = sum D_I chi^alpha * d^I_alpha f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut out = Expr::zero();
        for v in f.jet_vars() {
            let df = f.partial(&v.clone().into());
            if df.is_zero() {
                continue;
            }
            let coeff = self.prolonged_var(&v);
            if !coeff.is_zero() {
                out += &coeff * &df;
            }
        }
        out
    }

    pub(crate) fn prolonged_var(&self, v: &JetVar) -> Expr {
        match self.components.get(v.field) {
            Some(c) => total_derivative_multi(c, &v.index),
            None => Expr::zero(),
        }
    }
}
