//! Exact differential polynomials over jet coordinates.
//!
//! An [`Expr`] is a finite sum of monomials with rational coefficients. A
//! monomial is a power product of base coordinates, named constants, jet
//! variables `u^alpha_I` and `sin`/`cos`/`exp` factors. Values are always kept
//! in canonical expanded form, so `==` on [`Expr`] decides semantic equality
//! within this class. There is no trigonometric rewriting: `sin(u)^2 +
//! cos(u)^2` is a nonzero expression.

mod bundle;
mod expr;
mod multi_index;

pub use bundle::{BundleSpec, JetVar, Symbol};
pub use expr::{equal, int, rat, ElemFn, Expr, Factor, Monomial, Rational};
pub use multi_index::MultiIndex;

use crate::error::{Error, Result};

/// Formal partial derivative with respect to a declared variable.
pub fn partial(bundle: &BundleSpec, e: &Expr, v: &Symbol) -> Result<Expr> {
    if !bundle.contains(v) {
        return Err(Error::UnknownVariable(format!("{v:?}")));
    }
    Ok(e.partial(v))
}

#[cfg(test)]
mod tests;
