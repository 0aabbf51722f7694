//! Euler-Lagrange operator, Legendre forms, presymplectic currents and
//! the splitting of total divergences.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::jetcalc::{
    total_derivative, total_derivative_multi, volume_interior, BigradedForm, EvolField, Gen,
    SourceSection,
};
use crate::linop::{linearize, LinDiffOp};
use crate::symexpr::{BundleSpec, Expr, Factor, JetVar, Monomial, Rational, Symbol};

/// A Lagrangian density `L`, standing for the (0,n)-form `L d^n x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lagrangian {
    density: Expr,
}

impl Lagrangian {
    pub fn new(density: Expr) -> Self {
        Self { density }
    }

    pub fn density(&self) -> &Expr {
        &self.density
    }

    pub fn form(&self, n: usize) -> BigradedForm {
        BigradedForm::density(self.density.clone(), n)
    }
}

/// `delta L / delta u^alpha = sum_I (-1)^|I| D_I (d^I_alpha L)`.
pub fn variational_derivative(density: &Expr, alpha: usize) -> Expr {
    let mut out = Expr::zero();
    for v in density.jet_vars() {
        if v.field != alpha {
            continue;
        }
        let d = density.partial(&v.clone().into());
        let term = total_derivative_multi(&d, &v.index);
        if v.order() % 2 == 0 {
            out += term;
        } else {
            out -= term;
        }
    }
    out
}

pub fn euler_lagrange(bundle: &BundleSpec, l: &Lagrangian) -> SourceSection {
    SourceSection::new(
        (0..bundle.fields())
            .map(|a| variational_derivative(l.density(), a))
            .collect(),
    )
}

/// Integrates `dvert(f d^n x)` by parts down to contact order zero.
///
/// Returns the source part and the accumulated (1,n-1)-form `theta` with
/// `dvert(f d^n x) = source + dbar(theta)`.
fn integrate_by_parts(bundle: &BundleSpec, f: &Expr) -> (SourceSection, BigradedForm) {
    let n = bundle.dim();
    let mut pending: BTreeMap<(u32, JetVar), Expr> = BTreeMap::new();
    for v in f.jet_vars() {
        let d = f.partial(&v.clone().into());
        if !d.is_zero() {
            pending.insert((v.order(), v), d);
        }
    }
    let mut source = vec![Expr::zero(); bundle.fields()];
    let mut theta = BigradedForm::zero(1, n.saturating_sub(1));
    while let Some(((order, v), g)) = pending.pop_last() {
        if g.is_zero() {
            continue;
        }
        if order == 0 {
            source[v.field] += g;
            continue;
        }
        // g w_{J i} d^n x = -(D_i g) w_J d^n x - dbar(g w_J ^ i_{d_i} d^n x)
        let i = v.index.last_position().expect("positive order");
        let lower = JetVar::new(v.field, v.index.without(i).expect("count > 0"));
        let (sign, rest) = volume_interior(n, i);
        let mut gens = vec![Gen::Contact(lower.clone())];
        gens.extend(rest.into_iter().map(Gen::Horizontal));
        theta.add_gens(g.scale(&-sign), gens);
        let dg = -total_derivative(&g, i);
        if !dg.is_zero() {
            let slot = pending.entry((order - 1, lower)).or_default();
            *slot += dg;
        }
    }
    (SourceSection::new(source), theta)
}

/// A (1,n-1)-form `theta` with `dvert L - E(L) = dbar theta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreForm {
    form: BigradedForm,
}

impl LegendreForm {
    /// Accepts `theta` only if the first variation identity holds exactly.
    pub fn new(bundle: &BundleSpec, l: &Lagrangian, theta: BigradedForm) -> Result<Self> {
        let n = bundle.dim();
        let lhs = &l.form(n).dvert() - &euler_lagrange(bundle, l).to_form(n);
        if theta.bidegree() != (1, n - 1) || lhs != theta.dbar(n) {
            return Err(Error::Invariant(
                "dvert L - E(L) != dbar theta for the proposed Legendre form".into(),
            ));
        }
        Ok(Self { form: theta })
    }

    pub fn form(&self) -> &BigradedForm {
        &self.form
    }

    pub fn into_form(self) -> BigradedForm {
        self.form
    }
}

/// The deterministic Legendre form produced by integration by parts.
pub fn legendre_form(bundle: &BundleSpec, l: &Lagrangian) -> LegendreForm {
    let (_, theta) = integrate_by_parts(bundle, l.density());
    LegendreForm::new(bundle, l, theta).expect("integration by parts is exact")
}

/// A (2,n-1)-form `omega` with `dbar omega + dvert E(L) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresymplecticCurrent {
    form: BigradedForm,
}

impl PresymplecticCurrent {
    /// `omega = -dvert theta`.
    pub fn from_legendre(theta: &LegendreForm) -> Self {
        Self {
            form: -theta.form().dvert(),
        }
    }

    pub fn form(&self) -> &BigradedForm {
        &self.form
    }

    /// Checks `dbar omega + dvert E(L) = 0`.
    pub fn closes_off_shell(&self, bundle: &BundleSpec, l: &Lagrangian) -> bool {
        let n = bundle.dim();
        (&self.form.dbar(n) + &euler_lagrange(bundle, l).to_form(n).dvert()).is_zero()
    }
}

pub fn presymplectic_current(bundle: &BundleSpec, l: &Lagrangian) -> PresymplecticCurrent {
    PresymplecticCurrent::from_legendre(&legendre_form(bundle, l))
}

/// Antiderivative of `f` in the coordinate `x^k`, if `f` is polynomial in it.
fn antiderivative(f: &Expr, k: usize) -> Option<Expr> {
    let x = Symbol::Coord(k);
    if f.occurs_in_function(&x) {
        return None;
    }
    let mut out = Expr::zero();
    for (m, c) in f.terms() {
        let e = m.exponent_of(&x);
        let mut factors: Vec<(Factor, u32)> = m
            .factors()
            .iter()
            .filter(|(fac, _)| *fac != Factor::Var(x.clone()))
            .cloned()
            .collect();
        factors.push((Factor::Var(x.clone()), e + 1));
        let c = c / Rational::from_integer(BigInt::from(e + 1));
        out.add_term(Monomial::from_factors(factors), c);
    }
    Some(out)
}

/// Finds `sigma` with `dbar sigma = T` for a (0,n)-form `T` whose
/// Euler-Lagrange derivatives all vanish.
///
/// The density is split into parts homogeneous in the jet variables. A part
/// of degree `d > 0` is integrated through its Legendre form `theta_d`:
/// contracting `dvert T_d = dbar theta_d` with the fibre scaling field gives
/// `d T_d = -dbar(i theta_d)`. The part of degree zero depends on base
/// coordinates only and is integrated in one of them.
pub fn split_divergence(bundle: &BundleSpec, t: &BigradedForm) -> Result<BigradedForm> {
    let n = bundle.dim();
    if t.bidegree() != (0, n) {
        return Err(Error::Unsupported(format!(
            "split_divergence expects a (0,{n})-form, found {:?}",
            t.bidegree()
        )));
    }
    let f = t.top_coefficient(n);
    let el = euler_lagrange(bundle, &Lagrangian::new(f.clone()));
    if !el.is_zero() {
        return Err(Error::NotExact);
    }
    let parts = f.jet_homogeneous_parts().ok_or_else(|| {
        Error::Unsupported("divergence splitting of elementary functions of jet variables".into())
    })?;
    let euler = EvolField::euler(bundle);
    let mut sigma = BigradedForm::zero(0, n - 1);
    for (d, part) in parts {
        if d == 0 {
            let (k, prim) = (0..n)
                .find_map(|k| antiderivative(&part, k).map(|p| (k, p)))
                .ok_or_else(|| {
                    Error::Unsupported("no polynomial antiderivative for the base part".into())
                })?;
            let (sign, rest) = volume_interior(n, k);
            sigma = &sigma
                + &BigradedForm::monomial(prim.scale(&sign), rest.into_iter().map(Gen::Horizontal).collect());
        } else {
            let (_, theta) = integrate_by_parts(bundle, &part);
            let scale = -Rational::one() / Rational::from_integer(BigInt::from(d));
            sigma = &sigma + &theta.contract(&euler).scale(&scale);
        }
    }
    if sigma.dbar(n) != *t {
        return Err(Error::Invariant("split_divergence witness failed to verify".into()));
    }
    Ok(sigma)
}

/// Result of the Helmholtz self-adjointness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Helmholtz {
    pub self_adjoint: bool,
    /// `l_F - l_F^dagger`; zero exactly when self-adjoint.
    pub difference: LinDiffOp,
}

pub fn helmholtz_selfadjoint(bundle: &BundleSpec, f: &SourceSection) -> Helmholtz {
    let l = linearize(bundle, f.components());
    let difference = &l - &l.adjoint();
    Helmholtz {
        self_adjoint: difference.is_zero(),
        difference,
    }
}

#[cfg(test)]
mod tests;
