//! The equation manifold as a differential ideal: prolongation, reduction
//! through solved forms, and bounded membership and exactness tests.
//!
//! Every positive answer carries a witness that is re-checked exactly
//! before it is returned. A failed search is reported as
//! [`Membership::Inconclusive`], never as a negative answer.

mod exact;
pub(crate) mod linsolve;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jetcalc::{total_derivative_multi, BigradedForm};
use crate::symexpr::{BundleSpec, Expr, JetVar, MultiIndex, Rational, Symbol};

pub use exact::{default_form_bound, is_dbar_exact, is_dbar_exact_on_shell, ExactWitness, Exactness};

/// A solved form `u^alpha_L = R` with `u^alpha_L - R = rho E_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedForm {
    pub lhs: JetVar,
    pub rhs: Expr,
    pub generator: usize,
    pub rho: Rational,
}

/// Generators `E_a` of the equation ideal, optionally with solved forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    bundle: BundleSpec,
    generators: Vec<Expr>,
    solved: Option<Vec<SolvedForm>>,
}

/// Multipliers `C^{aJ}` with `e = sum C^{aJ} D_J E_a`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    terms: BTreeMap<(usize, MultiIndex), Expr>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, generator: usize, index: MultiIndex, c: Expr) {
        if c.is_zero() {
            return;
        }
        let key = (generator, index);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &MultiIndex, &Expr)> {
        self.terms.iter().map(|((a, j), c)| (*a, j, c))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum C^{aJ} D_J E_a`.
    pub fn evaluate(&self, sys: &EquationSystem) -> Expr {
        let mut out = Expr::zero();
        for ((a, j), c) in &self.terms {
            out += c * &total_derivative_multi(&sys.generators[*a], j);
        }
        out
    }

    pub fn verifies(&self, sys: &EquationSystem, e: &Expr) -> bool {
        self.evaluate(sys) == *e
    }
}

/// Outcome of a bounded ideal-membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The expression lies in the ideal; the certificate has been verified.
    Member(Certificate),
    /// No certificate found within the bound.
    Inconclusive(String),
}

impl Membership {
    pub fn holds(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

impl EquationSystem {
    pub fn new(bundle: BundleSpec, generators: Vec<Expr>) -> Self {
        Self {
            bundle,
            generators,
            solved: None,
        }
    }

    /// Attaches solved forms. Each `u_L - R` must be a rational multiple of
    /// a generator, and `R` may only contain jet variables ranked below `u_L`.
    pub fn with_solved_forms(mut self, solved: Vec<(JetVar, Expr)>) -> Result<Self> {
        let mut out = Vec::with_capacity(solved.len());
        for (lhs, rhs) in solved {
            if out.iter().any(|s: &SolvedForm| s.lhs.field == lhs.field) {
                return Err(Error::InvalidSolvedForm(format!(
                    "field {} has two solved forms",
                    self.bundle.dependent()[lhs.field]
                )));
            }
            if let Some(bad) = rhs.jet_vars().into_iter().find(|v| v.rank_key() >= lhs.rank_key()) {
                return Err(Error::InvalidSolvedForm(format!(
                    "right side of {} contains {}, which is not ranked below it",
                    self.bundle.jet_name(&lhs),
                    self.bundle.jet_name(&bad)
                )));
            }
            let diff = Expr::jet(lhs.clone()) - rhs.clone();
            let found = self.generators.iter().enumerate().find_map(|(a, g)| {
                let (m, c) = g.terms().next()?;
                let rho = diff.coefficient(m) / c;
                (!rho.is_zero() && g.scale(&rho) == diff).then_some((a, rho))
            });
            let Some((generator, rho)) = found else {
                return Err(Error::InvalidSolvedForm(format!(
                    "{} = ... is not a multiple of any equation",
                    self.bundle.jet_name(&lhs)
                )));
            };
            out.push(SolvedForm {
                lhs,
                rhs,
                generator,
                rho,
            });
        }
        self.solved = Some(out);
        Ok(self)
    }

    pub fn bundle(&self) -> &BundleSpec {
        &self.bundle
    }

    pub fn generators(&self) -> &[Expr] {
        &self.generators
    }

    pub fn solved_forms(&self) -> Option<&[SolvedForm]> {
        self.solved.as_deref()
    }

    pub fn has_solved_forms(&self) -> bool {
        self.solved.is_some()
    }

    /// Lowest jet order among nonzero generators.
    pub fn min_generator_order(&self) -> u32 {
        self.generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.jet_order().unwrap_or(0))
            .min()
            .unwrap_or(0)
    }

    /// Default prolongation bound for an expression of jet order `order`.
    pub fn default_bound(&self, order: Option<u32>) -> u32 {
        (order.unwrap_or(0) + 1).saturating_sub(self.min_generator_order())
    }

    /// All `D_J E_a` with `|J| <= l`, without duplicates.
    pub fn prolong(&self, l: u32) -> Vec<Expr> {
        let mut out: Vec<Expr> = Vec::new();
        for (_, _, e) in self.prolonged(l) {
            if !e.is_zero() && !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    /// `(a, J, D_J E_a)` for `|J| <= l`.
    pub(crate) fn prolonged(&self, l: u32) -> Vec<(usize, MultiIndex, Expr)> {
        let mut out = Vec::new();
        for j in MultiIndex::all_up_to(self.bundle.dim(), l) {
            for (a, g) in self.generators.iter().enumerate() {
                out.push((a, j.clone(), total_derivative_multi(g, &j)));
            }
        }
        out
    }

    fn reducer(&self, v: &JetVar) -> Option<(&SolvedForm, MultiIndex)> {
        let solved = self.solved.as_ref()?;
        solved
            .iter()
            .find(|s| s.lhs.field == v.field)
            .and_then(|s| v.index.minus(&s.lhs.index).map(|j| (s, j)))
    }

    /// Whether some solved form rewrites `v`.
    pub fn is_reducible(&self, v: &JetVar) -> bool {
        self.reducer(v).is_some()
    }

    pub fn reduce(&self, e: &Expr) -> Result<Expr> {
        self.reduce_with_certificate(e).map(|(r, _)| r)
    }

    /// Rewrites every reducible jet variable, highest rank first, recording
    /// `e = reduce(e) + sum C^{aJ} D_J E_a`.
    pub fn reduce_with_certificate(&self, e: &Expr) -> Result<(Expr, Certificate)> {
        if self.solved.is_none() {
            return Err(Error::MissingSolvedForm);
        }
        let mut r = e.clone();
        let mut cert = Certificate::new();
        loop {
            let next = r
                .jet_vars()
                .into_iter()
                .filter(|v| self.is_reducible(v))
                .max_by(|a, b| a.rank_key().cmp(&b.rank_key()));
            let Some(v) = next else { break };
            if r.occurs_in_function(&Symbol::Jet(v.clone())) {
                return Err(Error::Unsupported(format!(
                    "{} occurs inside an elementary function",
                    self.bundle.jet_name(&v)
                )));
            }
            let (sf, j) = self.reducer(&v).expect("reducible");
            let w = total_derivative_multi(&sf.rhs, &j);
            // r = sum c_k v^k ; r - r(v := w) = (v - w) sum c_k sum_i v^i w^(k-1-i)
            let mut next_r = Expr::zero();
            let mut multiplier = Expr::zero();
            let vx = Expr::jet(v.clone());
            for (k, c) in r.collect(&Symbol::Jet(v)) {
                next_r += &c * &w.pow(k);
                for i in 0..k {
                    multiplier += &c * &(vx.pow(i) * w.pow(k - 1 - i));
                }
            }
            cert.add(sf.generator, j, multiplier.scale(&sf.rho));
            r = next_r;
        }
        Ok((r, cert))
    }

    /// Reduces coefficients and replaces each reducible contact factor
    /// `omega_v` by `dvert(reduce(u_v))`.
    pub fn reduce_form(&self, f: &BigradedForm) -> Result<BigradedForm> {
        let mut images: BTreeMap<JetVar, BigradedForm> = BTreeMap::new();
        for (b, _) in f.terms() {
            for v in b.contact() {
                if self.is_reducible(v) && !images.contains_key(v) {
                    let red = self.reduce(&Expr::jet(v.clone()))?;
                    images.insert(v.clone(), BigradedForm::function(red).dvert());
                }
            }
        }
        let mut coeffs = Ok(());
        let reduced = f.map_coefficients(|c| match self.reduce(c) {
            Ok(r) => r,
            Err(e) => {
                coeffs = Err(e);
                Expr::zero()
            }
        });
        coeffs?;
        Ok(reduced.substitute_contacts(|v| images.get(v).cloned()))
    }

    /// Decides `e = 0` on shell within `bound`, with a verified certificate.
    ///
    /// With solved forms, reduction to zero is used. Otherwise multipliers
    /// for `D_J E_a` with `|J| <= bound` are searched by linear algebra.
    pub fn is_zero_on_shell(&self, e: &Expr, bound: Option<u32>) -> Result<Membership> {
        if e.is_zero() {
            return Ok(Membership::Member(Certificate::new()));
        }
        if self.solved.is_some() {
            let (r, cert) = self.reduce_with_certificate(e)?;
            if r.is_zero() {
                if !cert.verifies(self, e) {
                    return Err(Error::Invariant("reduction certificate does not verify".into()));
                }
                return Ok(Membership::Member(cert));
            }
            return Ok(Membership::Inconclusive(
                "normal form with respect to the solved forms is nonzero".into(),
            ));
        }
        self.membership_by_ansatz(e, bound)
    }

    /// The linear-ansatz membership test, ignoring solved forms.
    pub fn membership_by_ansatz(&self, e: &Expr, bound: Option<u32>) -> Result<Membership> {
        if e.is_zero() {
            return Ok(Membership::Member(Certificate::new()));
        }
        let bound = bound.unwrap_or_else(|| self.default_bound(e.jet_order()));
        let target = BigradedForm::function(e.clone());
        match exact::ideal_ansatz(self, &target, bound)? {
            Some(cert) => {
                if !cert.verifies(self, e) {
                    return Err(Error::Invariant("ansatz certificate does not verify".into()));
                }
                Ok(Membership::Member(cert))
            }
            None => Ok(Membership::Inconclusive(format!(
                "no multipliers found for prolongations up to order {bound}"
            ))),
        }
    }

    /// Whether `e` is provably nonzero on shell: a nonzero constant, or a
    /// nonzero normal form when solved forms are present.
    pub fn refutes(&self, e: &Expr) -> Result<bool> {
        if e.as_constant().is_some_and(|c| !c.is_zero()) {
            return Ok(true);
        }
        if self.solved.is_some() {
            return Ok(!self.reduce(e)?.is_zero());
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests;
