//! Linear-ansatz search for `F = dbar(lambda) + (ideal terms)`.
//!
//! Unknown terms are proposed by running the relevant operators backwards
//! on the monomials that have to be produced, for a few rounds, and the
//! resulting linear system is solved exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jetcalc::{BigradedForm, FormBasis};
use crate::symexpr::{BundleSpec, Expr, JetVar, Monomial, MultiIndex, Rational, Symbol};

use super::linsolve::{SparseRow, SparseSystem};
use super::{Certificate, EquationSystem};

const ROUNDS: usize = 4;
const MAX_UNKNOWNS: usize = 6000;

/// `F = dbar(lambda) + ideal_part`, where `ideal_part` vanishes on shell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactWitness {
    pub lambda: BigradedForm,
    pub ideal_part: BigradedForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact(ExactWitness),
    Inconclusive(String),
}

impl Exactness {
    pub fn holds(&self) -> bool {
        matches!(self, Exactness::Exact(_))
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Unknown {
    /// `dbar(m b)`.
    Lambda(Monomial, FormBasis),
    /// `m D_J E_a b`.
    Func(usize, MultiIndex, Monomial, FormBasis),
    /// `dvert(D_J E_a) ^ m b`.
    Contact(usize, MultiIndex, Monomial, FormBasis),
}

type Key = (Monomial, FormBasis);

fn keys(f: &BigradedForm) -> Vec<Key> {
    let mut out = Vec::new();
    for (b, c) in f.terms() {
        for (m, _) in c.terms() {
            out.push((m.clone(), b.clone()));
        }
    }
    out
}

fn basis_form(m: &Monomial, b: &FormBasis) -> BigradedForm {
    BigradedForm::monomial(Expr::term(m.clone(), Rational::from_integer(1.into())), b.gens())
}

fn rebuild(contact: Vec<JetVar>, horizontal: Vec<usize>) -> Option<FormBasis> {
    FormBasis::new(contact, horizontal).map(|(_, b)| b)
}

struct Ansatz<'a> {
    bundle: &'a BundleSpec,
    prolonged: Vec<(usize, MultiIndex, Expr)>,
    /// Applied to each contribution before matching; used for reduction.
    transform: Option<&'a dyn Fn(&BigradedForm) -> Result<BigradedForm>>,
    lambda: bool,
    ideal: bool,
    unknowns: BTreeMap<Unknown, BigradedForm>,
}

impl Ansatz<'_> {
    fn contribution(&self, u: &Unknown) -> Result<BigradedForm> {
        let n = self.bundle.dim();
        let raw = match u {
            Unknown::Lambda(m, b) => basis_form(m, b).dbar(n),
            Unknown::Func(a, j, m, b) => {
                let g = self.generator(*a, j);
                basis_form(m, b).mul_expr(&g)
            }
            Unknown::Contact(a, j, m, b) => {
                let g = self.generator(*a, j);
                BigradedForm::function(g).dvert().wedge(&basis_form(m, b))
            }
        };
        match self.transform {
            Some(t) => t(&raw),
            None => Ok(raw),
        }
    }

    fn generator(&self, a: usize, j: &MultiIndex) -> Expr {
        self.prolonged
            .iter()
            .find(|(b, k, _)| *b == a && k == j)
            .map(|(_, _, g)| g.clone())
            .expect("prolonged generator")
    }

    fn propose(&self, (m, b): &Key, out: &mut BTreeSet<Unknown>) {
        if self.ideal {
            for (a, j, g) in &self.prolonged {
                for (t, _) in g.terms() {
                    if let Some(c) = m.div(t) {
                        out.insert(Unknown::Func(*a, j.clone(), c, b.clone()));
                    }
                }
                for (k, v) in b.contact().iter().enumerate() {
                    let dg = g.partial(&Symbol::Jet(v.clone()));
                    if dg.is_zero() {
                        continue;
                    }
                    let mut rest = b.contact().to_vec();
                    rest.remove(k);
                    let Some(b2) = rebuild(rest, b.horizontal().to_vec()) else { continue };
                    for (t, _) in dg.terms() {
                        if let Some(c) = m.div(t) {
                            out.insert(Unknown::Contact(*a, j.clone(), c, b2.clone()));
                        }
                    }
                }
            }
        }
        if self.lambda {
            for &j in b.horizontal() {
                let horiz: Vec<usize> = b.horizontal().iter().copied().filter(|&i| i != j).collect();
                let Some(b1) = rebuild(b.contact().to_vec(), horiz.clone()) else { continue };
                out.insert(Unknown::Lambda(m.times_var(&Symbol::Coord(j), 1), b1.clone()));
                for (s, _) in m.vars() {
                    if let Symbol::Jet(w) = s {
                        if let Some(lower) = w.index.without(j) {
                            let lw = Symbol::Jet(JetVar::new(w.field, lower));
                            let mono = m.without_var(s).expect("present").times_var(&lw, 1);
                            out.insert(Unknown::Lambda(mono, b1.clone()));
                        }
                    }
                }
                for (k, v) in b.contact().iter().enumerate() {
                    if let Some(lower) = v.index.without(j) {
                        let mut contact = b.contact().to_vec();
                        contact[k] = JetVar::new(v.field, lower);
                        if let Some(b2) = rebuild(contact, horiz.clone()) {
                            out.insert(Unknown::Lambda(m.clone(), b2));
                        }
                    }
                }
            }
        }
    }

    fn solve(mut self, target: &BigradedForm) -> Result<Option<BTreeMap<Unknown, Rational>>> {
        let mut seen: BTreeSet<Key> = BTreeSet::new();
        let mut frontier: Vec<Key> = keys(target);
        for _ in 0..ROUNDS {
            let mut proposals = BTreeSet::new();
            for k in &frontier {
                if seen.insert(k.clone()) {
                    self.propose(k, &mut proposals);
                }
            }
            let mut next = Vec::new();
            for u in proposals {
                if self.unknowns.contains_key(&u) {
                    continue;
                }
                if self.unknowns.len() >= MAX_UNKNOWNS {
                    break;
                }
                let c = self.contribution(&u)?;
                if c.is_zero() || c.bidegree() != target.bidegree() {
                    continue;
                }
                next.extend(keys(&c).into_iter().filter(|k| !seen.contains(k)));
                self.unknowns.insert(u, c);
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let order: Vec<(&Unknown, &BigradedForm)> = self.unknowns.iter().collect();
        let mut rows: BTreeMap<Key, SparseRow> = BTreeMap::new();
        for (col, (_, c)) in order.iter().enumerate() {
            for (b, e) in c.terms() {
                for (m, r) in e.terms() {
                    rows.entry((m.clone(), b.clone()))
                        .or_default()
                        .insert(col, r.clone());
                }
            }
        }
        let mut rhs: BTreeMap<Key, Rational> = BTreeMap::new();
        for (b, e) in target.terms() {
            for (m, r) in e.terms() {
                rhs.insert((m.clone(), b.clone()), r.clone());
            }
        }
        if rhs.keys().any(|k| !rows.contains_key(k)) {
            return Ok(None);
        }
        let mut sys = SparseSystem::new();
        for (k, row) in rows {
            let b = rhs.get(&k).cloned().unwrap_or_else(Rational::zero);
            sys.add_equation(row, b);
        }
        let Some(x) = sys.solve(order.len()) else {
            return Ok(None);
        };
        Ok(Some(
            order
                .into_iter()
                .zip(x)
                .filter(|(_, v)| !v.is_zero())
                .map(|((u, _), v)| (u.clone(), v))
                .collect(),
        ))
    }
}

fn assemble(
    sys: &EquationSystem,
    target: &BigradedForm,
    sol: &BTreeMap<Unknown, Rational>,
) -> (BigradedForm, BigradedForm, Certificate) {
    let (p, q) = target.bidegree();
    let mut lambda = BigradedForm::zero(p, q.saturating_sub(1));
    let mut ideal = BigradedForm::zero(p, q);
    let mut cert = Certificate::new();
    for (u, x) in sol {
        match u {
            Unknown::Lambda(m, b) => lambda = &lambda + &basis_form(m, b).scale(x),
            Unknown::Func(a, j, m, b) => {
                let g = super::total_derivative_multi(&sys.generators()[*a], j);
                ideal = &ideal + &basis_form(m, b).mul_expr(&g).scale(x);
                if b.p() == 0 && b.q() == 0 {
                    cert.add(*a, j.clone(), Expr::term(m.clone(), x.clone()));
                }
            }
            Unknown::Contact(a, j, m, b) => {
                let g = super::total_derivative_multi(&sys.generators()[*a], j);
                let part = BigradedForm::function(g).dvert().wedge(&basis_form(m, b));
                ideal = &ideal + &part.scale(x);
            }
        }
    }
    (lambda, ideal, cert)
}

/// Multipliers with `target = sum C D_J E_a` for a (0,0)-form target.
pub(super) fn ideal_ansatz(
    sys: &EquationSystem,
    target: &BigradedForm,
    bound: u32,
) -> Result<Option<Certificate>> {
    let ansatz = Ansatz {
        bundle: sys.bundle(),
        prolonged: sys.prolonged(bound),
        transform: None,
        lambda: false,
        ideal: true,
        unknowns: BTreeMap::new(),
    };
    Ok(ansatz
        .solve(target)?
        .map(|sol| assemble(sys, target, &sol).2))
}

/// `jet order(F) - min generator order + 1`, clamped at zero.
pub fn default_form_bound(sys: &EquationSystem, f: &BigradedForm) -> u32 {
    sys.default_bound(f.jet_order())
}

/// Decides whether `F` is `dbar`-exact modulo the equation ideal.
///
/// With solved forms, `F` and the candidate images `dbar(lambda)` are first
/// reduced; otherwise the ideal is represented by the terms
/// `D_J E_a * A + dvert(D_J E_a) ^ M` with `|J| <= bound`.
pub fn is_dbar_exact_on_shell(
    f: &BigradedForm,
    sys: &EquationSystem,
    bound: Option<u32>,
) -> Result<Exactness> {
    let bundle = sys.bundle();
    let n = bundle.dim();
    if f.q() > n {
        return Err(Error::Unsupported("horizontal degree exceeds the base dimension".into()));
    }
    if f.is_zero() {
        return Ok(Exactness::Exact(ExactWitness {
            lambda: BigradedForm::zero(f.p(), f.q().saturating_sub(1)),
            ideal_part: f.clone(),
        }));
    }
    let bound = bound.unwrap_or_else(|| default_form_bound(sys, f));
    if sys.has_solved_forms() {
        let reduced = sys.reduce_form(f)?;
        if let Some(w) = reduced_search(sys, f, &reduced)? {
            return Ok(Exactness::Exact(w));
        }
    }
    let ansatz = Ansatz {
        bundle,
        prolonged: sys.prolonged(bound),
        transform: None,
        lambda: f.q() > 0,
        ideal: true,
        unknowns: BTreeMap::new(),
    };
    finish(sys, f, ansatz, bound)
}

fn reduced_search(
    sys: &EquationSystem,
    f: &BigradedForm,
    reduced: &BigradedForm,
) -> Result<Option<ExactWitness>> {
    let n = sys.bundle().dim();
    let lambda = if reduced.is_zero() {
        BigradedForm::zero(f.p(), f.q().saturating_sub(1))
    } else {
        if f.q() == 0 {
            return Ok(None);
        }
        let t = |g: &BigradedForm| sys.reduce_form(g);
        let ansatz = Ansatz {
            bundle: sys.bundle(),
            prolonged: Vec::new(),
            transform: Some(&t),
            lambda: true,
            ideal: false,
            unknowns: BTreeMap::new(),
        };
        let Some(sol) = ansatz.solve(reduced)? else {
            return Ok(None);
        };
        assemble(sys, f, &sol).0
    };
    let ideal_part = f - &lambda.dbar(n);
    if !sys.reduce_form(&ideal_part)?.is_zero() {
        return Err(Error::Invariant("reduced exactness witness does not verify".into()));
    }
    Ok(Some(ExactWitness { lambda, ideal_part }))
}

fn finish(
    sys: &EquationSystem,
    f: &BigradedForm,
    ansatz: Ansatz<'_>,
    bound: u32,
) -> Result<Exactness> {
    let n = sys.bundle().dim();
    let Some(sol) = ansatz.solve(f)? else {
        return Ok(Exactness::Inconclusive(format!(
            "no witness found with prolongations up to order {bound}"
        )));
    };
    let (lambda, ideal_part, _) = assemble(sys, f, &sol);
    if &lambda.dbar(n) + &ideal_part != *f {
        return Err(Error::Invariant("exactness witness does not verify".into()));
    }
    Ok(Exactness::Exact(ExactWitness { lambda, ideal_part }))
}

/// Off-shell exactness: `F = dbar(lambda)` with no ideal terms.
pub fn is_dbar_exact(bundle: &BundleSpec, f: &BigradedForm) -> Result<Exactness> {
    let sys = EquationSystem::new(bundle.clone(), Vec::new());
    if f.is_zero() {
        return Ok(Exactness::Exact(ExactWitness {
            lambda: BigradedForm::zero(f.p(), f.q().saturating_sub(1)),
            ideal_part: f.clone(),
        }));
    }
    if f.q() == 0 {
        return Ok(Exactness::Inconclusive("nonzero form of horizontal degree 0".into()));
    }
    let ansatz = Ansatz {
        bundle,
        prolonged: Vec::new(),
        transform: None,
        lambda: true,
        ideal: false,
        unknowns: BTreeMap::new(),
    };
    finish(&sys, f, ansatz, 0)
}
