//! Horizontal linear differential operators `(Op s)^A = sum c^A_{a,I} D_I s^a`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Neg, Sub};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::jetcalc::{total_derivative_multi, BigradedForm, EvolField};
use crate::symexpr::{BundleSpec, Expr, JetVar, MultiIndex, Rational};
use crate::varcalc::split_divergence;

pub type Entry = BTreeMap<MultiIndex, Expr>;

/// A `rows x cols` matrix of total-derivative polynomials in D-normal form:
/// coefficients on the left, total derivatives on the right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinDiffOp {
    rows: usize,
    cols: usize,
    dim: usize,
    entries: Vec<Entry>,
}

fn add_into(entry: &mut Entry, idx: MultiIndex, c: Expr) {
    if c.is_zero() {
        return;
    }
    let slot = entry.entry(idx.clone()).or_default();
    *slot += c;
    if slot.is_zero() {
        entry.remove(&idx);
    }
}

impl LinDiffOp {
    pub fn zero(rows: usize, cols: usize, dim: usize) -> Self {
        Self {
            rows,
            cols,
            dim,
            entries: vec![Entry::new(); rows * cols],
        }
    }

    pub fn identity(k: usize, dim: usize) -> Self {
        let mut out = Self::zero(k, k, dim);
        for a in 0..k {
            out.add_term(a, a, MultiIndex::empty(dim), Expr::one());
        }
        out
    }

    /// The 1x1 operator `c D_I`.
    pub fn monomial(dim: usize, index: MultiIndex, c: Expr) -> Self {
        let mut out = Self::zero(1, 1, dim);
        out.add_term(0, 0, index, c);
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> &Entry {
        &self.entries[row * self.cols + col]
    }

    pub fn coefficient(&self, row: usize, col: usize, index: &MultiIndex) -> Expr {
        self.entry(row, col).get(index).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, row: usize, col: usize, index: MultiIndex, c: Expr) {
        let cols = self.cols;
        add_into(&mut self.entries[row * cols + col], index, c);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Entry::is_empty)
    }

    /// Highest `|I|` present, `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.entries
            .iter()
            .flat_map(|e| e.keys().map(MultiIndex::order))
            .max()
    }

    pub fn apply(&self, s: &[Expr]) -> Result<Vec<Expr>> {
        if s.len() != self.cols {
            return Err(Error::ArityMismatch {
                expected: self.cols,
                found: s.len(),
            });
        }
        let mut out = vec![Expr::zero(); self.rows];
        for (r, slot) in out.iter_mut().enumerate() {
            for (c, sc) in s.iter().enumerate() {
                for (idx, coeff) in self.entry(r, c) {
                    *slot += coeff * &total_derivative_multi(sc, idx);
                }
            }
        }
        Ok(out)
    }

    /// Applies the operator to a generating section.
    pub fn apply_field(&self, chi: &EvolField) -> Result<EvolField> {
        self.apply(chi.components()).map(EvolField::new)
    }

    /// `(Op^dagger q)_a = sum_I (-1)^|I| D_I(c^A_{a,I} q_A)`, expanded by Leibniz.
    pub fn adjoint(&self) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.cols, self.rows, self.dim);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (idx, coeff) in self.entry(r, c) {
                    let sign = if idx.order() % 2 == 0 { 1 } else { -1 };
                    for (j, binom) in idx.sub_indices() {
                        let rest = idx.minus(&j).expect("sub-index");
                        let k = Rational::from_integer(BigInt::from(binom) * BigInt::from(sign));
                        let d = total_derivative_multi(coeff, &rest).scale(&k);
                        out.add_term(c, r, j, d);
                    }
                }
            }
        }
        out
    }

    /// `outer o inner`.
    pub fn compose(&self, inner: &LinDiffOp) -> Result<LinDiffOp> {
        if self.cols != inner.rows {
            return Err(Error::ArityMismatch {
                expected: self.cols,
                found: inner.rows,
            });
        }
        let mut out = LinDiffOp::zero(self.rows, inner.cols, self.dim);
        for r in 0..self.rows {
            for k in 0..self.cols {
                for (i, a) in self.entry(r, k) {
                    let subs = i.sub_indices();
                    for c in 0..inner.cols {
                        for (j, b) in inner.entry(k, c) {
                            // a D_I (b D_J) = sum_K C(I,K) a D_{I-K}(b) D_{K+J}
                            for (kk, binom) in &subs {
                                let rest = i.minus(kk).expect("sub-index");
                                let db = total_derivative_multi(b, &rest);
                                if db.is_zero() {
                                    continue;
                                }
                                let coeff = (a * &db)
                                    .scale(&Rational::from_integer(BigInt::from(*binom)));
                                out.add_term(r, c, kk.join(j), coeff);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_expr(&self, f: &Expr) -> LinDiffOp {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = e
                .iter()
                .map(|(k, v)| (k.clone(), v * f))
                .filter(|(_, v)| !v.is_zero())
                .collect();
        }
        out
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients<F: FnMut(&Expr) -> Expr>(&self, mut f: F) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.rows, self.cols, self.dim);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (idx, coeff) in self.entry(r, c) {
                    out.add_term(r, c, idx.clone(), f(coeff));
                }
            }
        }
        out
    }

    /// Every nonzero coefficient with its position.
    pub fn coefficients(&self) -> impl Iterator<Item = (usize, usize, &MultiIndex, &Expr)> {
        self.entries.iter().enumerate().flat_map(move |(k, e)| {
            let (r, c) = (k / self.cols.max(1), k % self.cols.max(1));
            e.iter().map(move |(i, v)| (r, c, i, v))
        })
    }
}

impl fmt::Debug for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinDiffOp{}x{}[", self.rows, self.cols)?;
        for (r, c, i, v) in self.coefficients() {
            write!(f, " ({r},{c}) {v:?}*D{i:?};")?;
        }
        write!(f, " ]")
    }
}

impl Sub<&LinDiffOp> for &LinDiffOp {
    type Output = LinDiffOp;
    fn sub(self, rhs: &LinDiffOp) -> LinDiffOp {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "operator shape mismatch");
        let mut out = self.clone();
        for (r, c, i, v) in rhs.coefficients() {
            out.add_term(r, c, i.clone(), -v);
        }
        out
    }
}

impl std::ops::Add<&LinDiffOp> for &LinDiffOp {
    type Output = LinDiffOp;
    fn add(self, rhs: &LinDiffOp) -> LinDiffOp {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "operator shape mismatch");
        let mut out = self.clone();
        for (r, c, i, v) in rhs.coefficients() {
            out.add_term(r, c, i.clone(), v.clone());
        }
        out
    }
}

impl Neg for &LinDiffOp {
    type Output = LinDiffOp;
    fn neg(self) -> LinDiffOp {
        self.map_coefficients(|c| -c)
    }
}

/// The universal linearization: entry `(a, alpha, I)` is `d^I_alpha Phi^a`.
pub fn linearize(bundle: &BundleSpec, phi: &[Expr]) -> LinDiffOp {
    let mut out = LinDiffOp::zero(phi.len(), bundle.fields(), bundle.dim());
    for (a, e) in phi.iter().enumerate() {
        for v in e.jet_vars() {
            let d = e.partial(&v.clone().into());
            let JetVar { field, index } = v;
            out.add_term(a, field, index, d);
        }
    }
    out
}

/// `sum_A q_A s^A`.
pub fn pairing(q: &[Expr], s: &[Expr]) -> Expr {
    q.iter().zip(s).fold(Expr::zero(), |acc, (a, b)| acc + a * b)
}

/// A (0,n-1)-form `G` with `<q, Op p> - <Op^dagger q, p> = dbar G`.
pub fn green_remainder(
    bundle: &BundleSpec,
    op: &LinDiffOp,
    p: &[Expr],
    qdag: &[Expr],
) -> Result<BigradedForm> {
    if qdag.len() != op.rows() {
        return Err(Error::ArityMismatch {
            expected: op.rows(),
            found: qdag.len(),
        });
    }
    let lhs = pairing(qdag, &op.apply(p)?);
    let rhs = pairing(&op.adjoint().apply(qdag)?, p);
    let t = BigradedForm::density(lhs - rhs, bundle.dim());
    split_divergence(bundle, &t).map_err(|e| match e {
        Error::NotExact => Error::Invariant("Green pairing difference is not a divergence".into()),
        other => other,
    })
}

/// Whether `second o first` vanishes identically.
pub fn is_complex(second: &LinDiffOp, first: &LinDiffOp) -> Result<bool> {
    Ok(second.compose(first)?.is_zero())
}

/// The horizontal differential on `q`-forms as an operator between
/// coefficient vectors, in the basis of increasing index sets.
pub fn horizontal_differential(n: usize, q: usize) -> LinDiffOp {
    let src = subsets(n, q);
    let dst = subsets(n, q + 1);
    let mut out = LinDiffOp::zero(dst.len(), src.len(), n);
    for (c, s) in src.iter().enumerate() {
        for j in 0..n {
            if s.contains(&j) {
                continue;
            }
            // dx^j ^ dx^S = (-1)^{#(S below j)} dx^{S + j}
            let below = s.iter().filter(|&&k| k < j).count();
            let mut t = s.clone();
            t.push(j);
            t.sort_unstable();
            let r = dst.iter().position(|x| *x == t).expect("subset");
            let sign = if below % 2 == 0 { 1 } else { -1 };
            out.add_term(r, c, MultiIndex::unit(n, j), Expr::int(sign));
        }
    }
    out
}

/// Increasing `q`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, q, &mut Vec::new(), &mut out);
    out
}

/// Sign `s` with `beta ^ dbar alpha = s dbar beta ^ alpha` modulo exact forms,
/// for `alpha` of degree `q` and `beta` of degree `n - q - 1`; i.e. the adjoint
/// of `dbar` on `q`-forms is `s dbar` on `(n-q-1)`-forms under `beta ^ gamma`.
pub fn dbar_adjoint_sign(n: usize, q: usize) -> i64 {
    if (n - q) % 2 == 0 {
        1
    } else {
        -1
    }
}
