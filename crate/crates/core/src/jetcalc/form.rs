use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::One;

use crate::symexpr::{Expr, JetVar, Rational};

use super::{total_derivative, EvolField};

/// One generator of the form algebra: a contact form `omega^alpha_I` or a
/// horizontal differential `dx^i`. Both are odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gen {
    Contact(JetVar),
    Horizontal(usize),
}

/// A canonical wedge monomial: contact factors first, then horizontal
/// factors, each strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FormBasis {
    contact: Vec<JetVar>,
    horizontal: Vec<usize>,
}

impl FormBasis {
    pub fn new(contact: Vec<JetVar>, horizontal: Vec<usize>) -> Option<(Rational, Self)> {
        let mut gens: Vec<Gen> = contact.into_iter().map(Gen::Contact).collect();
        gens.extend(horizontal.into_iter().map(Gen::Horizontal));
        canonicalize(gens)
    }

    pub fn volume(n: usize) -> Self {
        Self {
            contact: Vec::new(),
            horizontal: (0..n).collect(),
        }
    }

    pub fn contact(&self) -> &[JetVar] {
        &self.contact
    }

    pub fn horizontal(&self) -> &[usize] {
        &self.horizontal
    }

    pub fn p(&self) -> usize {
        self.contact.len()
    }

    pub fn q(&self) -> usize {
        self.horizontal.len()
    }

    pub fn gens(&self) -> Vec<Gen> {
        self.contact
            .iter()
            .cloned()
            .map(Gen::Contact)
            .chain(self.horizontal.iter().map(|&i| Gen::Horizontal(i)))
            .collect()
    }

    pub fn max_contact_order(&self) -> Option<u32> {
        self.contact.iter().map(JetVar::order).max()
    }
}

fn gen_key(g: &Gen) -> (u8, Option<&JetVar>, usize) {
    match g {
        Gen::Contact(v) => (0, Some(v), 0),
        Gen::Horizontal(i) => (1, None, *i),
    }
}

/// Sorts a wedge product of odd generators into canonical order, returning
/// the permutation sign, or `None` if a generator repeats.
pub fn canonicalize(mut gens: Vec<Gen>) -> Option<(Rational, FormBasis)> {
    let mut negative = false;
    for i in 1..gens.len() {
        let mut j = i;
        while j > 0 {
            match gen_key(&gens[j - 1]).cmp(&gen_key(&gens[j])) {
                std::cmp::Ordering::Greater => {
                    gens.swap(j - 1, j);
                    negative = !negative;
                    j -= 1;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => break,
            }
        }
    }
    let mut basis = FormBasis::default();
    for g in gens {
        match g {
            Gen::Contact(v) => basis.contact.push(v),
            Gen::Horizontal(i) => basis.horizontal.push(i),
        }
    }
    let sign = if negative { -Rational::one() } else { Rational::one() };
    Some((sign, basis))
}

/// `i_{d/dx^i}(dx^0 ^ ... ^ dx^{n-1})` as a sign and an index set.
pub fn volume_interior(n: usize, i: usize) -> (Rational, Vec<usize>) {
    let rest = (0..n).filter(|&j| j != i).collect();
    let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
    (sign, rest)
}

/// An element of `C^p Lambda^p (x) Lambda-bar^q`: a finite sum of
/// coefficient expressions times canonical wedge monomials.
///
/// Differentials follow the de Rham calculus of the jet space with
/// `d = dbar + dvert`, so `dbar omega^alpha_I = dx^i ^ omega^alpha_{I i}` and
/// the two differentials anticommute. Contraction with an evolutionary field
/// is the graded derivation of degree -1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BigradedForm {
    p: usize,
    q: usize,
    terms: BTreeMap<FormBasis, Expr>,
}

pub type Form = BigradedForm;

impl BigradedForm {
    pub fn zero(p: usize, q: usize) -> Self {
        Self {
            p,
            q,
            terms: BTreeMap::new(),
        }
    }

    /// A function viewed as a (0,0)-form.
    pub fn function(f: Expr) -> Self {
        let mut out = Self::zero(0, 0);
        out.add_basis(FormBasis::default(), f);
        out
    }

    /// `f dx^0 ^ ... ^ dx^{n-1}`.
    pub fn density(f: Expr, n: usize) -> Self {
        let mut out = Self::zero(0, n);
        out.add_basis(FormBasis::volume(n), f);
        out
    }

    /// `f * g_1 ^ ... ^ g_k` for arbitrary generators.
    pub fn monomial(f: Expr, gens: Vec<Gen>) -> Self {
        let p = gens.iter().filter(|g| matches!(g, Gen::Contact(_))).count();
        let q = gens.len() - p;
        let mut out = Self::zero(p, q);
        out.add_gens(f, gens);
        out
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormBasis, &Expr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: &FormBasis) -> Expr {
        self.terms.get(b).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `dx^0 ^ ... ^ dx^{n-1}` for a (0,n)-form.
    pub fn top_coefficient(&self, n: usize) -> Expr {
        self.coefficient(&FormBasis::volume(n))
    }

    /// The coefficient of a (0,0)-form.
    pub fn as_function(&self) -> Expr {
        self.coefficient(&FormBasis::default())
    }

    pub fn add_basis(&mut self, b: FormBasis, f: Expr) {
        assert_eq!(
            (b.p(), b.q()),
            (self.p, self.q),
            "bidegree mismatch in form arithmetic"
        );
        if f.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(f);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += f;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_gens(&mut self, f: Expr, gens: Vec<Gen>) {
        if f.is_zero() {
            return;
        }
        if let Some((sign, b)) = canonicalize(gens) {
            self.add_basis(b, f.scale(&sign));
        }
    }

    pub fn map_coefficients<F: FnMut(&Expr) -> Expr>(&self, mut f: F) -> Self {
        let mut out = Self::zero(self.p, self.q);
        for (b, c) in &self.terms {
            out.add_basis(b.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_coefficients(|e| e.scale(c))
    }

    pub fn mul_expr(&self, f: &Expr) -> Self {
        self.map_coefficients(|e| e * f)
    }

    /// Highest jet order among coefficients and contact factors.
    pub fn jet_order(&self) -> Option<u32> {
        self.terms
            .iter()
            .flat_map(|(b, c)| [c.jet_order(), b.max_contact_order()])
            .flatten()
            .max()
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p + other.p, self.q + other.q);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                let mut gens = b1.gens();
                gens.extend(b2.gens());
                out.add_gens(c1 * c2, gens);
            }
        }
        out
    }

    /// Horizontal differential over `n` independent variables.
    pub fn dbar(&self, n: usize) -> Self {
        let mut out = Self::zero(self.p, self.q + 1);
        for (b, c) in &self.terms {
            let gens = b.gens();
            for j in 0..n {
                let dc = total_derivative(c, j);
                if !dc.is_zero() {
                    let mut g = Vec::with_capacity(gens.len() + 1);
                    g.push(Gen::Horizontal(j));
                    g.extend(gens.iter().cloned());
                    out.add_gens(dc, g);
                }
            }
            // dbar omega_K = dx^j ^ omega_{K j}; k contact factors precede it.
            for (k, v) in b.contact.iter().enumerate() {
                let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                for j in 0..n {
                    let mut g = Vec::with_capacity(gens.len() + 1);
                    g.extend(gens[..k].iter().cloned());
                    g.push(Gen::Horizontal(j));
                    g.push(Gen::Contact(v.derive(j)));
                    g.extend(gens[k + 1..].iter().cloned());
                    out.add_gens(c.scale(&sign), g);
                }
            }
        }
        out
    }

    /// Vertical differential: `dvert f = d^I_alpha f omega^alpha_I`, and it
    /// kills contact forms and `dx^i`.
    pub fn dvert(&self) -> Self {
        let mut out = Self::zero(self.p + 1, self.q);
        for (b, c) in &self.terms {
            let gens = b.gens();
            for v in c.jet_vars() {
                let dc = c.partial(&v.clone().into());
                if dc.is_zero() {
                    continue;
                }
                let mut g = Vec::with_capacity(gens.len() + 1);
                g.push(Gen::Contact(v));
                g.extend(gens.iter().cloned());
                out.add_gens(dc, g);
            }
        }
        out
    }

    /// Insertion of `E_chi`: `omega^alpha_I -> D_I chi^alpha`, `dx^i -> 0`,
    /// extended as a graded derivation of degree -1.
    pub fn contract(&self, chi: &EvolField) -> Self {
        if self.p == 0 {
            return Self::zero(0, self.q);
        }
        let mut out = Self::zero(self.p - 1, self.q);
        for (b, c) in &self.terms {
            let gens = b.gens();
            for (k, v) in b.contact.iter().enumerate() {
                let val = chi.prolonged_var(v);
                if val.is_zero() {
                    continue;
                }
                let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
                let mut g = gens.clone();
                g.remove(k);
                out.add_gens((c * &val).scale(&sign), g);
            }
        }
        out
    }

    /// Lie derivative along `E_chi`, computed directly as the even derivation
    /// with `L f = E_chi f`, `L omega^alpha_I = dvert(D_I chi^alpha)`, `L dx^i = 0`.
    pub fn lie(&self, chi: &EvolField) -> Self {
        let mut out = Self::zero(self.p, self.q);
        for (b, c) in &self.terms {
            let gens = b.gens();
            out.add_gens(chi.apply(c), gens.clone());
            for (k, v) in b.contact.iter().enumerate() {
                let val = chi.prolonged_var(v);
                for w in val.jet_vars() {
                    let dv = val.partial(&w.clone().into());
                    if dv.is_zero() {
                        continue;
                    }
                    let mut g = gens.clone();
                    g[k] = Gen::Contact(w);
                    out.add_gens(c * &dv, g);
                }
            }
        }
        out
    }

    /// Replaces each contact factor `omega_v` by a (1,0)-form, multiplying
    /// out the wedge products. Used for restriction to equations.
    pub(crate) fn substitute_contacts<F>(&self, mut image: F) -> Self
    where
        F: FnMut(&JetVar) -> Option<BigradedForm>,
    {
        let mut out = Self::zero(self.p, self.q);
        for (b, c) in &self.terms {
            let mut acc = Self::function(c.clone());
            for v in &b.contact {
                let factor = image(v).unwrap_or_else(|| {
                    Self::monomial(Expr::one(), vec![Gen::Contact(v.clone())])
                });
                acc = acc.wedge(&factor);
            }
            let horizontal = Self::monomial(
                Expr::one(),
                b.horizontal.iter().map(|&i| Gen::Horizontal(i)).collect(),
            );
            out = &out + &acc.wedge(&horizontal);
        }
        out
    }
}

/// The (1,0)-form `dvert f` for a function `f`.
pub fn dvert_function(f: &Expr) -> BigradedForm {
    BigradedForm::function(f.clone()).dvert()
}

impl Add<&BigradedForm> for &BigradedForm {
    type Output = BigradedForm;
    fn add(self, rhs: &BigradedForm) -> BigradedForm {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let mut out = self.clone();
        for (b, c) in &rhs.terms {
            out.add_basis(b.clone(), c.clone());
        }
        out
    }
}

impl Sub<&BigradedForm> for &BigradedForm {
    type Output = BigradedForm;
    fn sub(self, rhs: &BigradedForm) -> BigradedForm {
        self + &(-rhs)
    }
}

impl Neg for &BigradedForm {
    type Output = BigradedForm;
    fn neg(self) -> BigradedForm {
        self.map_coefficients(|c| -c)
    }
}

impl Neg for BigradedForm {
    type Output = BigradedForm;
    fn neg(self) -> BigradedForm {
        -&self
    }
}
