use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{JetVar, Symbol};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The closed set of elementary functions admitted in expressions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ElemFn {
    Sin,
    Cos,
    Exp,
}

impl ElemFn {
    pub fn name(self) -> &'static str {
        match self {
            ElemFn::Sin => "sin",
            ElemFn::Cos => "cos",
            ElemFn::Exp => "exp",
        }
    }

    /// `f'(arg)`.
    fn derivative_at(self, arg: &Expr) -> Expr {
        match self {
            ElemFn::Sin => Expr::func(ElemFn::Cos, arg.clone()),
            ElemFn::Cos => -Expr::func(ElemFn::Sin, arg.clone()),
            ElemFn::Exp => Expr::func(ElemFn::Exp, arg.clone()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Factor {
    Var(Symbol),
    Func(ElemFn, Arc<Expr>),
}

impl Factor {
    fn symbols_into(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            Factor::Var(s) => {
                out.insert(s.clone());
            }
            Factor::Func(_, a) => a.symbols_into(out),
        }
    }
}

/// A power product of factors, kept sorted with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<(Factor, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Self(vec![(Factor::Var(s), 1)])
    }

    pub fn from_factors(mut factors: Vec<(Factor, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Factor, u32)> = Vec::with_capacity(factors.len());
        for (f, e) in factors {
            match out.last_mut() {
                Some((g, ge)) if *g == f => *ge += e,
                _ => out.push((f, e)),
            }
        }
        Self(out)
    }

    pub fn factors(&self) -> &[(Factor, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (f, e) in &other.0 {
            let pos = out.iter().position(|(g, _)| g == f)?;
            if out[pos].1 < *e {
                return None;
            }
            out[pos].1 -= e;
        }
        out.retain(|(_, e)| *e > 0);
        Some(Monomial(out))
    }

    pub fn exponent_of(&self, s: &Symbol) -> u32 {
        self.0
            .iter()
            .find(|(f, _)| matches!(f, Factor::Var(v) if v == s))
            .map_or(0, |(_, e)| *e)
    }

    /// Multiplies by `s^k`.
    pub fn times_var(&self, s: &Symbol, k: u32) -> Monomial {
        self.mul(&Monomial(vec![(Factor::Var(s.clone()), k)]))
    }

    /// Divides by one power of `s`, if present.
    pub fn without_var(&self, s: &Symbol) -> Option<Monomial> {
        self.div(&Monomial::var(s.clone()))
    }

    pub fn vars(&self) -> impl Iterator<Item = (&Symbol, u32)> {
        self.0.iter().filter_map(|(f, e)| match f {
            Factor::Var(s) => Some((s, *e)),
            Factor::Func(..) => None,
        })
    }

    pub fn has_funcs(&self) -> bool {
        self.0.iter().any(|(f, _)| matches!(f, Factor::Func(..)))
    }

    /// Total degree in jet variables; `None` if a function factor depends on one.
    pub fn jet_degree(&self) -> Option<u32> {
        let mut d = 0;
        for (f, e) in &self.0 {
            match f {
                Factor::Var(Symbol::Jet(_)) => d += e,
                Factor::Var(_) => {}
                Factor::Func(_, a) => {
                    if !a.jet_vars().is_empty() {
                        return None;
                    }
                }
            }
        }
        Some(d)
    }
}

/// A differential polynomial with exact rational coefficients, kept in
/// canonical expanded form. Equality of values is semantic equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::term(Monomial::var(s), Rational::one())
    }

    pub fn jet(v: JetVar) -> Self {
        Self::symbol(Symbol::Jet(v))
    }

    pub fn coord(i: usize) -> Self {
        Self::symbol(Symbol::Coord(i))
    }

    pub fn constant_symbol(i: usize) -> Self {
        Self::symbol(Symbol::Const(i))
    }

    /// `f(arg)`, evaluated when the argument is zero.
    pub fn func(f: ElemFn, arg: Expr) -> Self {
        if arg.is_zero() {
            return match f {
                ElemFn::Sin => Self::zero(),
                ElemFn::Cos | ElemFn::Exp => Self::one(),
            };
        }
        Self::term(
            Monomial(vec![(Factor::Func(f, Arc::new(arg)), 1)]),
            Rational::one(),
        )
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if the expression is a rational constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Canonical form. Values are canonical by construction, so this only
    /// rebuilds function arguments recursively.
    pub fn normalize(&self) -> Expr {
        Expr::from_terms(self.terms.iter().map(|(m, c)| {
            let factors = m
                .0
                .iter()
                .map(|(f, e)| match f {
                    Factor::Func(k, a) => (Factor::Func(*k, Arc::new(a.normalize())), *e),
                    v => (v.clone(), *e),
                })
                .collect();
            (Monomial::from_factors(factors), c.clone())
        }))
    }

    pub fn scale(&self, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr::from_terms(self.terms.iter().map(|(n, k)| (n.mul(m), k * c)))
    }

    pub fn pow(&self, k: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a derivation that maps each symbol `s` to `d(s)`; function
    /// factors follow the chain rule.
    pub fn derive_with<F>(&self, d: &F) -> Expr
    where
        F: Fn(&Symbol) -> Option<Expr>,
    {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            for (k, (f, e)) in m.0.iter().enumerate() {
                let df = match f {
                    Factor::Var(s) => match d(s) {
                        Some(v) => v,
                        None => continue,
                    },
                    Factor::Func(kind, a) => {
                        let da = a.derive_with(d);
                        if da.is_zero() {
                            continue;
                        }
                        &kind.derivative_at(a) * &da
                    }
                };
                if df.is_zero() {
                    continue;
                }
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(k);
                } else {
                    rest[k].1 -= 1;
                }
                let coeff = c * int(i64::from(*e));
                out += df.mul_term(&Monomial(rest), &coeff);
            }
        }
        out
    }

    /// Formal partial derivative; every jet variable is an independent symbol.
    pub fn partial(&self, v: &Symbol) -> Expr {
        self.derive_with(&|s: &Symbol| (s == v).then(Expr::one))
    }

    /// Simultaneous substitution of symbols, including inside function arguments.
    pub fn substitute_symbols(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut acc = Expr::constant(c.clone());
            let mut kept = Vec::new();
            for (f, e) in &m.0 {
                match f {
                    Factor::Var(s) => match map.get(s) {
                        Some(r) => acc = &acc * &r.pow(*e),
                        None => kept.push((f.clone(), *e)),
                    },
                    Factor::Func(k, a) => {
                        let a2 = a.substitute_symbols(map);
                        if a2 == **a {
                            kept.push((f.clone(), *e));
                        } else {
                            acc = &acc * &Expr::func(*k, a2).pow(*e);
                        }
                    }
                }
            }
            out += acc.mul_term(&Monomial::from_factors(kept), &Rational::one());
        }
        out
    }

    pub fn substitute(&self, bindings: &BTreeMap<JetVar, Expr>) -> Expr {
        let map = bindings
            .iter()
            .map(|(k, v)| (Symbol::Jet(k.clone()), v.clone()))
            .collect();
        self.substitute_symbols(&map)
    }

    fn symbols_into(&self, out: &mut BTreeSet<Symbol>) {
        for m in self.terms.keys() {
            for (f, _) in &m.0 {
                f.symbols_into(out);
            }
        }
    }

    /// Every symbol occurring anywhere, including function arguments.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.symbols_into(&mut out);
        out
    }

    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.symbols()
            .into_iter()
            .filter_map(|s| match s {
                Symbol::Jet(v) => Some(v),
                _ => None,
            })
            .collect()
    }

    /// Highest `|I|` over occurring jet variables; `None` if there are none.
    pub fn jet_order(&self) -> Option<u32> {
        self.jet_vars().iter().map(JetVar::order).max()
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.symbols().contains(s)
    }

    /// Whether `s` occurs inside some function argument.
    pub fn occurs_in_function(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| {
            m.0.iter()
                .any(|(f, _)| matches!(f, Factor::Func(_, a) if a.depends_on(s)))
        })
    }

    /// Coefficients of the powers of `s`, assuming `s` does not occur inside
    /// function arguments.
    pub fn collect(&self, s: &Symbol) -> BTreeMap<u32, Expr> {
        let mut out: BTreeMap<u32, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.exponent_of(s);
            let rest = if k == 0 {
                m.clone()
            } else {
                m.div(&Monomial(vec![(Factor::Var(s.clone()), k)])).unwrap()
            };
            out.entry(k).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Splits into parts homogeneous in the jet variables. `None` when some
    /// function factor depends on a jet variable.
    pub fn jet_homogeneous_parts(&self) -> Option<BTreeMap<u32, Expr>> {
        let mut out: BTreeMap<u32, Expr> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = m.jet_degree()?;
            out.entry(d).or_default().add_term(m.clone(), c.clone());
        }
        Some(out)
    }

    pub fn has_funcs(&self) -> bool {
        self.terms.keys().any(Monomial::has_funcs)
    }

    /// Largest absolute numerator or denominator among coefficients.
    pub fn max_coefficient_height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// `normalize(a - b) == 0`.
pub fn equal(a: &Expr, b: &Expr) -> bool {
    (a - b).is_zero()
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (fac, e) in &m.0 {
                match fac {
                    Factor::Var(s) => write!(f, "*{s:?}")?,
                    Factor::Func(k, a) => write!(f, "*{}({a:?})", k.name())?,
                }
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl AddAssign<Expr> for Expr {
    fn add_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Expr> for Expr {
    fn add_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Expr> for Expr {
    fn sub_assign(&mut self, rhs: &Expr) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl SubAssign<Expr> for Expr {
    fn sub_assign(&mut self, rhs: Expr) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add<Expr> for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        self += rhs;
        self
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub<Expr> for Expr {
    type Output = Expr;
    fn sub(mut self, rhs: Expr) -> Expr {
        self -= rhs;
        self
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -self.clone()
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul<Expr> for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl From<JetVar> for Expr {
    fn from(v: JetVar) -> Self {
        Expr::jet(v)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Self {
        Expr::symbol(s)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::constant(c)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}
