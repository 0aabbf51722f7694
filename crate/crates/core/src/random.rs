//! Seeded generators of random expressions, forms, fields and operators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jetcalc::{BigradedForm, EvolField, Gen};
use crate::linop::LinDiffOp;
use crate::symexpr::{rat, BundleSpec, Expr, JetVar, MultiIndex};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for random expressions.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_order: u32,
    pub max_terms: usize,
    pub max_degree: u32,
    /// Probability that a factor is a base coordinate rather than a jet variable.
    pub coord_weight: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Self {
            max_order: 2,
            max_terms: 4,
            max_degree: 3,
            coord_weight: 0.2,
        }
    }
}

pub fn jet_var(rng: &mut SeededRng, bundle: &BundleSpec, max_order: u32) -> JetVar {
    let n = bundle.dim();
    let order = rng.gen_range(0..=max_order);
    let positions: Vec<usize> = (0..order).map(|_| rng.gen_range(0..n)).collect();
    JetVar::new(
        rng.gen_range(0..bundle.fields()),
        MultiIndex::from_positions(n, &positions),
    )
}

fn coefficient(rng: &mut SeededRng) -> Expr {
    let num = *[-3i64, -2, -1, 1, 1, 2, 3, 5].choose(rng).expect("nonempty");
    let den = *[1i64, 1, 1, 2, 3].choose(rng).expect("nonempty");
    Expr::constant(rat(num, den))
}

/// A random differential polynomial.
pub fn expr(rng: &mut SeededRng, bundle: &BundleSpec, shape: &Shape) -> Expr {
    let terms = rng.gen_range(1..=shape.max_terms.max(1));
    let mut out = Expr::zero();
    for _ in 0..terms {
        let mut t = coefficient(rng);
        for _ in 0..rng.gen_range(0..=shape.max_degree) {
            let f = if rng.gen_bool(shape.coord_weight) {
                Expr::coord(rng.gen_range(0..bundle.dim()))
            } else {
                Expr::jet(jet_var(rng, bundle, shape.max_order))
            };
            t = t * f;
        }
        out += t;
    }
    out
}

/// A random polynomial of positive degree, never identically zero.
pub fn nonzero_expr(rng: &mut SeededRng, bundle: &BundleSpec, shape: &Shape) -> Expr {
    loop {
        let e = expr(rng, bundle, shape);
        if !e.is_zero() {
            return e;
        }
    }
}

/// A random form of bidegree `(p, q)`.
pub fn form(rng: &mut SeededRng, bundle: &BundleSpec, p: usize, q: usize, shape: &Shape) -> BigradedForm {
    let n = bundle.dim();
    let mut out = BigradedForm::zero(p, q);
    for _ in 0..rng.gen_range(1..=3) {
        let mut gens: Vec<Gen> = (0..p)
            .map(|_| Gen::Contact(jet_var(rng, bundle, shape.max_order)))
            .collect();
        let mut horizontal: Vec<usize> = (0..n).collect();
        horizontal.shuffle(rng);
        gens.extend(horizontal.into_iter().take(q).map(Gen::Horizontal));
        out = &out + &BigradedForm::monomial(expr(rng, bundle, shape), gens);
    }
    out
}

pub fn field(rng: &mut SeededRng, bundle: &BundleSpec, shape: &Shape) -> EvolField {
    EvolField::new((0..bundle.fields()).map(|_| expr(rng, bundle, shape)).collect())
}

/// A random `rows x cols` operator of order at most `max_order`.
pub fn operator(
    rng: &mut SeededRng,
    bundle: &BundleSpec,
    rows: usize,
    cols: usize,
    max_order: u32,
    shape: &Shape,
) -> LinDiffOp {
    let n = bundle.dim();
    let mut out = LinDiffOp::zero(rows, cols, n);
    for r in 0..rows {
        for c in 0..cols {
            for _ in 0..rng.gen_range(0..=2) {
                let order = rng.gen_range(0..=max_order);
                let positions: Vec<usize> = (0..order).map(|_| rng.gen_range(0..n)).collect();
                out.add_term(r, c, MultiIndex::from_positions(n, &positions), expr(rng, bundle, shape));
            }
        }
    }
    out
}
