use crate::symexpr::{Expr, MultiIndex, Symbol};

/// `D_i e = d_i e + u_{I i} d^I e`.
pub fn total_derivative(e: &Expr, i: usize) -> Expr {
    e.derive_with(&|s: &Symbol| match s {
        Symbol::Coord(j) => (*j == i).then(Expr::one),
        Symbol::Const(_) => None,
        Symbol::Jet(v) => Some(Expr::jet(v.derive(i))),
    })
}

/// `D_I e`, applied position by position.
pub fn total_derivative_multi(e: &Expr, index: &MultiIndex) -> Expr {
    let mut acc = e.clone();
    for i in index.positions() {
        if acc.is_zero() {
            break;
        }
        acc = total_derivative(&acc, i);
    }
    acc
}
