use proptest::prelude::*;

use super::*;

fn osc() -> BundleSpec {
    BundleSpec::new(&["t"], &["u"], &[] as &[&str]).unwrap()
}

fn wave() -> BundleSpec {
    BundleSpec::new(&["t", "x"], &["u"], &[] as &[&str]).unwrap()
}

fn u(b: &BundleSpec, pos: &[usize]) -> Expr {
    Expr::jet(b.jet(0, pos))
}

#[test]
fn normalize_examples() {
    let b = osc();
    let (u0, ut) = (u(&b, &[]), u(&b, &[0]));
    assert!((&u0 * &ut - &ut * &u0).is_zero());
    let x = Expr::coord(0);
    assert_eq!((&u0 + &u0) * x.clone(), (x * u0.clone()).scale(&int(2)));
    let s = Expr::func(ElemFn::Sin, u0.clone());
    let c = Expr::func(ElemFn::Cos, u0.clone());
    let pythagoras = s.pow(2) + c.pow(2);
    assert!(!equal(&pythagoras, &Expr::one()));
    assert_eq!(pythagoras.len(), 2);
}

#[test]
fn partial_examples() {
    let b = wave();
    let ut = b.jet(0, &[0]);
    let utx = b.jet(0, &[0, 1]);
    let sq = Expr::jet(ut.clone()).pow(2);
    assert_eq!(partial(&b, &sq, &ut.clone().into()).unwrap(), Expr::jet(ut.clone()).scale(&int(2)));
    let xu = Expr::coord(1) * Expr::jet(utx.clone());
    assert_eq!(partial(&b, &xu, &utx.into()).unwrap(), Expr::coord(1));
    assert!(partial(&b, &sq, &b.field(0).into()).unwrap().is_zero());
    let stranger = Symbol::Coord(5);
    assert!(matches!(partial(&b, &sq, &stranger), Err(crate::Error::UnknownVariable(_))));
}

#[test]
fn substitute_examples() {
    let b = osc();
    let (u0, ut, utt) = (b.field(0), b.jet(0, &[0]), b.jet(0, &[0, 0]));
    let rule: std::collections::BTreeMap<_, _> = [(utt.clone(), -Expr::jet(u0.clone()))].into();
    let e = Expr::jet(utt.clone()) + Expr::jet(u0.clone());
    assert!(e.substitute(&rule).is_zero());
    let e = Expr::jet(ut.clone()) * Expr::jet(utt);
    assert_eq!(e.substitute(&rule), -(Expr::jet(u0.clone()) * Expr::jet(ut)));
    assert_eq!(Expr::jet(u0.clone()).substitute(&Default::default()), Expr::jet(u0));
}

#[test]
fn equal_examples() {
    let b = osc();
    let (u0, ut, utt) = (u(&b, &[]), u(&b, &[0]), u(&b, &[0, 0]));
    assert!(equal(&(ut.pow(2) + &u0 * &utt), &(&u0 * &utt + ut.pow(2))));
    assert!(!equal(&u0, &ut));
    assert!(equal(&Expr::zero(), &(&u0 - &u0)));
}

#[test]
fn functions_at_zero_evaluate() {
    assert_eq!(Expr::func(ElemFn::Cos, Expr::zero()), Expr::one());
    assert!(Expr::func(ElemFn::Sin, Expr::zero()).is_zero());
}

#[test]
fn chain_rule_through_functions() {
    let b = osc();
    let u0 = b.field(0);
    let e = Expr::func(ElemFn::Exp, Expr::jet(u0.clone()).pow(2));
    let d = e.partial(&u0.clone().into());
    assert_eq!(d, Expr::jet(u0).scale(&int(2)) * e);
}

#[test]
fn ordering_of_symbols() {
    let b = wave();
    assert!(Symbol::Coord(1) < Symbol::Const(0));
    assert!(Symbol::Const(0) < Symbol::Jet(b.field(0)));
    assert!(b.jet(0, &[1, 1]) < b.jet(0, &[0, 0]));
    assert!(b.jet(0, &[0, 0]) < b.jet(0, &[0, 0, 1]));
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let b = wave();
    let atoms: Vec<Expr> = vec![
        Expr::coord(0),
        Expr::coord(1),
        u(&b, &[]),
        u(&b, &[0]),
        u(&b, &[1]),
        u(&b, &[0, 1]),
        Expr::func(ElemFn::Sin, u(&b, &[])),
    ];
    let term = (-4i64..5, prop::collection::vec(0..atoms.len(), 0..4)).prop_map(move |(c, fs)| {
        fs.iter().fold(Expr::int(c), |acc, &k| acc * atoms[k].clone())
    });
    prop::collection::vec(term, 0..5).prop_map(|ts| ts.into_iter().fold(Expr::zero(), |a, t| a + t))
}

proptest! {
    #[test]
    fn normalize_is_idempotent(e in arb_expr()) {
        prop_assert_eq!(e.normalize().normalize(), e.normalize());
        prop_assert_eq!(e.normalize(), e);
    }

    #[test]
    fn ring_laws(a in arb_expr(), b in arb_expr(), c in arb_expr()) {
        prop_assert!(equal(&(&(&a + &b) + &c), &(&a + &(&b + &c))));
        prop_assert!(equal(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(equal(&(&a * &b), &(&b * &a)));
        prop_assert!(equal(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn partials_commute(e in arb_expr(), i in 0usize..4, j in 0usize..4) {
        let b = wave();
        let vars = [Symbol::Coord(0), Symbol::Jet(b.field(0)), Symbol::Jet(b.jet(0, &[0])), Symbol::Jet(b.jet(0, &[0, 1]))];
        let (v, w) = (&vars[i], &vars[j]);
        prop_assert_eq!(e.partial(v).partial(w), e.partial(w).partial(v));
    }

    #[test]
    fn partial_obeys_leibniz(a in arb_expr(), b in arb_expr()) {
        let v = Symbol::Jet(wave().field(0));
        prop_assert_eq!((&a * &b).partial(&v), &a.partial(&v) * &b + &a * &b.partial(&v));
    }
}
