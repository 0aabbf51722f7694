use proptest::prelude::*;

use super::*;
use crate::random::{self, Shape};
use crate::symexpr::{int, rat, ElemFn};

fn osc() -> BundleSpec {
    BundleSpec::new(&["t"], &["u"], &[] as &[&str]).unwrap()
}

fn plane2() -> BundleSpec {
    BundleSpec::new(&["t", "x"], &["u", "v"], &[] as &[&str]).unwrap()
}

fn j(b: &BundleSpec, a: usize, pos: &[usize]) -> Expr {
    Expr::jet(b.jet(a, pos))
}

fn w(b: &BundleSpec, a: usize, pos: &[usize]) -> Gen {
    Gen::Contact(b.jet(a, pos))
}

#[test]
fn total_derivative_examples() {
    let b = plane2();
    let (u, ut, utt) = (j(&b, 0, &[]), j(&b, 0, &[0]), j(&b, 0, &[0, 0]));
    assert_eq!(total_derivative(&(&u * &ut), 0), ut.pow(2) + &u * &utt);
    let x = Expr::coord(1);
    assert_eq!(total_derivative(&(&x * &u), 1), &u + &(&x * &j(&b, 0, &[1])));
    let s = Expr::func(ElemFn::Sin, u.clone());
    assert_eq!(total_derivative(&s, 0), Expr::func(ElemFn::Cos, u.clone()) * ut.clone());
    let tx = MultiIndex::from_positions(2, &[0, 1]);
    assert_eq!(total_derivative_multi(&u, &tx), j(&b, 0, &[0, 1]));
    assert_eq!(total_derivative_multi(&s, &MultiIndex::empty(2)), s);
    // hand expansion: D_t D_t (u^2) = D_t(2 u u_t) = 2 u_t^2 + 2 u u_tt
    let expected = ut.pow(2).scale(&int(2)) + (&u * &utt).scale(&int(2));
    assert_eq!(total_derivative_multi(&u.pow(2), &MultiIndex::from_positions(2, &[0, 0])), expected);
}

#[test]
fn total_derivative_raises_order_by_one() {
    let b = plane2();
    let e = j(&b, 1, &[0, 1]) * j(&b, 0, &[]) + Expr::coord(0);
    assert_eq!(total_derivative(&e, 1).jet_order(), Some(3));
}

#[test]
fn dbar_on_functions() {
    let b = plane2();
    let f = BigradedForm::function(j(&b, 0, &[]));
    let mut expected = BigradedForm::zero(0, 1);
    expected.add_gens(j(&b, 0, &[0]), vec![Gen::Horizontal(0)]);
    expected.add_gens(j(&b, 0, &[1]), vec![Gen::Horizontal(1)]);
    assert_eq!(f.dbar(2), expected);
}

#[test]
fn dbar_on_contact_forms_follows_the_sheet() {
    let b = osc();
    // dbar(u_t w) = u_tt dt ^ w + u_t dt ^ w_t = -(u_tt w + u_t w_t) ^ dt
    let f = BigradedForm::monomial(j(&b, 0, &[0]), vec![w(&b, 0, &[])]);
    let mut expected = BigradedForm::zero(1, 1);
    expected.add_gens(-j(&b, 0, &[0, 0]), vec![w(&b, 0, &[]), Gen::Horizontal(0)]);
    expected.add_gens(-j(&b, 0, &[0]), vec![w(&b, 0, &[0]), Gen::Horizontal(0)]);
    assert_eq!(f.dbar(1), expected);
}

#[test]
fn dvert_examples() {
    let b = osc();
    let l = (j(&b, 0, &[0]).pow(2) - j(&b, 0, &[]).pow(2)).scale(&rat(1, 2));
    let mut expected = BigradedForm::zero(1, 0);
    expected.add_gens(j(&b, 0, &[0]), vec![w(&b, 0, &[0])]);
    expected.add_gens(-j(&b, 0, &[]), vec![w(&b, 0, &[])]);
    assert_eq!(BigradedForm::function(l).dvert(), expected);
    assert!(BigradedForm::function(Expr::coord(0)).dvert().is_zero());
}

#[test]
fn wedge_examples() {
    let b = plane2();
    let w0 = BigradedForm::monomial(Expr::one(), vec![w(&b, 0, &[])]);
    assert!(w0.wedge(&w0).is_zero());
    let dt = BigradedForm::monomial(Expr::one(), vec![Gen::Horizontal(0)]);
    let dx = BigradedForm::monomial(Expr::one(), vec![Gen::Horizontal(1)]);
    assert_eq!(dt.wedge(&dx), -dx.wedge(&dt));
    let f = BigradedForm::function(j(&b, 1, &[1]));
    assert_eq!(f.wedge(&w0), w0.mul_expr(&j(&b, 1, &[1])));
}

#[test]
fn contract_examples() {
    let b = osc();
    let chi = EvolField::new(vec![j(&b, 0, &[0])]);
    let f = BigradedForm::monomial(Expr::one(), vec![w(&b, 0, &[0, 0])]);
    assert_eq!(f.contract(&chi).as_function(), j(&b, 0, &[0, 0, 0]));
    assert!(BigradedForm::density(j(&b, 0, &[]), 1).contract(&chi).is_zero());
    let l = (j(&b, 0, &[0]).pow(2) - j(&b, 0, &[]).pow(2)).scale(&rat(1, 2));
    let got = BigradedForm::function(l.clone()).dvert().contract(&chi).as_function();
    assert_eq!(got, total_derivative(&l, 0));
}

#[test]
fn lie_examples() {
    let b = osc();
    let chi = EvolField::new(vec![j(&b, 0, &[0])]);
    assert_eq!(BigradedForm::function(j(&b, 0, &[])).lie(&chi).as_function(), j(&b, 0, &[0]));
    let l = (j(&b, 0, &[0]).pow(2) - j(&b, 0, &[]).pow(2)).scale(&rat(1, 2));
    assert_eq!(BigradedForm::function(l.clone()).lie(&chi).as_function(), total_derivative(&l, 0));
}

#[test]
fn source_section_embedding() {
    let b = plane2();
    let s = SourceSection::new(vec![j(&b, 0, &[0]), Expr::coord(1)]);
    let f = s.to_form(2);
    assert_eq!(f.bidegree(), (1, 2));
    assert_eq!(SourceSection::from_form(&f, &b).unwrap(), s);
    let bad = BigradedForm::monomial(Expr::one(), vec![w(&b, 0, &[1]), Gen::Horizontal(0), Gen::Horizontal(1)]);
    assert!(SourceSection::from_form(&bad, &b).is_err());
}

#[test]
fn canonical_sign_of_permutations() {
    let b = plane2();
    let (s, basis) = canonicalize(vec![Gen::Horizontal(1), w(&b, 0, &[]), Gen::Horizontal(0)]).unwrap();
    assert_eq!(s, int(1));
    assert_eq!(basis.horizontal(), &[0, 1]);
    let (s, _) = canonicalize(vec![w(&b, 1, &[]), w(&b, 0, &[])]).unwrap();
    assert_eq!(s, int(-1));
    assert!(canonicalize(vec![Gen::Horizontal(1), Gen::Horizontal(1)]).is_none());
}

fn shape() -> Shape {
    Shape {
        max_order: 2,
        max_terms: 3,
        max_degree: 2,
        coord_weight: 0.2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bicomplex_laws(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let b = plane2();
        let mut rng = random::rng(seed);
        let f = random::form(&mut rng, &b, p, q, &shape());
        prop_assert!(f.dbar(2).dbar(2).is_zero());
        prop_assert!(f.dvert().dvert().is_zero());
        prop_assert!((&f.dbar(2).dvert() + &f.dvert().dbar(2)).is_zero());
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let b = plane2();
        let mut rng = random::rng(seed);
        let e = random::expr(&mut rng, &b, &shape());
        prop_assert_eq!(total_derivative(&total_derivative(&e, 0), 1), total_derivative(&total_derivative(&e, 1), 0));
    }

    #[test]
    fn cartan_calculus(seed in any::<u64>(), p in 0usize..3, q in 0usize..3) {
        let b = plane2();
        let mut rng = random::rng(seed);
        let f = random::form(&mut rng, &b, p, q, &shape());
        let chi = random::field(&mut rng, &b, &shape());
        prop_assert!((&f.dbar(2).contract(&chi) + &f.contract(&chi).dbar(2)).is_zero());
        let cartan = &f.dvert().contract(&chi) + &f.contract(&chi).dvert();
        prop_assert_eq!(f.lie(&chi), cartan);
        prop_assert_eq!(f.dbar(2).lie(&chi), f.lie(&chi).dbar(2));
    }

    #[test]
    fn contraction_is_graded_derivation(seed in any::<u64>(), p in 1usize..3, q in 0usize..2) {
        let b = plane2();
        let mut rng = random::rng(seed);
        let f = random::form(&mut rng, &b, p, q, &shape());
        let g = random::form(&mut rng, &b, 1, 1, &shape());
        let chi = random::field(&mut rng, &b, &shape());
        let lhs = f.wedge(&g).contract(&chi);
        let sign = if (p + q) % 2 == 0 { int(1) } else { int(-1) };
        let rhs = &f.contract(&chi).wedge(&g) + &f.wedge(&g.contract(&chi)).scale(&sign);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differentials_are_graded_derivations(seed in any::<u64>(), p in 0usize..2, q in 0usize..2) {
        let b = plane2();
        let mut rng = random::rng(seed);
        let f = random::form(&mut rng, &b, p, q, &shape());
        let g = random::form(&mut rng, &b, 1, 0, &shape());
        let sign = if (p + q) % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(f.wedge(&g).dbar(2), &f.dbar(2).wedge(&g) + &f.wedge(&g.dbar(2)).scale(&sign));
        prop_assert_eq!(f.wedge(&g).dvert(), &f.dvert().wedge(&g) + &f.wedge(&g.dvert()).scale(&sign));
    }
}
