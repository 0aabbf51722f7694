use proptest::prelude::*;

use super::*;
use crate::jetcalc::{total_derivative, Gen};
use crate::onshell::is_dbar_exact;
use crate::random::{self, Shape};
use crate::symexpr::{int, rat, MultiIndex};

fn osc() -> BundleSpec {
    BundleSpec::new(&["t"], &["u"], &[] as &[&str]).unwrap()
}

fn kg() -> BundleSpec {
    BundleSpec::new(&["t", "x"], &["u"], &["m"]).unwrap()
}

fn maxwell() -> BundleSpec {
    BundleSpec::new(&["t", "x"], &["A0", "A1"], &[] as &[&str]).unwrap()
}

fn j(b: &BundleSpec, a: usize, pos: &[usize]) -> Expr {
    Expr::jet(b.jet(a, pos))
}

fn osc_l(b: &BundleSpec) -> Lagrangian {
    Lagrangian::new((j(b, 0, &[0]).pow(2) - j(b, 0, &[]).pow(2)).scale(&rat(1, 2)))
}

fn kg_l(b: &BundleSpec) -> Lagrangian {
    let m2 = Expr::constant_symbol(0).pow(2);
    Lagrangian::new(
        (j(b, 0, &[0]).pow(2) - j(b, 0, &[1]).pow(2) - m2 * j(b, 0, &[]).pow(2)).scale(&rat(1, 2)),
    )
}

fn maxwell_f(b: &BundleSpec) -> Expr {
    j(b, 1, &[0]) - j(b, 0, &[1])
}

fn maxwell_l(b: &BundleSpec) -> Lagrangian {
    Lagrangian::new(maxwell_f(b).pow(2).scale(&rat(1, 2)))
}

#[test]
fn euler_lagrange_examples() {
    let b = osc();
    let el = euler_lagrange(&b, &osc_l(&b));
    assert_eq!(el.components(), &[-j(&b, 0, &[0, 0]) - j(&b, 0, &[])]);
    let b = kg();
    let m2 = Expr::constant_symbol(0).pow(2);
    let el = euler_lagrange(&b, &kg_l(&b));
    assert_eq!(el.components(), &[-j(&b, 0, &[0, 0]) + j(&b, 0, &[1, 1]) - m2 * j(&b, 0, &[])]);
}

#[test]
fn maxwell_equations() {
    let b = maxwell();
    let f = maxwell_f(&b);
    let el = euler_lagrange(&b, &maxwell_l(&b));
    assert_eq!(el.component(0), &total_derivative(&f, 1));
    assert_eq!(el.component(1), &-total_derivative(&f, 0));
}

#[test]
fn split_divergence_examples() {
    let b = osc();
    let t = BigradedForm::density(j(&b, 0, &[0]) * j(&b, 0, &[0, 0]), 1);
    let sigma = split_divergence(&b, &t).unwrap();
    assert_eq!(sigma.as_function(), j(&b, 0, &[0]).pow(2).scale(&rat(1, 2)));
    assert!(split_divergence(&b, &BigradedForm::zero(0, 1)).unwrap().is_zero());

    let b = kg();
    let f = j(&b, 0, &[0]) * j(&b, 0, &[1, 1]) + j(&b, 0, &[0, 1]) * j(&b, 0, &[1]);
    let t = BigradedForm::density(f, 2);
    let sigma = split_divergence(&b, &t).unwrap();
    assert_eq!(sigma.dbar(2), t);
}

#[test]
fn split_divergence_of_base_functions() {
    let b = kg();
    let t = BigradedForm::density(Expr::coord(0) * Expr::coord(1) + Expr::constant_symbol(0), 2);
    assert_eq!(split_divergence(&b, &t).unwrap().dbar(2), t);
}

#[test]
fn split_divergence_rejects_non_divergences() {
    let b = osc();
    let t = BigradedForm::density(j(&b, 0, &[]).pow(2), 1);
    assert_eq!(split_divergence(&b, &t), Err(Error::NotExact));
}

#[test]
fn split_divergence_handles_cyclic_integration() {
    // 2 u_t u_tx = D_x(u_t^2): naive integration in t alone would cycle.
    let b = kg();
    let t = BigradedForm::density(j(&b, 0, &[0]) * j(&b, 0, &[0, 1]).scale(&int(2)), 2);
    assert_eq!(split_divergence(&b, &t).unwrap().dbar(2), t);
}

#[test]
fn legendre_examples() {
    let b = osc();
    let theta = legendre_form(&b, &osc_l(&b));
    let expected = BigradedForm::monomial(-j(&b, 0, &[0]), vec![Gen::Contact(b.field(0))]);
    assert_eq!(theta.form(), &expected);

    let order0 = Lagrangian::new(j(&b, 0, &[]).pow(3) + Expr::coord(0));
    assert!(legendre_form(&b, &order0).form().is_zero());
}

#[test]
fn maxwell_legendre_form() {
    let b = maxwell();
    let f = maxwell_f(&b);
    let theta = legendre_form(&b, &maxwell_l(&b));
    // i_t d^2x = dx, i_x d^2x = -dt
    let mut expected = BigradedForm::zero(1, 1);
    expected.add_gens(-f.clone(), vec![Gen::Contact(b.field(1)), Gen::Horizontal(1)]);
    expected.add_gens(-f, vec![Gen::Contact(b.field(0)), Gen::Horizontal(0)]);
    assert_eq!(theta.form(), &expected);
}

#[test]
fn legendre_constructor_checks_identity() {
    let b = osc();
    let wrong = BigradedForm::monomial(j(&b, 0, &[0]), vec![Gen::Contact(b.field(0))]);
    assert!(LegendreForm::new(&b, &osc_l(&b), wrong).is_err());
}

#[test]
fn presymplectic_examples() {
    let b = osc();
    let omega = presymplectic_current(&b, &osc_l(&b));
    let expected = BigradedForm::monomial(
        Expr::one(),
        vec![Gen::Contact(b.jet(0, &[0])), Gen::Contact(b.field(0))],
    );
    assert_eq!(omega.form(), &expected);
    assert!(omega.closes_off_shell(&b, &osc_l(&b)));
    let order0 = Lagrangian::new(j(&b, 0, &[]).pow(2));
    assert!(presymplectic_current(&b, &order0).form().is_zero());
}

#[test]
fn null_lagrangian_has_exact_current() {
    let b = kg();
    let f = j(&b, 0, &[]).pow(2) * j(&b, 0, &[1]) + Expr::coord(0) * j(&b, 0, &[0]);
    let l = Lagrangian::new(total_derivative(&f, 0));
    assert!(euler_lagrange(&b, &l).is_zero());
    let omega = presymplectic_current(&b, &l);
    assert!(is_dbar_exact(&b, omega.form()).unwrap().holds());
}

#[test]
fn currents_for_standard_models_close() {
    for (b, l) in [(kg(), kg_l(&kg())), (maxwell(), maxwell_l(&maxwell()))] {
        assert!(presymplectic_current(&b, &l).closes_off_shell(&b, &l));
    }
}

#[test]
fn helmholtz_examples() {
    let b = kg();
    let flow = SourceSection::new(vec![j(&b, 0, &[0])]);
    let h = helmholtz_selfadjoint(&b, &flow);
    assert!(!h.self_adjoint);
    assert_eq!(h.difference.coefficient(0, 0, &MultiIndex::unit(2, 0)), Expr::int(2));
    let wave = SourceSection::new(vec![j(&b, 0, &[1, 1])]);
    assert!(helmholtz_selfadjoint(&b, &wave).self_adjoint);
    assert!(helmholtz_selfadjoint(&b, &euler_lagrange(&b, &kg_l(&b))).self_adjoint);
    let m = maxwell();
    assert!(helmholtz_selfadjoint(&m, &euler_lagrange(&m, &maxwell_l(&m))).self_adjoint);
}

fn shape() -> Shape {
    Shape {
        max_order: 2,
        max_terms: 3,
        max_degree: 3,
        coord_weight: 0.2,
    }
}

fn two_fields() -> BundleSpec {
    BundleSpec::new(&["t", "x"], &["u", "v"], &[] as &[&str]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn euler_lagrange_kills_divergences(seed in any::<u64>(), i in 0usize..2) {
        let b = two_fields();
        let mut rng = random::rng(seed);
        let f = random::expr(&mut rng, &b, &shape());
        let l = Lagrangian::new(total_derivative(&f, i));
        prop_assert!(euler_lagrange(&b, &l).is_zero());
    }

    #[test]
    fn legendre_identity_and_closure(seed in any::<u64>()) {
        let b = two_fields();
        let mut rng = random::rng(seed);
        let l = Lagrangian::new(random::expr(&mut rng, &b, &shape()));
        let theta = legendre_form(&b, &l);
        let omega = PresymplecticCurrent::from_legendre(&theta);
        prop_assert!(omega.closes_off_shell(&b, &l));
    }

    #[test]
    fn split_divergence_inverts_dbar(seed in any::<u64>()) {
        let b = two_fields();
        let mut rng = random::rng(seed);
        let s = random::form(&mut rng, &b, 0, 1, &shape());
        let t = s.dbar(2);
        let sigma = split_divergence(&b, &t).unwrap();
        prop_assert_eq!(sigma.dbar(2), t);
    }

    #[test]
    fn helmholtz_holds_for_euler_lagrange(seed in any::<u64>()) {
        let b = two_fields();
        let mut rng = random::rng(seed);
        let l = Lagrangian::new(random::expr(&mut rng, &b, &shape()));
        prop_assert!(helmholtz_selfadjoint(&b, &euler_lagrange(&b, &l)).self_adjoint);
    }
}
