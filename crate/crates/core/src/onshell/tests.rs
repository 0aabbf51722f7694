use proptest::prelude::*;

use super::*;
use crate::jetcalc::Gen;
use crate::models;
use crate::random::{self, Shape};
use crate::symexpr::int;

fn osc_sys() -> EquationSystem {
    let m = models::load("oscillator").unwrap();
    let (_, l) = m.pick_lagrangian(None).unwrap();
    m.equations(l).unwrap()
}

fn osc_sys_bare() -> EquationSystem {
    let s = osc_sys();
    EquationSystem::new(s.bundle().clone(), s.generators().to_vec())
}

fn u(b: &BundleSpec, pos: &[usize]) -> Expr {
    Expr::jet(b.jet(0, pos))
}

#[test]
fn prolong_examples() {
    let sys = osc_sys();
    let b = sys.bundle().clone();
    let e = u(&b, &[0, 0]) + u(&b, &[]);
    let sys = EquationSystem::new(b.clone(), vec![e.clone()]);
    assert_eq!(sys.prolong(0), vec![e.clone()]);
    assert_eq!(sys.prolong(1), vec![e, u(&b, &[0, 0, 0]) + u(&b, &[0])]);

    let mx = models::load("maxwell2d").unwrap();
    let (_, l) = mx.pick_lagrangian(None).unwrap();
    assert_eq!(mx.equations(l).unwrap().prolong(1).len(), 6);
}

#[test]
fn reduce_examples() {
    let sys = osc_sys();
    let b = sys.bundle().clone();
    assert!(sys.reduce(&(u(&b, &[0, 0]) + u(&b, &[]))).unwrap().is_zero());
    assert_eq!(sys.reduce(&u(&b, &[0, 0, 0])).unwrap(), -u(&b, &[0]));
    assert_eq!(sys.reduce(&u(&b, &[0])).unwrap(), u(&b, &[0]));
    assert!(matches!(osc_sys_bare().reduce(&u(&b, &[])), Err(Error::MissingSolvedForm)));
}

#[test]
fn solved_forms_are_validated() {
    let sys = osc_sys_bare();
    let b = sys.bundle().clone();
    let bad = sys.clone().with_solved_forms(vec![(b.jet(0, &[0, 0]), u(&b, &[]))]);
    assert!(matches!(bad, Err(Error::InvalidSolvedForm(_))));
    let cyclic = sys.clone().with_solved_forms(vec![(b.jet(0, &[0]), u(&b, &[0, 0]))]);
    assert!(matches!(cyclic, Err(Error::InvalidSolvedForm(_))));
    let ok = sys.with_solved_forms(vec![(b.jet(0, &[0, 0]), -u(&b, &[]))]).unwrap();
    // the generator is -(u_tt + u)
    assert_eq!(ok.solved_forms().unwrap()[0].rho, int(-1));
}

#[test]
fn membership_examples() {
    for sys in [osc_sys(), osc_sys_bare()] {
        let b = sys.bundle().clone();
        let g = sys.generators()[0].clone();
        let e = u(&b, &[0]) * g.clone();
        match sys.is_zero_on_shell(&e, Some(0)).unwrap() {
            Membership::Member(cert) => {
                assert!(cert.verifies(&sys, &e));
                assert_eq!(cert.evaluate(&sys), e);
            }
            other => panic!("{other:?}"),
        }
        assert!(!sys.is_zero_on_shell(&u(&b, &[]), Some(2)).unwrap().holds());
        assert!(sys.is_zero_on_shell(&Expr::zero(), None).unwrap().holds());
    }
}

#[test]
fn ansatz_finds_prolonged_members() {
    let sys = osc_sys_bare();
    let b = sys.bundle().clone();
    // u_tttt - u = D_tt E - E with E = -(u_tt + u)
    let e = u(&b, &[0, 0, 0, 0]) - u(&b, &[]);
    let m = sys.membership_by_ansatz(&e, None).unwrap();
    assert!(m.holds(), "{m:?}");
    assert_eq!(sys.default_bound(e.jet_order()), 3);
}

#[test]
fn refutation() {
    let sys = osc_sys();
    let b = sys.bundle().clone();
    assert!(sys.refutes(&u(&b, &[0])).unwrap());
    assert!(!sys.refutes(&(u(&b, &[0, 0]) + u(&b, &[]))).unwrap());
    assert!(osc_sys_bare().refutes(&Expr::int(2)).unwrap());
    assert!(!osc_sys_bare().refutes(&u(&b, &[])).unwrap());
}

#[test]
fn exactness_examples() {
    let sys = osc_sys();
    let b = sys.bundle().clone();
    let omega0 = Gen::Contact(b.jet(0, &[]));
    let ideal = BigradedForm::monomial(sys.generators()[0].clone(), vec![omega0, Gen::Horizontal(0)]);
    for s in [sys.clone(), osc_sys_bare()] {
        match is_dbar_exact_on_shell(&ideal, &s, None).unwrap() {
            Exactness::Exact(w) => assert_eq!(&w.lambda.dbar(1) + &w.ideal_part, ideal),
            other => panic!("{other:?}"),
        }
    }
    let shape = Shape { max_order: 2, max_terms: 2, max_degree: 2, coord_weight: 0.3 };
    let mut rng = random::rng(3);
    for _ in 0..5 {
        let lambda = random::form(&mut rng, &b, 1, 0, &shape);
        let f = lambda.dbar(1);
        let w = is_dbar_exact(&b, &f).unwrap();
        match w {
            Exactness::Exact(w) => {
                assert!(w.ideal_part.is_zero());
                assert_eq!(w.lambda.dbar(1), f);
            }
            other => panic!("{other:?}"),
        }
    }
    let not_exact = BigradedForm::density(u(&b, &[]), 1);
    assert!(!is_dbar_exact(&b, &not_exact).unwrap().holds());
}

#[test]
fn maxwell_ideal_members_without_solved_forms() {
    let mx = models::load("maxwell2d").unwrap();
    let (_, l) = mx.pick_lagrangian(None).unwrap();
    let sys = mx.equations(l).unwrap();
    assert!(!sys.has_solved_forms());
    let g = sys.generators().to_vec();
    let b = sys.bundle().clone();
    let e = Expr::coord(1) * crate::jetcalc::total_derivative(&g[0], 0) + Expr::jet(b.jet(1, &[])) * g[1].clone();
    assert!(sys.is_zero_on_shell(&e, None).unwrap().holds());
}

fn member(rng: &mut random::SeededRng, sys: &EquationSystem) -> Expr {
    let b = sys.bundle();
    let shape = Shape { max_order: 1, max_terms: 2, max_degree: 1, coord_weight: 0.3 };
    let mut e = Expr::zero();
    for p in sys.prolong(1) {
        e += random::expr(rng, b, &shape) * p;
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reduce_is_idempotent(seed in any::<u64>()) {
        let sys = osc_sys();
        let mut rng = random::rng(seed);
        let e = random::expr(&mut rng, sys.bundle(), &Shape { max_order: 4, ..Shape::default() });
        let r = sys.reduce(&e).unwrap();
        prop_assert_eq!(sys.reduce(&r).unwrap(), r.clone());
        prop_assert!(r.jet_vars().iter().all(|v| !sys.is_reducible(v)));
    }

    #[test]
    fn reduce_is_a_ring_homomorphism(seed in any::<u64>()) {
        let sys = osc_sys();
        let mut rng = random::rng(seed);
        let shape = Shape { max_order: 3, ..Shape::default() };
        let a = random::expr(&mut rng, sys.bundle(), &shape);
        let c = random::expr(&mut rng, sys.bundle(), &shape);
        let lhs = sys.reduce(&(&a * &c)).unwrap();
        let rhs = sys.reduce(&(sys.reduce(&a).unwrap() * sys.reduce(&c).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_certificate_verifies(seed in any::<u64>()) {
        let sys = osc_sys();
        let mut rng = random::rng(seed);
        let e = random::expr(&mut rng, sys.bundle(), &Shape { max_order: 4, ..Shape::default() });
        let (r, cert) = sys.reduce_with_certificate(&e).unwrap();
        prop_assert_eq!(&r + &cert.evaluate(&sys), e);
    }

    #[test]
    fn decision_paths_agree(seed in any::<u64>()) {
        let sys = osc_sys();
        let bare = osc_sys_bare();
        let mut rng = random::rng(seed);
        let e = member(&mut rng, &sys);
        let fast = sys.is_zero_on_shell(&e, None).unwrap();
        let slow = bare.is_zero_on_shell(&e, None).unwrap();
        prop_assert!(fast.holds());
        prop_assert!(slow.holds());
        let off = &e + &Expr::jet(sys.bundle().jet(0, &[0]));
        prop_assert_eq!(sys.is_zero_on_shell(&off, None).unwrap().holds(), sys.reduce(&off).unwrap().is_zero());
    }
}
