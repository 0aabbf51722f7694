use super::*;
use crate::models;
use crate::symexpr::rat;

struct Loaded {
    bundle: BundleSpec,
    l: Lagrangian,
    sys: EquationSystem,
    model: crate::dsl::Model,
}

fn load(name: &str) -> Loaded {
    let model = models::load(name).unwrap();
    let (_, l) = model.pick_lagrangian(None).unwrap();
    let l = l.clone();
    Loaded {
        bundle: model.bundle.clone(),
        sys: model.equations(&l).unwrap(),
        l,
        model,
    }
}

fn u(b: &BundleSpec, a: usize, pos: &[usize]) -> Expr {
    Expr::jet(b.jet(a, pos))
}

fn charge(m: &Loaded, sym: &str) -> NoetherCharge {
    noether_current(&m.bundle, m.model.symmetry(sym).unwrap(), &m.l).unwrap()
}

#[test]
fn oscillator_symmetries() {
    let m = load("oscillator");
    let b = &m.bundle;
    match check_noether_symmetry(b, m.model.symmetry("timeshift").unwrap(), &m.l).unwrap() {
        SymmetryCheck::Symmetry(s) => assert_eq!(s.as_function(), m.l.density().clone()),
        other => panic!("{other:?}"),
    }
    match check_noether_symmetry(b, m.model.symmetry("scaling").unwrap(), &m.l).unwrap() {
        SymmetryCheck::NotSymmetry(w) => assert!(!w.is_zero()),
        other => panic!("{other:?}"),
    }
    let zero = EvolField::zero(1);
    match check_noether_symmetry(b, &zero, &m.l).unwrap() {
        SymmetryCheck::Symmetry(s) => assert!(s.is_zero()),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        noether_current(b, m.model.symmetry("scaling").unwrap(), &m.l),
        Err(Error::NotSymmetry(_))
    ));
}

#[test]
fn oscillator_energy_current() {
    let m = load("oscillator");
    let b = &m.bundle;
    let c = charge(&m, "timeshift");
    let energy = (u(b, 0, &[0]).pow(2) + u(b, 0, &[]).pow(2)).scale(&rat(1, 2));
    assert_eq!(c.current().as_function(), -energy);
    let terms: Vec<_> = c.conservation().terms().collect();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0].2, &u(b, 0, &[0]));
    let div = c.current().dbar(1).top_coefficient(1);
    assert!(c.conservation().verifies(&m.sys, &div));

    let zero = noether_current(b, &EvolField::zero(1), &m.l).unwrap();
    assert!(zero.current().is_zero());
}

#[test]
fn klein_gordon_charges() {
    let m = load("klein_gordon");
    let n = m.bundle.dim();
    for sym in ["timeshift", "spaceshift"] {
        let c = charge(&m, sym);
        let div = c.current().dbar(n).top_coefficient(n);
        assert!(c.conservation().verifies(&m.sys, &div), "{sym}");
        assert!(!c.current().is_zero());
    }
}

#[test]
fn first_noether_theorem_with_one_sign() {
    let cases = [
        ("oscillator", vec!["timeshift"]),
        ("klein_gordon", vec!["timeshift", "spaceshift"]),
        ("maxwell2d", vec!["timeshift"]),
        ("particle2", vec!["timeshift", "rotation", "translation"]),
    ];
    for (name, syms) in cases {
        let m = load(name);
        for sym in syms {
            let c = charge(&m, sym);
            let v = check_first_noether_symplectic(&m.bundle, &c, &m.l, &m.sys, None).unwrap();
            assert!(v.holds(), "{name}/{sym}: {v:?}");
        }
    }
}

#[test]
fn opposite_sign_fails_on_the_oscillator() {
    let m = load("oscillator");
    let c = charge(&m, "timeshift");
    let omega = presymplectic_current(&m.bundle, &m.l);
    let flipped = &c.current().dvert() - &omega.form().contract(c.symmetry()).scale(&crate::symexpr::int(NOETHER_SIGN));
    let v = is_dbar_exact_on_shell(&flipped, &m.sys, None).unwrap();
    assert!(!v.holds());
}

fn maxwell_gauge(m: &Loaded) -> GaugeOperator {
    let decl = m.model.operator("grad").unwrap();
    GaugeOperator::new(&m.bundle, decl.params.clone(), decl.op.clone()).unwrap()
}

#[test]
fn maxwell_gauge_sector() {
    let m = load("maxwell2d");
    let g = maxwell_gauge(&m);
    assert!(matches!(
        check_noether_gauge_symmetry(&m.bundle, &g, &m.l).unwrap(),
        SymmetryCheck::Symmetry(_)
    ));
    assert!(noether_identity(&m.bundle, &g, &m.l).unwrap().iter().all(Expr::is_zero));
    let inf = check_infinitesimal_gauge(&m.bundle, &g, &m.l, &m.sys, None).unwrap();
    assert_eq!(inf.verdict, Verdict::Pass);
    assert!(inf.linearized.is_zero() && inf.adjoint.is_zero());

    let eps = Expr::coord(0) * Expr::coord(1);
    let chi = EvolField::new(g.op.apply(&[eps]).unwrap());
    let v = verify_kernel_direction(&m.bundle, &chi, &m.l, &m.sys, None).unwrap();
    assert!(v.holds(), "{v:?}");
    let v = verify_kernel_direction(&m.bundle, &EvolField::zero(2), &m.l, &m.sys, None).unwrap();
    assert!(v.holds());
}

#[test]
fn gauge_checks_fail_on_the_oscillator() {
    let m = load("oscillator");
    let id = m.model.operator("id").unwrap();
    let g = GaugeOperator::new(&m.bundle, id.params.clone(), id.op.clone()).unwrap();
    assert!(matches!(
        check_noether_gauge_symmetry(&m.bundle, &g, &m.l).unwrap(),
        SymmetryCheck::NotSymmetry(_)
    ));
    let ident = noether_identity(&m.bundle, &g, &m.l).unwrap();
    assert_eq!(ident, vec![-u(&m.bundle, 0, &[0, 0]) - u(&m.bundle, 0, &[])]);

    let dt = m.model.operator("dt").unwrap();
    let g = GaugeOperator::new(&m.bundle, dt.params.clone(), dt.op.clone()).unwrap();
    let inf = check_infinitesimal_gauge(&m.bundle, &g, &m.l, &m.sys, None).unwrap();
    assert!(matches!(inf.verdict, Verdict::Fail(_)), "{:?}", inf.verdict);

    let zero = GaugeOperator::new(&m.bundle, vec!["e".into()], LinDiffOp::zero(1, 1, 1)).unwrap();
    assert!(matches!(
        check_noether_gauge_symmetry(&m.bundle, &zero, &m.l).unwrap(),
        SymmetryCheck::Symmetry(_)
    ));
    assert!(noether_identity(&m.bundle, &zero, &m.l).unwrap().iter().all(Expr::is_zero));
    let inf = check_infinitesimal_gauge(&m.bundle, &zero, &m.l, &m.sys, None).unwrap();
    assert_eq!(inf.verdict, Verdict::Pass);
}

#[test]
fn energy_is_not_a_kernel_direction() {
    let m = load("oscillator");
    let chi = m.model.symmetry("timeshift").unwrap();
    let v = verify_kernel_direction(&m.bundle, chi, &m.l, &m.sys, None).unwrap();
    assert!(!v.holds());
}

#[test]
fn brackets() {
    let m = load("klein_gordon");
    let n = m.bundle.dim();
    let charges: Vec<_> = ["timeshift", "spaceshift", "boost"]
        .iter()
        .filter_map(|s| noether_current(&m.bundle, m.model.symmetry(s).unwrap(), &m.l).ok())
        .collect();
    assert!(charges.len() >= 2);
    for a in &charges {
        assert!(bracket(&m.bundle, a, a, &m.l).is_zero());
        for c in &charges {
            let sum = &bracket(&m.bundle, a, c, &m.l) + &bracket(&m.bundle, c, a, &m.l);
            assert!(sum.is_zero());
        }
    }
    let em = bracket(&m.bundle, &charges[0], &charges[1], &m.l);
    assert_eq!(em.bidegree(), (0, n - 1));
    let div = em.dbar(n).top_coefficient(n);
    let sys = EquationSystem::new(m.bundle.clone(), m.sys.generators().to_vec());
    match sys.is_zero_on_shell(&div, None).unwrap() {
        Membership::Member(cert) => assert!(cert.verifies(&sys, &div)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn symmetry_dependence_only_on_shell_values() {
    // lie(chi, phi) and linearize(phi)(chi) agree on shell for ideal members phi
    let m = load("oscillator");
    let b = &m.bundle;
    let e = m.sys.generators()[0].clone();
    let phi = u(b, 0, &[0]) * e.clone() + Expr::coord(0) * crate::jetcalc::total_derivative(&e, 0);
    let chi = EvolField::new(vec![u(b, 0, &[0, 0]) * u(b, 0, &[])]);
    let reduced_chi = EvolField::new(vec![m.sys.reduce(&chi.components()[0]).unwrap()]);
    let lhs = m.sys.reduce(&chi.apply(&phi)).unwrap();
    let rhs = m.sys.reduce(&linearize(b, &[phi]).apply(reduced_chi.components()).unwrap()[0]).unwrap();
    assert_eq!(lhs, rhs);
}
