//! Noether symmetries and currents, the symplectic form of the first Noether
//! theorem, gauge operators, Noether identities, kernel directions of the
//! presymplectic current and the bracket of charges.

use crate::convention::NOETHER_SIGN;
use crate::error::{Error, Result};
use crate::jetcalc::{BigradedForm, EvolField, SourceSection};
use crate::linop::{linearize, LinDiffOp};
use crate::onshell::{
    is_dbar_exact_on_shell, Certificate, EquationSystem, Exactness, Membership,
};
use crate::symexpr::{BundleSpec, Expr, MultiIndex};
use crate::varcalc::{
    euler_lagrange, legendre_form, presymplectic_current, split_divergence, Lagrangian,
};

/// Result of testing whether `chi` is a Noether symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetryCheck {
    /// `i_chi dvert L = dbar sigma`.
    Symmetry(BigradedForm),
    /// Euler-Lagrange derivatives of `E_chi(L)`, not all zero.
    NotSymmetry(SourceSection),
}

pub fn check_noether_symmetry(
    bundle: &BundleSpec,
    chi: &EvolField,
    l: &Lagrangian,
) -> Result<SymmetryCheck> {
    let n = bundle.dim();
    let t = l.form(n).dvert().contract(chi);
    let el = euler_lagrange(bundle, &Lagrangian::new(t.top_coefficient(n)));
    if !el.is_zero() {
        return Ok(SymmetryCheck::NotSymmetry(el));
    }
    Ok(SymmetryCheck::Symmetry(split_divergence(bundle, &t)?))
}

/// A Noether symmetry with its current `j = sigma + i_chi theta` and a
/// verified certificate for `dbar j = 0` on shell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherCharge {
    symmetry: EvolField,
    sigma: BigradedForm,
    current: BigradedForm,
    conservation: Certificate,
}

impl NoetherCharge {
    pub fn symmetry(&self) -> &EvolField {
        &self.symmetry
    }

    pub fn sigma(&self) -> &BigradedForm {
        &self.sigma
    }

    pub fn current(&self) -> &BigradedForm {
        &self.current
    }

    /// Multipliers with `dbar j = sum C^{aJ} D_J E_a d^n x`.
    pub fn conservation(&self) -> &Certificate {
        &self.conservation
    }
}

pub fn noether_current(bundle: &BundleSpec, chi: &EvolField, l: &Lagrangian) -> Result<NoetherCharge> {
    let n = bundle.dim();
    let sigma = match check_noether_symmetry(bundle, chi, l)? {
        SymmetryCheck::Symmetry(s) => s,
        SymmetryCheck::NotSymmetry(_) => {
            return Err(Error::NotSymmetry(
                "the Euler-Lagrange derivatives of E_chi(L) do not vanish".into(),
            ))
        }
    };
    let theta = legendre_form(bundle, l);
    let current = &sigma + &theta.form().contract(chi);
    let el = euler_lagrange(bundle, l);
    let sys = EquationSystem::new(bundle.clone(), el.components().to_vec());
    // dbar j = chi^alpha E_alpha d^n x
    let mut conservation = Certificate::new();
    for (a, c) in chi.components().iter().enumerate() {
        conservation.add(a, MultiIndex::empty(n), c.clone());
    }
    let div = current.dbar(n).top_coefficient(n);
    if !conservation.verifies(&sys, &div) {
        conservation = match sys.is_zero_on_shell(&div, None)? {
            Membership::Member(c) => c,
            Membership::Inconclusive(why) => return Err(Error::Inconclusive(why)),
        };
    }
    Ok(NoetherCharge {
        symmetry: chi.clone(),
        sigma,
        current,
        conservation,
    })
}

/// `dvert j + s i_chi omega` with the frozen sign `s`.
pub fn first_noether_form(bundle: &BundleSpec, charge: &NoetherCharge, l: &Lagrangian) -> BigradedForm {
    let omega = presymplectic_current(bundle, l);
    let contracted = omega.form().contract(&charge.symmetry);
    &charge.current.dvert() + &contracted.scale(&crate::symexpr::int(NOETHER_SIGN))
}

/// Checks that `dvert j + s i_chi omega` is `dbar`-exact on shell.
pub fn check_first_noether_symplectic(
    bundle: &BundleSpec,
    charge: &NoetherCharge,
    l: &Lagrangian,
    sys: &EquationSystem,
    bound: Option<u32>,
) -> Result<Exactness> {
    is_dbar_exact_on_shell(&first_noether_form(bundle, charge, l), sys, bound)
}

/// A linear operator `G` from `r` parameter fields to the `m` fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeOperator {
    pub params: Vec<String>,
    pub op: LinDiffOp,
}

impl GaugeOperator {
    pub fn new(bundle: &BundleSpec, params: Vec<String>, op: LinDiffOp) -> Result<Self> {
        if op.rows() != bundle.fields() || op.cols() != params.len() {
            return Err(Error::ArityMismatch {
                expected: bundle.fields(),
                found: op.rows(),
            });
        }
        Ok(Self { params, op })
    }

    /// The bundle with the parameters appended as extra fields, and the
    /// generic direction `G(eps)` on it.
    pub fn generic_direction(&self, bundle: &BundleSpec) -> Result<(BundleSpec, EvolField)> {
        let ext = bundle.extended(&self.params)?;
        let m = bundle.fields();
        let eps: Vec<Expr> = (0..self.params.len())
            .map(|k| Expr::jet(ext.field(m + k)))
            .collect();
        let mut chi = self.op.apply(&eps)?;
        chi.extend(std::iter::repeat(Expr::zero()).take(self.params.len()));
        Ok((ext, EvolField::new(chi)))
    }
}

/// Whether `G(eps)` is a Noether symmetry identically in `eps`.
pub fn check_noether_gauge_symmetry(
    bundle: &BundleSpec,
    g: &GaugeOperator,
    l: &Lagrangian,
) -> Result<SymmetryCheck> {
    let (ext, chi) = g.generic_direction(bundle)?;
    check_noether_symmetry(&ext, &chi, l)
}

/// `G^dagger(E(L))`, which vanishes identically for a Noether gauge symmetry.
pub fn noether_identity(bundle: &BundleSpec, g: &GaugeOperator, l: &Lagrangian) -> Result<Vec<Expr>> {
    g.op.adjoint().apply(euler_lagrange(bundle, l).components())
}

/// Three-valued verdict for checks that may be refuted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl Verdict {
    pub fn passes(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    fn combine(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail(a), _) | (_, Verdict::Fail(a)) => Verdict::Fail(a),
            (Verdict::Inconclusive(a), _) | (_, Verdict::Inconclusive(a)) => Verdict::Inconclusive(a),
            _ => Verdict::Pass,
        }
    }
}

/// Both compositions of the infinitesimal gauge check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinitesimalGauge {
    /// `l_E o G`.
    pub linearized: LinDiffOp,
    /// `G^dagger o l_E`.
    pub adjoint: LinDiffOp,
    pub verdict: Verdict,
}

fn operator_vanishes_on_shell(op: &LinDiffOp, sys: &EquationSystem, bound: Option<u32>) -> Result<Verdict> {
    let mut verdict = Verdict::Pass;
    for (r, c, i, coeff) in op.coefficients() {
        let v = match sys.is_zero_on_shell(coeff, bound)? {
            Membership::Member(_) => Verdict::Pass,
            Membership::Inconclusive(why) => {
                if sys.refutes(coeff)? {
                    Verdict::Fail(format!(
                        "entry ({r}, {c}): coefficient of {} is nonzero on shell",
                        crate::dsl::print::d_marker(sys.bundle(), i)
                    ))
                } else {
                    Verdict::Inconclusive(why)
                }
            }
        };
        verdict = verdict.combine(v);
    }
    Ok(verdict)
}

/// `l_E o G = 0` and `G^dagger o l_E = 0` on shell.
pub fn check_infinitesimal_gauge(
    bundle: &BundleSpec,
    g: &GaugeOperator,
    l: &Lagrangian,
    sys: &EquationSystem,
    bound: Option<u32>,
) -> Result<InfinitesimalGauge> {
    let el = euler_lagrange(bundle, l);
    let lin = linearize(bundle, el.components());
    let linearized = lin.compose(&g.op)?;
    let adjoint = g.op.adjoint().compose(&lin)?;
    let verdict = operator_vanishes_on_shell(&linearized, sys, bound)?
        .combine(operator_vanishes_on_shell(&adjoint, sys, bound)?);
    Ok(InfinitesimalGauge {
        linearized,
        adjoint,
        verdict,
    })
}

/// Whether `i_chi omega` is `dbar`-exact on shell, i.e. `chi` lies in the
/// kernel of the presymplectic form.
pub fn verify_kernel_direction(
    bundle: &BundleSpec,
    chi: &EvolField,
    l: &Lagrangian,
    sys: &EquationSystem,
    bound: Option<u32>,
) -> Result<Exactness> {
    let f = presymplectic_current(bundle, l).form().contract(chi);
    is_dbar_exact_on_shell(&f, sys, bound)
}

/// `{f1, f2} = -i_chi1 i_chi2 omega`.
pub fn bracket(bundle: &BundleSpec, c1: &NoetherCharge, c2: &NoetherCharge, l: &Lagrangian) -> BigradedForm {
    let omega = presymplectic_current(bundle, l);
    -omega.form().contract(&c2.symmetry).contract(&c1.symmetry)
}

#[cfg(test)]
mod tests;
