use std::fmt;
use std::time::Instant;

use vps_core::convention::NOETHER_SIGN;
use vps_core::dsl::{parse_expr, parse_model, print_expr, print_form, print_operator, Model};
use vps_core::jetcalc::EvolField;
use vps_core::linop::{linearize, LinDiffOp};
use vps_core::noether::{
    bracket, check_first_noether_symplectic, check_infinitesimal_gauge,
    check_noether_gauge_symmetry, check_noether_symmetry, noether_current, noether_identity,
    verify_kernel_direction, GaugeOperator, SymmetryCheck, Verdict,
};
use vps_core::onshell::{Certificate, EquationSystem, Exactness, Membership};
use vps_core::selftest::{self, DEFAULT_SEED};
use vps_core::symexpr::{BundleSpec, Expr};
use vps_core::varcalc::{euler_lagrange, helmholtz_selfadjoint, legendre_form, presymplectic_current, Lagrangian};
use vps_core::Error;

use crate::report::{Item, Report, Status};
use crate::{Cli, Command, LagrangianArg, EXIT_USAGE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::NotFound { .. }
                | Error::UnknownVariable(_)
                | Error::ArityMismatch { .. }
                | Error::InvalidBundle(_)
                | Error::InvalidSolvedForm(_)
                | Error::MissingSolvedForm => EXIT_USAGE,
                Error::Inconclusive(_) | Error::Unsupported(_) => 2,
                _ => 1,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type Res<T> = std::result::Result<T, CliError>;

struct Ctx {
    model: Model,
    label: String,
    bound: Option<u32>,
}

impl Ctx {
    fn load(cli: &Cli) -> Res<Self> {
        let path = cli
            .model
            .as_ref()
            .ok_or_else(|| CliError::Usage("this command needs a model file (-m FILE)".into()))?;
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let model = parse_model(&src)
            .map_err(|d| CliError::Usage(format!("{}:{d}", path.display())))?;
        Ok(Self {
            label: model.name.clone(),
            model,
            bound: cli.order_bound,
        })
    }

    fn bundle(&self) -> &BundleSpec {
        &self.model.bundle
    }

    fn lagrangian(&self, arg: &LagrangianArg) -> Res<Lagrangian> {
        Ok(self.model.pick_lagrangian(arg.lagrangian.as_deref())?.1.clone())
    }

    fn system(&self, l: &Lagrangian) -> Res<EquationSystem> {
        Ok(self.model.equations(l)?)
    }

    fn gauge(&self, name: &str) -> Res<GaugeOperator> {
        let decl = self.model.operator(name)?;
        Ok(GaugeOperator::new(self.bundle(), decl.params.clone(), decl.op.clone())?)
    }

    fn expr(&self, e: &Expr) -> String {
        print_expr(self.bundle(), e)
    }

    fn certificate(&self, cert: &Certificate) -> Vec<String> {
        certificate_terms(self.bundle(), cert)
    }
}

/// `(C)*D[J](E[u])` for each multiplier.
fn certificate_terms(bundle: &BundleSpec, cert: &Certificate) -> Vec<String> {
    cert.terms()
        .map(|(a, j, c)| {
            let field = &bundle.dependent()[a];
            let e = if j.is_empty() {
                format!("E[{field}]")
            } else {
                let names: Vec<&str> = j.positions().iter().map(|&i| bundle.independent()[i].as_str()).collect();
                format!("D[{}](E[{field}])", names.join(","))
            };
            format!("({})*{e}", print_expr(bundle, c))
        })
        .collect()
}

fn exactness_item(name: String, e: Exactness, bundle: &BundleSpec) -> Item {
    match e {
        Exactness::Exact(w) => Item::check(name, Status::Pass).with_witness(print_form(bundle, &w.lambda)),
        Exactness::Inconclusive(why) => Item::check(format!("{name} ({why})"), Status::Inconclusive),
    }
}

fn verdict_item(name: &str, v: &Verdict) -> Item {
    match v {
        Verdict::Pass => Item::check(name, Status::Pass),
        Verdict::Fail(why) => Item::check(format!("{name} ({why})"), Status::Fail),
        Verdict::Inconclusive(why) => Item::check(format!("{name} ({why})"), Status::Inconclusive),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::El(_) => "el",
        Command::Linearize(_) => "linearize",
        Command::Adjoint { .. } => "adjoint",
        Command::Legendre(_) => "legendre",
        Command::Omega(_) => "omega",
        Command::Helmholtz(_) => "helmholtz",
        Command::Noether { .. } => "noether",
        Command::Identity { .. } => "identity",
        Command::Gauge { .. } => "gauge",
        Command::Kernel { .. } => "kernel",
        Command::Bracket { .. } => "bracket",
        Command::Selftest { .. } => "selftest",
    }
}

pub fn run(cli: &Cli) -> Res<Report> {
    let command = cli.command.as_ref().expect("checked by caller");
    let start = Instant::now();
    let (model, items) = match command {
        Command::Selftest { criterion } => ("-".to_string(), selftest_items(cli.seed, *criterion)?),
        other => {
            let ctx = Ctx::load(cli)?;
            let items = model_command(&ctx, other)?;
            (ctx.label, items)
        }
    };
    let ms = start.elapsed().as_millis() as u64;
    Ok(Report::new(command_name(command), &model, items, ms))
}

fn model_command(ctx: &Ctx, command: &Command) -> Res<Vec<Item>> {
    let b = ctx.bundle();
    let n = b.dim();
    match command {
        Command::El(arg) => {
            let l = ctx.lagrangian(arg)?;
            let el = euler_lagrange(b, &l);
            Ok(b.dependent()
                .iter()
                .zip(el.components())
                .map(|(f, e)| Item::value(format!("E[{f}]"), format!("({})", ctx.expr(e))))
                .collect())
        }
        Command::Linearize(arg) => {
            let l = ctx.lagrangian(arg)?;
            let op = linearize(b, euler_lagrange(b, &l).components());
            Ok(vec![Item::value("linearized E(L)", print_operator(b, &op))])
        }
        Command::Adjoint { l, operator } => {
            let (name, op): (String, LinDiffOp) = match operator {
                Some(name) => (name.clone(), ctx.model.operator(name)?.op.clone()),
                None => {
                    let lag = ctx.lagrangian(l)?;
                    ("linearized E(L)".into(), linearize(b, euler_lagrange(b, &lag).components()))
                }
            };
            Ok(vec![Item::value(format!("adjoint of {name}"), print_operator(b, &op.adjoint()))])
        }
        Command::Legendre(arg) => {
            let l = ctx.lagrangian(arg)?;
            let theta = legendre_form(b, &l);
            let lhs = &l.form(n).dvert() - &euler_lagrange(b, &l).to_form(n);
            let holds = lhs == theta.form().dbar(n);
            Ok(vec![
                Item::value("theta", print_form(b, theta.form())),
                Item::check("dvert L - E(L) = dbar theta", if holds { Status::Pass } else { Status::Fail }),
            ])
        }
        Command::Omega(arg) => {
            let l = ctx.lagrangian(arg)?;
            let omega = presymplectic_current(b, &l);
            let closure = &omega.form().dbar(n) + &euler_lagrange(b, &l).to_form(n).dvert();
            let mut check = Item::check(
                "dbar omega + dvert E(L) = 0",
                if closure.is_zero() { Status::Pass } else { Status::Fail },
            );
            if !closure.is_zero() {
                check = check.with_witness(print_form(b, &closure));
            }
            Ok(vec![Item::value("omega", print_form(b, omega.form())), check])
        }
        Command::Helmholtz(arg) => {
            let l = ctx.lagrangian(arg)?;
            let h = helmholtz_selfadjoint(b, &euler_lagrange(b, &l));
            let item = Item::check(
                "linearized E(L) is self-adjoint",
                if h.self_adjoint { Status::Pass } else { Status::Fail },
            );
            Ok(vec![if h.self_adjoint {
                item
            } else {
                item.with_witness(print_operator(b, &h.difference))
            }])
        }
        Command::Noether { l, symmetry } => noether(ctx, l, symmetry),
        Command::Identity { l, operator } => {
            let lag = ctx.lagrangian(l)?;
            let g = ctx.gauge(operator)?;
            let ident = noether_identity(b, &g, &lag)?;
            Ok(ident
                .iter()
                .enumerate()
                .map(|(k, e)| {
                    let name = format!("{operator}^+(E(L))[{}] = 0", g.params[k]);
                    if e.is_zero() {
                        Item::check(name, Status::Pass)
                    } else {
                        Item::check(name, Status::Fail).with_witness(format!("({})", ctx.expr(e)))
                    }
                })
                .collect())
        }
        Command::Gauge { l, operator } => gauge(ctx, l, operator),
        Command::Kernel {
            l,
            symmetry,
            operator,
            param,
        } => {
            let lag = ctx.lagrangian(l)?;
            let sys = ctx.system(&lag)?;
            let (name, chi) = match (symmetry, operator) {
                (Some(s), _) => (s.clone(), ctx.model.symmetry(s)?.clone()),
                (None, Some(o)) => {
                    let g = ctx.gauge(o)?;
                    if param.len() != g.params.len() {
                        return Err(CliError::Usage(format!(
                            "operator {o} takes {} parameters, {} given",
                            g.params.len(),
                            param.len()
                        )));
                    }
                    let eps = param
                        .iter()
                        .map(|p| parse_expr(b, p).map_err(|d| CliError::Usage(format!("--param: {d}"))))
                        .collect::<Res<Vec<Expr>>>()?;
                    (format!("{o}({})", param.join(", ")), EvolField::new(g.op.apply(&eps)?))
                }
                (None, None) => {
                    return Err(CliError::Usage("kernel needs --symmetry or --operator with --param".into()))
                }
            };
            let e = verify_kernel_direction(b, &chi, &lag, &sys, ctx.bound)?;
            Ok(vec![exactness_item(format!("i_chi omega is dbar-exact on shell for chi = {name}"), e, b)])
        }
        Command::Bracket { l, symmetry } => {
            if symmetry.len() != 2 {
                return Err(CliError::Usage(format!(
                    "bracket takes exactly two --symmetry arguments, {} given",
                    symmetry.len()
                )));
            }
            let lag = ctx.lagrangian(l)?;
            let c1 = noether_current(b, ctx.model.symmetry(&symmetry[0])?, &lag)?;
            let c2 = noether_current(b, ctx.model.symmetry(&symmetry[1])?, &lag)?;
            let br = bracket(b, &c1, &c2, &lag);
            let div = br.dbar(n).top_coefficient(n);
            let sys = ctx.system(&lag)?;
            let name = "dbar of the bracket vanishes on shell";
            let check = match sys.is_zero_on_shell(&div, ctx.bound)? {
                Membership::Member(cert) => {
                    Item::check(name, Status::Pass).with_certificate(ctx.certificate(&cert))
                }
                Membership::Inconclusive(why) => Item::check(format!("{name} ({why})"), Status::Inconclusive)
                    .with_witness(format!("({})", ctx.expr(&div))),
            };
            Ok(vec![
                Item::value(format!("{{{}, {}}}", symmetry[0], symmetry[1]), print_form(b, &br)),
                check,
            ])
        }
        Command::Selftest { .. } => unreachable!("handled without a model"),
    }
}

fn noether(ctx: &Ctx, arg: &LagrangianArg, symmetry: &str) -> Res<Vec<Item>> {
    let b = ctx.bundle();
    let l = ctx.lagrangian(arg)?;
    let chi = ctx.model.symmetry(symmetry)?;
    let name = format!("{symmetry} is a Noether symmetry");
    let sigma = match check_noether_symmetry(b, chi, &l)? {
        SymmetryCheck::Symmetry(s) => s,
        SymmetryCheck::NotSymmetry(el) => {
            return Ok(b
                .dependent()
                .iter()
                .zip(el.components())
                .filter(|(_, e)| !e.is_zero())
                .map(|(f, e)| {
                    Item::check(format!("{name}: E[{f}](E_chi L) = 0"), Status::Fail)
                        .with_witness(format!("({})", ctx.expr(e)))
                })
                .collect());
        }
    };
    let charge = noether_current(b, chi, &l)?;
    let sys = ctx.system(&l)?;
    let first = check_first_noether_symplectic(b, &charge, &l, &sys, ctx.bound)?;
    Ok(vec![
        Item::check(name, Status::Pass).with_witness(print_form(b, &sigma)),
        Item::check("current is conserved on shell", Status::Pass)
            .with_witness(print_form(b, charge.current()))
            .with_certificate(ctx.certificate(charge.conservation())),
        exactness_item(
            format!("dvert j + ({NOETHER_SIGN}) i_chi omega is dbar-exact on shell"),
            first,
            b,
        ),
    ])
}

fn gauge(ctx: &Ctx, arg: &LagrangianArg, operator: &str) -> Res<Vec<Item>> {
    let b = ctx.bundle();
    let l = ctx.lagrangian(arg)?;
    let g = ctx.gauge(operator)?;
    let sys = ctx.system(&l)?;
    let mut items = Vec::new();
    let name = format!("{operator}(eps) is a Noether symmetry for all eps");
    match check_noether_gauge_symmetry(b, &g, &l)? {
        SymmetryCheck::Symmetry(_) => items.push(Item::check(name, Status::Pass)),
        SymmetryCheck::NotSymmetry(el) => {
            let (ext, _) = g.generic_direction(b)?;
            let e = el.components().iter().find(|e| !e.is_zero()).expect("nonzero witness");
            items.push(Item::check(name, Status::Fail).with_witness(format!("({})", print_expr(&ext, e))));
        }
    }
    let ident = noether_identity(b, &g, &l)?;
    let name = format!("Noether identity {operator}^+(E(L)) = 0");
    match ident.iter().find(|e| !e.is_zero()) {
        None => items.push(Item::check(name, Status::Pass)),
        Some(e) => items.push(Item::check(name, Status::Fail).with_witness(format!("({})", ctx.expr(e)))),
    }
    let inf = check_infinitesimal_gauge(b, &g, &l, &sys, ctx.bound)?;
    let mut item = verdict_item("linearized equations vanish on G and G^+ on shell", &inf.verdict);
    if !inf.verdict.passes() {
        item = item.with_witness(print_operator(b, &inf.linearized));
    }
    items.push(item);
    Ok(items)
}

fn selftest_items(seed: Option<u64>, criterion: Option<u8>) -> Res<Vec<Item>> {
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let outcomes = match criterion {
        Some(id) => vec![selftest::run(id, seed)
            .ok_or_else(|| CliError::Usage(format!("no criterion {id}; criteria are 1 to 10")))?],
        None => selftest::run_all(seed),
    };
    let mut items = Vec::new();
    for o in outcomes {
        for c in o.checks {
            let mut name = format!("{}. {}: {}", o.id, o.name, c.name);
            if let Some(d) = c.detail {
                name.push_str(&format!(" ({d})"));
            }
            items.push(Item::check(name, c.status.into()));
        }
    }
    Ok(items)
}
