//! Batch front-end: task files in, JSON and text reports out.

pub mod report;
pub mod task;

use std::path::Path;

use lipdouble::closure::arc::parse_rational;
use lipdouble::closure::{closure_membership_ideal, closure_membership_module, ClosureOptions};
use lipdouble::curvefam::{bilip_verdict, chain_rule_check, implicitize, normal_form, CurveFamilyParam};
use lipdouble::double::{double_module, Basis, DoubleMode, ProductRingContext};
use lipdouble::equising::{
    check_ila, check_ilmy, check_w, grassmann_identities, grassmann_ila_criterion, wh_euler_fastpath,
};
use lipdouble::modulealg::{
    cosupport_ideal, generic_rank, reducibility_note, rho_element, rho_ideal, Ideal, ModulePresentation, RingContext, VarietyFamily,
};
use lipdouble::{Error, Poly, Rational};

use report::*;
use task::{Num, ParamDecl, TaskFile, TaskKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

type Res<T> = std::result::Result<T, CliError>;

pub fn read_task(path: &Path) -> Res<TaskFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_task(&text)
}

pub fn parse_task(text: &str) -> Res<TaskFile> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("task file: {e}")))
}

/// Parses `src`, pointing at the offending byte on failure.
fn parse_poly(ctx: &RingContext, field: &str, src: &str) -> Res<Poly> {
    ctx.parse(src).map_err(|e| match e {
        Error::Parse { pos, .. } => {
            CliError::Input(format!("{field}: {e}\n    {src}\n    {}^", " ".repeat(pos.min(src.len()))))
        }
        e => CliError::Input(format!("{field}: {e}")),
    })
}

fn parse_list(ctx: &RingContext, field: &str, srcs: &[String]) -> Res<Vec<Poly>> {
    srcs.iter().enumerate().map(|(i, s)| parse_poly(ctx, &format!("{field}[{i}]"), s)).collect()
}

fn num(n: &Num) -> Res<Rational> {
    match n {
        Num::Int(i) => Ok(Rational::from_integer((*i).into())),
        Num::Text(s) => parse_rational(s).map_err(|_| CliError::Input(format!("`{s}` is not a rational number"))),
    }
}

fn point(p: &Option<Vec<Num>>) -> Res<Option<Vec<Rational>>> {
    p.as_ref().map(|v| v.iter().map(num).collect()).transpose()
}

fn need<'a, T>(x: &'a Option<T>, what: &str) -> Res<&'a T> {
    x.as_ref().ok_or_else(|| CliError::Input(format!("this task needs `{what}`")))
}

fn base_ring(t: &TaskFile) -> Res<RingContext> {
    let z: Vec<&str> = t.ring.z.iter().map(String::as_str).collect();
    let y: Vec<&str> = t.ring.y.iter().map(String::as_str).collect();
    let ctx = RingContext::new(&z, &y)?;
    let rels = parse_list(&ctx, "ring.relations", &t.ring.relations)?;
    let mut ctx = ctx.with_relations(rels)?;
    ctx.set_irreducible(t.ring.irreducible.unwrap_or(t.ring.relations.is_empty()));
    Ok(ctx)
}

fn module(t: &TaskFile, ctx: &RingContext) -> Res<ModulePresentation> {
    let m = need(&t.module, "module")?;
    let gens = m
        .generators
        .iter()
        .enumerate()
        .map(|(j, col)| parse_list(ctx, &format!("module.generators[{j}]"), col))
        .collect::<Res<Vec<_>>>()?;
    Ok(ModulePresentation::new(ctx.clone(), m.rank, gens)?)
}

fn family(t: &TaskFile) -> Res<VarietyFamily> {
    if !t.ring.relations.is_empty() {
        return Err(CliError::Input("family tasks take their equations from `family`, not `ring.relations`".into()));
    }
    let ctx = base_ring(t)?;
    let f = parse_list(&ctx, "family", need(&t.family, "family")?)?;
    Ok(VarietyFamily::new(ctx, f)?)
}

fn closure_options(t: &TaskFile) -> Res<ClosureOptions> {
    let o = &t.options;
    let d = ClosureOptions::default();
    Ok(ClosureOptions {
        strategy: o.strategy.unwrap_or(d.strategy),
        max_m: o.max_m.unwrap_or(d.max_m),
        max_deg: o.max_deg.or(d.max_deg),
        max_unknowns: o.max_unknowns.unwrap_or(d.max_unknowns),
        arc_count: o.arc_count.unwrap_or(d.arc_count),
        degree_budget: o.degree_budget.unwrap_or(d.degree_budget),
        truncation: o.truncation.unwrap_or(d.truncation),
        seed: o.seed.unwrap_or(d.seed),
        kind: o.closure.unwrap_or(d.kind),
        point: point(&o.point)?,
        ..d
    })
}

fn default_mode(ctx: &RingContext) -> DoubleMode {
    if ctx.params().is_empty() {
        DoubleMode::Absolute
    } else {
        DoubleMode::Relative
    }
}

fn mode_name(m: DoubleMode) -> String {
    match m {
        DoubleMode::Absolute => "absolute".into(),
        DoubleMode::Relative => "relative".into(),
    }
}

/// Pair point from `point` and `second_point`, or `None` for the origin.
fn pair_point(t: &TaskFile, ctx: &RingContext) -> Res<Option<Vec<Rational>>> {
    let x = point(&t.options.point)?;
    let x2 = point(&t.options.second_point)?;
    if x.is_none() && x2.is_none() {
        return Ok(None);
    }
    let x = x.unwrap_or_else(|| ctx.origin());
    let x2 = x2.unwrap_or_else(|| x.clone());
    let pctx = ProductRingContext::new(ctx, DoubleMode::Relative)?;
    Ok(Some(pctx.point(&x, &x2)?))
}

fn curve_param(t: &TaskFile) -> Res<CurveFamilyParam> {
    let ParamDecl { components, truncation, polynomial } = need(&t.parametrization, "parametrization")?;
    let n = t.options.truncation.or(*truncation).unwrap_or(lipdouble::exactalg::DEFAULT_TRUNCATION);
    let lists = components
        .iter()
        .map(|c| c.iter().map(|(x, i, j)| Ok((num(x)?, *i, *j))).collect::<Res<Vec<_>>>())
        .collect::<Res<Vec<_>>>()?;
    Ok(CurveFamilyParam::from_term_lists(&lists, n, *polynomial)?)
}

/// Runs one task.
pub fn run(t: &TaskFile) -> Res<Report> {
    let outcome = match t.task {
        TaskKind::Double => {
            let ctx = base_ring(t)?;
            let m = module(t, &ctx)?;
            let mode = t.options.mode.unwrap_or(default_mode(&ctx));
            let basis: Basis = t.options.basis.map(Into::into).unwrap_or(Basis::B);
            let d = double_module(&m, mode, basis)?;
            TaskResult::Double(DoubleResult {
                mode: mode_name(mode),
                basis: basis.tag().into(),
                product_vars: d.product.context().names().to_vec(),
                generators: d.module.render(),
            })
        }
        TaskKind::Rank => {
            let ctx = base_ring(t)?;
            let m = module(t, &ctx)?;
            let mode = t.options.mode.unwrap_or(default_mode(&ctx));
            let d = double_module(&m, mode, Basis::B)?;
            TaskResult::Rank(RankResult {
                mode: mode_name(mode),
                generic_rank: generic_rank(&m)?,
                doubled_generic_rank: generic_rank(&d.module)?,
                notes: reducibility_note(&ctx).into_iter().collect(),
            })
        }
        TaskKind::Cosupport => {
            let ctx = base_ring(t)?;
            let m = module(t, &ctx)?;
            let mode = t.options.mode.unwrap_or(default_mode(&ctx));
            let (k, ideal) = cosupport_ideal(&m)?;
            let d = double_module(&m, mode, Basis::B)?;
            let (kd, dideal) = cosupport_ideal(&d.module)?;
            TaskResult::Cosupport(CosupportResult {
                generic_rank: k,
                ideal: ideal.render(),
                mode: mode_name(mode),
                product_vars: d.product.context().names().to_vec(),
                doubled_generic_rank: kd,
                doubled_ideal: dideal.render(),
                notes: reducibility_note(&ctx).into_iter().collect(),
            })
        }
        TaskKind::Rho => {
            let ctx = base_ring(t)?;
            let m = module(t, &ctx)?;
            let chart = t.options.chart.unwrap_or(1);
            let ideal = rho_ideal(&m, chart)?;
            let target = match &t.target {
                Some(h) => {
                    let h = parse_list(&ctx, "target", h)?;
                    Some(ideal.context().render(&rho_element(&h, chart, ideal.context())?))
                }
                None => None,
            };
            TaskResult::Rho(RhoResult {
                chart,
                vars: ideal.context().names().to_vec(),
                ideal: ideal.render(),
                target,
            })
        }
        TaskKind::ClosureTest => {
            let ctx = base_ring(t)?;
            let opts = closure_options(t)?;
            let h = parse_list(&ctx, "target", need(&t.target, "target")?)?;
            let v = match (&t.ideal, &t.module) {
                (Some(gens), None) => {
                    if h.len() != 1 {
                        return Err(CliError::Input("an ideal test takes exactly one target".into()));
                    }
                    let gens = parse_list(&ctx, "ideal", gens)?;
                    closure_membership_ideal(&h[0], &Ideal::new(ctx.clone(), gens)?, &opts)?
                }
                (None, Some(_)) => closure_membership_module(&h, &module(t, &ctx)?, &opts)?,
                _ => return Err(CliError::Input("closure-test needs exactly one of `ideal` and `module`".into())),
            };
            TaskResult::ClosureTest(v)
        }
        TaskKind::CheckW => {
            let fam = family(t)?;
            let opts = closure_options(t)?;
            let pt = point(&t.options.point)?;
            TaskResult::CheckW(check_w(&fam, pt.as_deref(), &opts)?)
        }
        TaskKind::CheckIla => {
            let fam = family(t)?;
            let opts = ClosureOptions { point: None, ..closure_options(t)? };
            let pp = pair_point(t, fam.context())?;
            TaskResult::CheckIla(check_ila(&fam, pp.as_deref(), &opts)?)
        }
        TaskKind::CheckIlmy => {
            let fam = family(t)?;
            let opts = ClosureOptions { point: None, ..closure_options(t)? };
            let pp = pair_point(t, fam.context())?;
            let variant = t.options.variant.unwrap_or_default();
            TaskResult::CheckIlmy(check_ilmy(&fam, pp.as_deref(), variant, &opts)?)
        }
        TaskKind::WhFastpath => {
            let fam = family(t)?;
            let opts = closure_options(t)?;
            let w = need(&t.weights, "weights")?;
            let pt = point(&t.options.point)?.unwrap_or_else(|| fam.context().origin());
            match wh_euler_fastpath(&fam, w, &pt, &opts) {
                Ok(report) => TaskResult::WhFastpath(FastpathResult::Certified { report }),
                Err(Error::FastPathInapplicable(reason)) => TaskResult::WhFastpath(FastpathResult::Inapplicable { reason }),
                Err(e) => return Err(e.into()),
            }
        }
        TaskKind::Grassmann => {
            if !t.ring.y.is_empty() || !t.ring.relations.is_empty() {
                return Err(CliError::Input("the hyperplane-section task takes f over fiber variables only".into()));
            }
            let ctx = base_ring(t)?;
            let f = parse_list(&ctx, "family", need(&t.family, "family")?)?;
            let n = ctx.nvars();
            let opts = ClosureOptions { point: None, ..closure_options(t)? };
            let p = point(&t.options.point)?.unwrap_or_else(|| vec![Rational::from_integer(0.into()); n.saturating_sub(1)]);
            let (m, criterion) = grassmann_ila_criterion(&ctx, &f, &p, &opts)?;
            let identities = grassmann_identities(&m)?;
            let fctx = m.family.context();
            let names = fctx.names();
            TaskResult::Grassmann(GrassmannResult {
                vars: names[..n].to_vec(),
                params: names[n..].to_vec(),
                family: m.family.map().iter().map(|p| fctx.render(p)).collect(),
                identities,
                criterion,
            })
        }
        TaskKind::CurveNormalForm => {
            let param = curve_param(t)?;
            let r = normal_form(&param)?;
            let fam = &r.family;
            TaskResult::CurveNormalForm(NormalFormReport {
                multiplicity: fam.multiplicity(),
                pivot: r.linear.pivot,
                v: r.linear.render(),
                linear_identity: r.linear.is_identity(),
                reparam_unit: lipdouble::curvefam::render_series(&r.reparam_unit),
                reparam_identity: r.reparam_is_identity(),
                inverse_reparam: lipdouble::curvefam::render_series(&r.inverse_reparam),
                truncation: fam.truncation(),
                family: fam.render(),
                s_orders: fam.coords().iter().map(|c| c.s_order()).collect(),
                recomposes: r.verify(&param)?,
                audit: r.audit.clone(),
            })
        }
        TaskKind::CurveBilip => {
            let param = curve_param(t)?;
            let opts = ClosureOptions { point: None, ..closure_options(t)? };
            let imp = implicitize(&param)?;
            let chain_rule = chain_rule_check(&param, &imp)?;
            let (imp, report) = bilip_verdict(&param, &opts)?;
            TaskResult::CurveBilip(BilipResult {
                vars: imp.ctx.names().to_vec(),
                implicitization: imp.render(),
                chain_rule,
                report,
            })
        }
    };
    Ok(Report { input: t.clone(), outcome })
}

/// Canonical JSON text of a report (pretty, newline-terminated).
pub fn report_json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `report.json` and `report.txt` into `dir`.
pub fn write_report(r: &Report, dir: &Path) -> Res<()> {
    let io = |e: std::io::Error| CliError::Input(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("report.json"), report_json(r)).map_err(io)?;
    std::fs::write(dir.join("report.txt"), r.to_text()).map_err(io)?;
    Ok(())
}

pub fn read_report(path: &Path) -> Res<Report> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("report file: {e}")))
}
