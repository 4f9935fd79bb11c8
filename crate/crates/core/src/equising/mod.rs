//! Checkers for the W, iL_mY and iL_A conditions of a family, the
//! weighted-homogeneous fast path and the hyperplane-section criterion.

pub mod fastpath;
pub mod grassmann;
pub mod report;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use fastpath::{verify_weights, wh_euler_fastpath, EulerCertificate, WeightVector};
pub use grassmann::{grassmann_identities, grassmann_modification, IdentityCheck, Modification};
pub use report::{aggregate, Condition, ConditionReport, Evidence, GeneratorReport, ReportBounds};

use crate::closure::{
    closure_membership_module, sample_arcs, sample_pair_arcs, ArcOptions, ClosureOptions, CurveArc, Status,
};
use crate::double::{double_element, double_module_over, Basis, DoubleMode, ProductRingContext};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rational};
use crate::modulealg::{jacobian_modules, ModulePresentation, RingContext, VarietyFamily};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IlmyVariant {
    #[default]
    ZOnly,
    Full,
}

fn render_point(ctx: &RingContext, pt: &[Rational]) -> Vec<String> {
    ctx.names().iter().zip(pt).map(|(n, v)| format!("{n}={v}")).collect()
}

fn parameter_note(ctx: &RingContext, pt: &[Rational], notes: &mut Vec<String>) {
    if ctx.params().iter().any(|&i| !pt[i].is_zero()) {
        notes.push("localized at a nonzero parameter value; search bounds are the ones used at the origin".into());
    }
}

fn parameter_partials(fam: &VarietyFamily) -> Result<Vec<(String, Vec<Poly>)>> {
    let ctx = fam.context();
    let jm = jacobian_modules(fam)?;
    Ok(ctx
        .params()
        .into_iter()
        .zip(jm.jm_y.generators())
        .map(|(y, g)| (format!("dF/d{}", ctx.names()[y]), g.clone()))
        .collect())
}

fn without_zero_columns(m: &ModulePresentation) -> Result<ModulePresentation> {
    let gens: Vec<_> = m.generators().iter().filter(|g| !g.iter().all(Poly::is_zero)).cloned().collect();
    ModulePresentation::new(m.context().clone(), m.rank(), gens)
}

fn base_arcs(ctx: &RingContext, center: &[Rational], opts: &ClosureOptions) -> Result<Vec<CurveArc>> {
    let ao = ArcOptions {
        count: opts.arc_count,
        degree_budget: opts.degree_budget,
        truncation: opts.truncation,
        seed: opts.seed,
        center: center.to_vec(),
    };
    let user: Vec<CurveArc> = opts.arcs.iter().filter(|a| a.series().len() == ctx.nvars()).cloned().collect();
    match sample_arcs(ctx, &ao, opts.parametrization.as_ref(), &user) {
        Ok(a) => Ok(a),
        Err(Error::NoArcStrategy(_)) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

/// `h ∈ closure(M)` over the base ring at `point`, for each named target.
fn single_condition(
    condition: Condition,
    ctx: &RingContext,
    targets: &[(String, Vec<Poly>)],
    module: &ModulePresentation,
    point: Option<&[Rational]>,
    opts: &ClosureOptions,
    mut notes: Vec<String>,
) -> Result<ConditionReport> {
    let pt = point.map(<[Rational]>::to_vec).unwrap_or_else(|| ctx.origin());
    ctx.check_point(&pt)?;
    parameter_note(ctx, &pt, &mut notes);
    let o = ClosureOptions { point: Some(pt.clone()), ..opts.clone() };
    let module = without_zero_columns(module)?;
    let mut gens = Vec::new();
    for (name, h) in targets {
        let v = closure_membership_module(h, &module, &o)?;
        gens.push(GeneratorReport { name: name.clone(), verdict: v.status, certificate: Evidence::Closure(v) });
    }
    Ok(ConditionReport::new(condition, render_point(ctx, &pt), gens, ReportBounds::from(opts), notes))
}

/// `h_D ∈ closure(M_D)` over `X ×_Y X` at the pair point, for each target.
pub(crate) fn doubled_condition(
    condition: Condition,
    ctx: &RingContext,
    targets: &[(String, Vec<Poly>)],
    module: &ModulePresentation,
    pair_point: Option<&[Rational]>,
    opts: &ClosureOptions,
    mut notes: Vec<String>,
) -> Result<ConditionReport> {
    let pctx = ProductRingContext::new(ctx, DoubleMode::Relative)?;
    let pt = pair_point.map(<[Rational]>::to_vec).unwrap_or_else(|| pctx.context().origin());
    pctx.context().check_point(&pt)?;
    parameter_note(pctx.context(), &pt, &mut notes);
    let (x, x2) = pctx.split_point(&pt)?;
    let module = without_zero_columns(module)?;
    let d = double_module_over(&module, &pctx, Basis::B)?;
    let a1 = base_arcs(ctx, &x, opts)?;
    let a2 = if x2 == x { a1.clone() } else { base_arcs(ctx, &x2, opts)? };
    let ao = ArcOptions {
        count: opts.arc_count,
        degree_budget: opts.degree_budget,
        truncation: opts.truncation,
        seed: opts.seed,
        center: pt.clone(),
    };
    let pairs = sample_pair_arcs(&pctx, &a1, &a2, &ao, &x2)?;
    notes.push(format!("{} pair arcs built from {} + {} arcs on the factors", pairs.len(), a1.len(), a2.len()));
    let o = ClosureOptions { point: Some(pt.clone()), arcs: pairs, parametrization: None, ..opts.clone() };
    let mut gens = Vec::new();
    for (name, h) in targets {
        let hd = double_element(h, &pctx);
        let v = closure_membership_module(&hd, &d.module, &o)?;
        gens.push(GeneratorReport { name: format!("({name})_D"), verdict: v.status, certificate: Evidence::Closure(v) });
    }
    Ok(ConditionReport::new(condition, render_point(pctx.context(), &pt), gens, ReportBounds::from(opts), notes))
}

/// `JM_Y ⊆ closure(m_Y·J_zM)` at `point` (default: the origin).
pub fn check_w(fam: &VarietyFamily, point: Option<&[Rational]>, opts: &ClosureOptions) -> Result<ConditionReport> {
    let jm = jacobian_modules(fam)?;
    let targets = parameter_partials(fam)?;
    let module = jm.jz_m.times_fiber_ideal();
    single_condition(Condition::W, fam.context(), &targets, &module, point, opts, Vec::new())
}

/// `(JM_Y)_D ⊆ closure((J_zM)_D)` over `X ×_Y X` at the pair point
/// (default: the origin of the fibered product).
pub fn check_ila(fam: &VarietyFamily, pair_point: Option<&[Rational]>, opts: &ClosureOptions) -> Result<ConditionReport> {
    let jm = jacobian_modules(fam)?;
    let targets = parameter_partials(fam)?;
    doubled_condition(Condition::IlA, fam.context(), &targets, &jm.jz_m, pair_point, opts, Vec::new())
}

/// `(JM_Y)_D ⊆ closure((m_Y·J_zM)_D)`; the full variant also tests against
/// `(m_Y·JM)_D` and requires the two aggregates not to contradict.
pub fn check_ilmy(
    fam: &VarietyFamily,
    pair_point: Option<&[Rational]>,
    variant: IlmyVariant,
    opts: &ClosureOptions,
) -> Result<Vec<ConditionReport>> {
    let jm = jacobian_modules(fam)?;
    let targets = parameter_partials(fam)?;
    let z_only = doubled_condition(
        Condition::IlMy,
        fam.context(),
        &targets,
        &jm.jz_m.times_fiber_ideal(),
        pair_point,
        opts,
        vec!["tested against (m_Y J_zM)_D".into()],
    )?;
    if variant == IlmyVariant::ZOnly {
        return Ok(vec![z_only]);
    }
    let full = doubled_condition(
        Condition::IlMyAlt,
        fam.context(),
        &targets,
        &jm.jm.times_fiber_ideal(),
        pair_point,
        opts,
        vec!["tested against (m_Y JM)_D".into()],
    )?;
    let pair = [z_only.aggregate, full.aggregate];
    if pair.contains(&Status::Holds) && pair.contains(&Status::Fails) {
        return Err(Error::Internal("projection variants of iL_mY disagree".into()));
    }
    Ok(vec![z_only, full])
}

/// Tests `(z_i (∂f/∂z_n∘β))_D ∈ closure((J_z F)_D)` at `(0, P)` for the
/// modification `F = f∘β`.
pub fn grassmann_ila_criterion(
    ctx: &RingContext,
    f: &[Poly],
    chart_point: &[Rational],
    opts: &ClosureOptions,
) -> Result<(Modification, ConditionReport)> {
    let m = grassmann_modification(ctx, f)?;
    let fctx = m.family.context();
    let n = ctx.nvars();
    if chart_point.len() != n - 1 {
        return Err(Error::Dimension(format!("chart point needs {} coordinates", n - 1)));
    }
    let mut base = fctx.origin();
    base[n..].clone_from_slice(chart_point);
    let pctx = ProductRingContext::new(fctx, DoubleMode::Relative)?;
    let pt = pctx.point(&base, &base)?;
    let jm = jacobian_modules(&m.family)?;
    let targets: Vec<(String, Vec<Poly>)> = m
        .criterion_elements()
        .into_iter()
        .enumerate()
        .map(|(i, h)| (format!("{}*(df/d{}∘β)", fctx.names()[i], fctx.names()[n - 1]), h))
        .collect();
    let report = doubled_condition(Condition::GrassmannCriterion, fctx, &targets, &jm.jz_m, Some(&pt), opts, Vec::new())?;
    Ok((m, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::verify_verdict;
    use crate::exactalg::rat;

    fn cusp_family() -> VarietyFamily {
        VarietyFamily::parse(&["z1", "z2"], &["t"], &["z1^2 + z2^3 + t*z2^2"]).unwrap()
    }

    fn all_verify(r: &ConditionReport) {
        assert!(r.verify().unwrap(), "{r:#?}");
        for g in &r.generators {
            if let Evidence::Closure(v) = &g.certificate {
                assert!(verify_verdict(v).unwrap());
            }
        }
    }

    #[test]
    fn product_family_holds_everywhere() {
        let fam = VarietyFamily::parse(&["z1", "z2"], &["t"], &["z1^2 + z2^3"]).unwrap();
        let o = ClosureOptions::default();
        assert_eq!(check_w(&fam, None, &o).unwrap().aggregate, Status::Holds);
        assert_eq!(check_ila(&fam, None, &o).unwrap().aggregate, Status::Holds);
        for r in check_ilmy(&fam, None, IlmyVariant::Full, &o).unwrap() {
            assert_eq!(r.aggregate, Status::Holds);
        }
    }

    #[test]
    fn w_fails_for_the_cusp_family() {
        let o = ClosureOptions::default();
        let r = check_w(&cusp_family(), None, &o).unwrap();
        assert_eq!(r.aggregate, Status::Fails, "{r:#?}");
        all_verify(&r);
    }

    #[test]
    fn ilmy_fails_for_the_cusp_family() {
        let o = ClosureOptions::default();
        let rs = check_ilmy(&cusp_family(), None, IlmyVariant::Full, &o).unwrap();
        assert_eq!(rs.len(), 2);
        for r in &rs {
            assert_eq!(r.aggregate, Status::Fails, "{r:#?}");
            all_verify(r);
        }
    }

    #[test]
    fn ila_over_a_generic_parameter() {
        let o = ClosureOptions::default();
        let fam = cusp_family();
        let pctx = ProductRingContext::new(fam.context(), DoubleMode::Relative).unwrap();
        let x = vec![rat(0), rat(0), rat(1)];
        let pt = pctx.point(&x, &x).unwrap();
        let r = check_ila(&fam, Some(&pt), &o).unwrap();
        assert_eq!(r.aggregate, Status::Holds, "{r:#?}");
        all_verify(&r);
    }

    #[test]
    fn grassmann_criterion_examples() {
        let ctx = RingContext::new(&["z1", "z2"], &[]).unwrap();
        let o = ClosureOptions::default();
        let (_, r) = grassmann_ila_criterion(&ctx, &[ctx.parse("z1 + 2*z2").unwrap()], &[rat(1)], &o).unwrap();
        assert_eq!(r.aggregate, Status::Holds);
        let (_, r) = grassmann_ila_criterion(&ctx, &[ctx.parse("z1^2 + z2^2").unwrap()], &[rat(1)], &o).unwrap();
        assert_eq!(r.aggregate, Status::Holds, "{r:#?}");
        all_verify(&r);
    }
}
