//! Arcs `(C,0) → X` as truncated power series, and seeded arc sampling.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::double::ProductRingContext;
use crate::error::{Error, Result};
use crate::exactalg::{rat, Poly, Rational, TruncSeries};
use crate::modulealg::RingContext;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcMethod {
    /// No relations: any series arc lies on the ambient space.
    Ambient,
    /// Composition with a parametrization of `X`.
    Parametrization,
    /// Relations solved one variable at a time (division, roots, Newton).
    Solved,
    /// Supplied by the user.
    User,
    /// Pair of arcs on the two factors of a product.
    Paired,
    /// Monomial arc `t^w` built from a separating weight.
    Monomial,
}

/// A truncated arc with every relation vanishing to its truncation order.
#[derive(Clone, PartialEq, Debug)]
pub struct CurveArc {
    series: Vec<TruncSeries>,
    truncation: usize,
    method: ArcMethod,
}

impl CurveArc {
    /// Builds and certifies an arc on the variety of `ctx`.
    pub fn new(ctx: &RingContext, series: Vec<TruncSeries>, method: ArcMethod) -> Result<Self> {
        Self::on_relations(ctx.relations(), ctx.nvars(), series, method)
    }

    pub fn on_relations(relations: &[Poly], nvars: usize, series: Vec<TruncSeries>, method: ArcMethod) -> Result<Self> {
        if series.len() != nvars {
            return Err(Error::Dimension(format!("arc has {} components, ring has {nvars}", series.len())));
        }
        let truncation = series.iter().map(TruncSeries::order).min().unwrap_or(0);
        let series: Vec<TruncSeries> = series.into_iter().map(|s| s.truncate(truncation)).collect();
        for r in relations {
            let res = r.eval_series(&series);
            if let Some(v) = res.valuation() {
                return Err(Error::UncertifiedArc(format!(
                    "relation residual has valuation {v} <= truncation {truncation}"
                )));
            }
        }
        Ok(CurveArc { series, truncation, method })
    }

    pub fn series(&self) -> &[TruncSeries] {
        &self.series
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn method(&self) -> ArcMethod {
        self.method
    }

    pub fn center(&self) -> Vec<Rational> {
        self.series.iter().map(|s| s.coeff(0)).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.series.iter().all(|s| s.coeffs()[1..].iter().all(Zero::is_zero))
    }

    pub fn pullback(&self, p: &Poly) -> TruncSeries {
        p.eval_series(&self.series)
    }

    pub fn to_data(&self) -> ArcData {
        ArcData {
            method: self.method,
            truncation: self.truncation,
            series: self.series.iter().map(|s| trimmed_strings(s)).collect(),
        }
    }

    pub fn from_data(ctx_relations: &[Poly], nvars: usize, d: &ArcData) -> Result<Self> {
        let series = d
            .series
            .iter()
            .map(|c| {
                let coeffs = c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                Ok(TruncSeries::from_coeffs(coeffs, d.truncation))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::on_relations(ctx_relations, nvars, series, d.method)
    }
}

/// Coefficient strings with trailing zeros dropped.
fn trimmed_strings(s: &TruncSeries) -> Vec<String> {
    let mut v = s.to_strings();
    while v.last().is_some_and(|x| x == "0") {
        v.pop();
    }
    v
}

/// Serialized arc: per-variable coefficient lists `c_0, c_1, ...` (missing
/// trailing coefficients are zero) and the truncation order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ArcData {
    pub method: ArcMethod,
    pub truncation: usize,
    pub series: Vec<Vec<String>>,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("`{s}` is not a rational number") };
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Parametrization `X ⊇ image(params ↦ images)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Parametrization {
    /// Names of the parameters.
    pub params: Vec<String>,
    /// One image per ring variable, polynomials in the parameters.
    pub images: Vec<Poly>,
    /// Parameter values mapping to the arc center.
    pub center: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct ArcOptions {
    pub count: usize,
    pub degree_budget: u32,
    pub truncation: usize,
    pub seed: u64,
    /// Arcs must pass through this point.
    pub center: Vec<Rational>,
}

impl ArcOptions {
    pub fn new(center: Vec<Rational>) -> Self {
        ArcOptions { count: 32, degree_budget: 6, truncation: crate::exactalg::DEFAULT_TRUNCATION, seed: 0, center }
    }
}

fn working_order(n: usize) -> usize {
    n + n / 2 + 12
}

/// Random series `c + (0 | ±t^k | small polynomial)`.
fn random_component(rng: &mut ChaCha8Rng, c: &Rational, budget: u32, order: usize) -> TruncSeries {
    let budget = budget.max(1) as usize;
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = c.clone();
    match rng.gen_range(0..4) {
        0 => {}
        1 | 2 => {
            let k = rng.gen_range(1..=budget.min(order.max(1)));
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            coeffs[k] = rat(sign);
        }
        _ => {
            for k in 1..=budget.min(order) {
                if rng.gen_bool(0.5) {
                    coeffs[k] = rat(rng.gen_range(-2..=2));
                }
            }
        }
    }
    TruncSeries::from_coeffs(coeffs, order)
}

/// Nonconstant random series through `c` with a nonzero linear part or higher.
fn random_moving(rng: &mut ChaCha8Rng, c: &Rational, budget: u32, order: usize) -> TruncSeries {
    loop {
        let s = random_component(rng, c, budget, order);
        if s.coeffs()[1..].iter().any(|x| !x.is_zero()) {
            return s;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum StepKind {
    /// `A v + B` with `A, B` free of `v`.
    Linear,
    /// `c v^d + B` with constant `c` and `B` free of `v`.
    Root(u32),
    /// Newton iteration from the center value.
    Newton,
}

#[derive(Clone, Debug)]
struct Step {
    rel: usize,
    var: usize,
    kind: StepKind,
}

fn classify(r: &Poly, v: usize) -> Vec<StepKind> {
    let d = r.degree_in(v);
    let mut kinds = Vec::new();
    if d == 1 {
        kinds.push(StepKind::Linear);
    }
    if d >= 2 {
        let top_is_pure = r.terms().filter(|(m, _)| m.exps()[v] > 0).all(|(m, _)| {
            m.exps()[v] == d && m.exps().iter().enumerate().all(|(i, &e)| i == v || e == 0)
        });
        if top_is_pure {
            kinds.push(StepKind::Root(d));
        }
    }
    if d >= 1 {
        kinds.push(StepKind::Newton);
    }
    kinds
}

/// Orders relations and picks a solved variable for each so that every
/// relation only involves free variables, earlier solved ones and its own.
fn plans(relations: &[Poly], nvars: usize, fixed: &[bool]) -> Vec<Vec<Step>> {
    let q = relations.len();
    let mut out = Vec::new();
    let mut cur: Vec<Step> = Vec::new();
    fn rec(
        relations: &[Poly],
        nvars: usize,
        fixed: &[bool],
        cur: &mut Vec<Step>,
        used_rel: &mut Vec<bool>,
        out: &mut Vec<Vec<Step>>,
    ) {
        if out.len() >= 64 {
            return;
        }
        if cur.len() == relations.len() {
            // later solved variables may not occur in earlier relations
            let ok = cur.iter().enumerate().all(|(k, s)| {
                cur[k + 1..].iter().all(|later| !relations[s.rel].uses_var(later.var))
            });
            if ok {
                out.push(cur.clone());
            }
            return;
        }
        for r in 0..relations.len() {
            if used_rel[r] {
                continue;
            }
            for v in 0..nvars {
                if fixed[v] || cur.iter().any(|s| s.var == v) || !relations[r].uses_var(v) {
                    continue;
                }
                for kind in classify(&relations[r], v) {
                    used_rel[r] = true;
                    cur.push(Step { rel: r, var: v, kind });
                    rec(relations, nvars, fixed, cur, used_rel, out);
                    cur.pop();
                    used_rel[r] = false;
                }
            }
        }
    }
    let mut used = vec![false; q];
    rec(relations, nvars, fixed, &mut cur, &mut used, &mut out);
    let cost = |p: &Vec<Step>| -> usize {
        p.iter()
            .map(|s| match s.kind {
                StepKind::Linear => 0,
                StepKind::Root(_) => 1,
                StepKind::Newton => 2,
            })
            .sum()
    };
    out.sort_by_key(cost);
    out
}

/// Exact rational `d`-th root, if it exists.
fn rational_root(a: &Rational, d: u32) -> Option<Rational> {
    if a.is_negative() && d % 2 == 0 {
        return None;
    }
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let neg = n.is_negative();
        let m = n.abs();
        let r = m.nth_root(d);
        if num_traits::pow(r.clone(), d as usize) == m {
            Some(if neg { -r } else { r })
        } else {
            None
        }
    };
    Some(Rational::new(root_int(a.numer())?, root_int(a.denom())?))
}

fn coefficient_split(r: &Poly, v: usize, power: u32) -> (Poly, Poly) {
    // r = A v^power + B, A and B free of v (power = degree in v)
    let n = r.nvars();
    let mut a = Poly::zero(n);
    let mut b = Poly::zero(n);
    for (m, c) in r.terms() {
        if m.exps()[v] == power {
            let mut e = m.exps().to_vec();
            e[v] = 0;
            a.add_term(crate::exactalg::Monomial::from_exps(e), c.clone());
        } else {
            b.add_term(m.clone(), c.clone());
        }
    }
    (a, b)
}

fn run_step(step: &Step, r: &Poly, series: &mut [Option<TruncSeries>], center: &Rational, order: usize) -> Option<()> {
    let v = step.var;
    let known = |series: &[Option<TruncSeries>]| -> Vec<TruncSeries> {
        series.iter().map(|s| s.clone().unwrap_or_else(|| TruncSeries::zero(order))).collect()
    };
    let sol = match step.kind {
        StepKind::Linear => {
            let (a, b) = coefficient_split(r, v, 1);
            let arc = known(series);
            let sa = a.eval_series(&arc);
            let sb = b.eval_series(&arc);
            if sb.is_zero() {
                TruncSeries::zero(sb.order())
            } else {
                let va = sa.valuation()?;
                if sb.valuation()? < va {
                    return None;
                }
                sb.div(&sa).ok()?.neg()
            }
        }
        StepKind::Root(d) => {
            let (a, b) = coefficient_split(r, v, d);
            let c = a.constant_value()?;
            let arc = known(series);
            let w = b.eval_series(&arc).scale(&(-Rational::one() / c));
            match w.valuation() {
                None => TruncSeries::zero(w.order()),
                Some(e) => {
                    if e % d as usize != 0 {
                        return None;
                    }
                    let lead = w.coeff(e);
                    let root = rational_root(&lead, d)?;
                    let unit = w.shift_down(e).ok()?.scale(&(Rational::one() / &lead));
                    let u = unit.nth_root(d).ok()?.scale(&root);
                    let k = e / d as usize;
                    let mut coeffs = vec![Rational::zero(); k];
                    coeffs.extend(u.coeffs().iter().cloned());
                    let ord = u.order() + k;
                    TruncSeries::from_coeffs(coeffs, ord)
                }
            }
        }
        StepKind::Newton => {
            let dr = r.differentiate(v);
            let mut arc = known(series);
            arc[v] = TruncSeries::constant(center.clone(), order);
            let c0: Vec<Rational> = arc.iter().map(|s| s.coeff(0)).collect();
            if !r.eval(&c0).is_zero() || dr.eval(&c0).is_zero() {
                return None;
            }
            let mut iters = 0;
            loop {
                let f = r.eval_series(&arc);
                if f.is_zero() || iters > 12 {
                    break;
                }
                let df = dr.eval_series(&arc);
                let delta = f.mul(&df.inverse().ok()?);
                arc[v] = arc[v].sub(&delta);
                iters += 1;
            }
            arc[v].clone()
        }
    };
    if sol.coeff(0) != *center {
        return None;
    }
    series[v] = Some(sol);
    Some(())
}

/// Samples up to `opts.count` distinct certified arcs through `opts.center`.
///
/// `fixed` pre-assigns series to some variables (used to find arcs with a
/// prescribed parameter part).
pub fn sample_arcs_with(
    ctx: &RingContext,
    opts: &ArcOptions,
    parametrization: Option<&Parametrization>,
    user: &[CurveArc],
    fixed: &[Option<TruncSeries>],
) -> Result<Vec<CurveArc>> {
    let n = ctx.nvars();
    if opts.center.len() != n {
        return Err(Error::Dimension(format!("arc center has {} coordinates, ring has {n}", opts.center.len())));
    }
    let fixed: Vec<Option<TruncSeries>> = if fixed.is_empty() { vec![None; n] } else { fixed.to_vec() };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out: Vec<CurveArc> = Vec::new();
    let mut seen: BTreeSet<Vec<Vec<String>>> = BTreeSet::new();
    let mut push = |arc: CurveArc, out: &mut Vec<CurveArc>| {
        if arc.is_constant() || arc.center() != opts.center {
            return;
        }
        let key: Vec<Vec<String>> = arc.series().iter().map(|s| s.to_strings()).collect();
        if seen.insert(key) {
            out.push(arc);
        }
    };
    for a in user {
        if a.series().len() == n {
            push(a.clone(), &mut out);
        }
    }
    let order = working_order(opts.truncation);
    let finish = |s: Vec<TruncSeries>, m: ArcMethod| -> Option<CurveArc> {
        let s: Vec<TruncSeries> = s.into_iter().map(|x| x.truncate(opts.truncation)).collect();
        if s.iter().any(|x| x.order() < opts.truncation) {
            return None;
        }
        CurveArc::new(ctx, s, m).ok()
    };
    let attempts = opts.count * 24 + 64;
    if let Some(par) = parametrization {
        let k = par.params.len();
        for _ in 0..attempts {
            if out.len() >= opts.count {
                break;
            }
            let ps: Vec<TruncSeries> = (0..k).map(|i| random_moving(&mut rng, &par.center[i], opts.degree_budget, order)).collect();
            let s: Vec<TruncSeries> = par.images.iter().map(|im| im.eval_series(&ps)).collect();
            if s.iter().zip(&fixed).any(|(x, f)| f.as_ref().is_some_and(|f| f.truncate(opts.truncation) != x.truncate(opts.truncation))) {
                continue;
            }
            if let Some(a) = finish(s, ArcMethod::Parametrization) {
                push(a, &mut out);
            }
        }
        if out.len() >= opts.count.min(1) && ctx.relations().is_empty() {
            return Ok(out);
        }
    }
    if ctx.relations().is_empty() {
        // coordinate axes first
        for i in 0..n {
            if out.len() >= opts.count || fixed[i].is_some() {
                continue;
            }
            let s: Vec<TruncSeries> = (0..n)
                .map(|j| match &fixed[j] {
                    Some(f) => f.clone(),
                    None if j == i => TruncSeries::constant(opts.center[j].clone(), order).add(&TruncSeries::t(order)),
                    None => TruncSeries::constant(opts.center[j].clone(), order),
                })
                .collect();
            if let Some(a) = finish(s, ArcMethod::Ambient) {
                push(a, &mut out);
            }
        }
        for _ in 0..attempts {
            if out.len() >= opts.count {
                break;
            }
            let s: Vec<TruncSeries> = (0..n)
                .map(|i| match &fixed[i] {
                    Some(f) => f.clone(),
                    None => random_component(&mut rng, &opts.center[i], opts.degree_budget, order),
                })
                .collect();
            if let Some(a) = finish(s, ArcMethod::Ambient) {
                push(a, &mut out);
            }
        }
        return Ok(out);
    }
    let is_fixed: Vec<bool> = fixed.iter().map(Option::is_some).collect();
    let all_plans = plans(ctx.relations(), n, &is_fixed);
    if all_plans.is_empty() && out.is_empty() && parametrization.is_none() {
        return Err(Error::NoArcStrategy(
            "no relation can be solved for a variable and no arcs were supplied".into(),
        ));
    }
    for attempt in 0..attempts {
        if out.len() >= opts.count || all_plans.is_empty() {
            break;
        }
        let plan = &all_plans[attempt % all_plans.len()];
        let solved: Vec<usize> = plan.iter().map(|s| s.var).collect();
        let mut series: Vec<Option<TruncSeries>> = (0..n)
            .map(|i| {
                if let Some(f) = &fixed[i] {
                    Some(f.clone())
                } else if solved.contains(&i) {
                    None
                } else {
                    Some(random_component(&mut rng, &opts.center[i], opts.degree_budget, order))
                }
            })
            .collect();
        let mut ok = true;
        for step in plan {
            if run_step(step, &ctx.relations()[step.rel], &mut series, &opts.center[step.var], order).is_none() {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let s: Vec<TruncSeries> = series.into_iter().map(|x| x.unwrap()).collect();
        if let Some(a) = finish(s, ArcMethod::Solved) {
            push(a, &mut out);
        }
    }
    if out.is_empty() && parametrization.is_none() && user.is_empty() && fixed.iter().all(Option::is_none) {
        return Err(Error::NoArcStrategy("arc solving produced no certified arc".into()));
    }
    Ok(out)
}

pub fn sample_arcs(
    ctx: &RingContext,
    opts: &ArcOptions,
    parametrization: Option<&Parametrization>,
    user: &[CurveArc],
) -> Result<Vec<CurveArc>> {
    sample_arcs_with(ctx, opts, parametrization, user, &[])
}

/// Arc on the product built from arcs on the two factors.
pub fn pair_arc(pctx: &ProductRingContext, a: &CurveArc, b: &CurveArc) -> Result<CurveArc> {
    let n = pctx.context().nvars();
    let base = pctx.base().nvars();
    let trunc = a.truncation().min(b.truncation());
    let mut s = vec![TruncSeries::zero(trunc); n];
    for v in 0..base {
        // pi1/pi2 are variable maps; read them back through images of the variable
        let x = pctx.base().var(v);
        let i1 = first_var(&pctx.pi1(&x));
        let i2 = first_var(&pctx.pi2(&x));
        if i1 == i2 && a.series()[v].truncate(trunc) != b.series()[v].truncate(trunc) {
            return Err(Error::InvalidArgument("arcs disagree on a shared variable".into()));
        }
        s[i1] = a.series()[v].truncate(trunc);
        s[i2] = b.series()[v].truncate(trunc);
    }
    CurveArc::new(pctx.context(), s, ArcMethod::Paired)
}

fn first_var(p: &Poly) -> usize {
    p.vars_used().iter().position(|&u| u).expect("variable image")
}

/// Arcs on `X×X` or `X×_Y X` through `(x, x')` built from arcs on `X`:
/// diagonal pairs, pairs with the second arc on the zero section over the
/// same parameter arc, pairs sharing parameters, and fiber mates found by
/// solving with the parameters held fixed.
pub fn sample_pair_arcs(
    pctx: &ProductRingContext,
    base_arcs_1: &[CurveArc],
    base_arcs_2: &[CurveArc],
    opts: &ArcOptions,
    second_center: &[Rational],
) -> Result<Vec<CurveArc>> {
    let base = pctx.base();
    let shared: Vec<usize> = (0..base.nvars()).filter(|v| !pctx.doubled_vars().contains(v)).collect();
    let mut out: Vec<CurveArc> = Vec::new();
    let mut seen: BTreeSet<Vec<Vec<String>>> = BTreeSet::new();
    let mut push = |a: CurveArc, out: &mut Vec<CurveArc>| {
        let key: Vec<Vec<String>> = a.series().iter().map(|s| s.to_strings()).collect();
        if !a.is_constant() && seen.insert(key) {
            out.push(a);
        }
    };
    let same_center = base_arcs_1.first().map(|a| a.center()) == Some(second_center.to_vec());
    for (k, a) in base_arcs_1.iter().enumerate() {
        if out.len() >= opts.count {
            break;
        }
        // second arc through the second center over the same parameter arc
        let mut fixed: Vec<Option<TruncSeries>> = vec![None; base.nvars()];
        for &v in &shared {
            fixed[v] = Some(a.series()[v].clone());
        }
        // zero-section style: doubled coordinates constant
        let flat: Vec<TruncSeries> = (0..base.nvars())
            .map(|v| fixed[v].clone().unwrap_or_else(|| TruncSeries::constant(second_center[v].clone(), a.truncation())))
            .collect();
        if let Ok(b) = CurveArc::new(base, flat, ArcMethod::Paired) {
            if let Ok(p) = pair_arc(pctx, a, &b) {
                push(p, &mut out);
            }
            if let Ok(p) = pair_arc(pctx, &b, a) {
                push(p, &mut out);
            }
        }
        if same_center {
            if let Ok(p) = pair_arc(pctx, a, a) {
                push(p, &mut out);
            }
        }
        for b in base_arcs_2 {
            if let Ok(p) = pair_arc(pctx, a, b) {
                push(p, &mut out);
            }
        }
        let mut o = opts.clone();
        o.center = second_center.to_vec();
        o.count = 2;
        o.seed = opts.seed.wrapping_add(1 + k as u64);
        if let Ok(mates) = sample_arcs_with(base, &o, None, &[], &fixed) {
            for b in mates {
                if let Ok(p) = pair_arc(pctx, a, &b) {
                    push(p, &mut out);
                }
            }
        }
    }
    out.truncate(opts.count.max(1) * 2);
    Ok(out)
}
