use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{render_series, ts_names, CurveFamilyParam};
use crate::closure::{ClosureOptions, Parametrization, Status};
use crate::equising::{doubled_condition, Condition, ConditionReport};
use crate::error::{Error, Result};
use crate::exactalg::{rat, BiSeries, Poly, PolyMatrix, Rational};
use crate::groebner::{eliminate, ideal_membership, Membership};
use crate::modulealg::{ModulePresentation, RingContext};

/// Generators of the ideal of the image of a polynomial parametrization,
/// over the ring `z1..zn` (fiber) and `t` (parameter).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Implicitization {
    pub ctx: RingContext,
    pub generators: Vec<Poly>,
}

impl Implicitization {
    pub fn render(&self) -> Vec<String> {
        self.generators.iter().map(|g| self.ctx.render(g)).collect()
    }

    /// Index of `t` in [`Self::ctx`].
    pub fn t(&self) -> usize {
        self.ctx.nvars() - 1
    }
}

fn curve_ring(n: usize) -> Result<RingContext> {
    let z: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
    let z: Vec<&str> = z.iter().map(String::as_str).collect();
    RingContext::new(&z, &["t"])
}

/// `p(F_1, …, F_n, t)` for `p` over the curve ring.
fn compose_series(p: &Poly, coords: &[BiSeries], order: usize) -> BiSeries {
    let mut images: Vec<BiSeries> = coords.iter().map(|c| c.truncate(order)).collect();
    images.push(BiSeries::t(order));
    let mut powers: Vec<Vec<BiSeries>> = vec![vec![BiSeries::constant(Rational::one(), order)]; images.len()];
    let mut acc = BiSeries::zero(order);
    for (m, c) in p.terms() {
        let mut term = BiSeries::constant(c.clone(), order);
        for (v, &e) in m.exps().iter().enumerate() {
            while powers[v].len() <= e as usize {
                let next = powers[v].last().unwrap().mul(&images[v]);
                powers[v].push(next);
            }
            if e > 0 {
                term = term.mul(&powers[v][e as usize]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Eliminates `s` from `(z_i - F_i(t, s))`.
pub fn implicitize(param: &CurveFamilyParam) -> Result<Implicitization> {
    let polys = param
        .polys()
        .ok_or_else(|| Error::InvalidArgument("implicitization needs polynomial coordinates".into()))?;
    let n = polys.len();
    let ctx = curve_ring(n)?;
    // variables z1..zn, t, s
    let total = n + 2;
    let gens: Vec<Poly> = polys
        .iter()
        .enumerate()
        .map(|(i, f)| &Poly::var(total, i) - &f.remap(&[n, n + 1], total))
        .collect();
    let keep: Vec<usize> = (0..=n).collect();
    let mut generators = eliminate(total, &gens, &[n + 1])?
        .iter()
        .map(|g| g.restrict(&keep).map(|g| g.primitive()))
        .collect::<Result<Vec<_>>>()?;
    generators.sort_by_key(|g| (g.total_degree(), g.num_terms()));
    generators.dedup();
    let mut images: Vec<Poly> = polys.to_vec();
    images.push(Poly::var(2, 0));
    for g in &generators {
        if !g.compose(&images, 2).is_zero() {
            return Err(Error::Internal(format!("{} does not vanish on the parametrization", ctx.render(g))));
        }
    }
    let ctx = ctx.with_relations(generators.clone())?;
    Ok(Implicitization { ctx, generators })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CramerFraction {
    pub numerator: Poly,
    pub denominator: Poly,
}

impl CramerFraction {
    pub fn render(&self, ctx: &RingContext) -> String {
        if self.denominator.is_one() {
            ctx.render(&self.numerator)
        } else {
            format!("({})/({})", ctx.render(&self.numerator), ctx.render(&self.denominator))
        }
    }
}

/// Division by `d` over `ctx`'s quotient ring, when it is exact.
fn divide_on(ctx: &RingContext, num: &Poly, d: &Poly) -> Result<Option<Poly>> {
    if let Some(q) = num.div_exact(d) {
        return Ok(Some(q));
    }
    if ctx.relations().is_empty() {
        return Ok(None);
    }
    match ideal_membership(ctx.nvars(), num, std::slice::from_ref(d), ctx.relations())? {
        Membership::Member { cofactors, .. } => Ok(Some(ctx.reduce(&cofactors[0])?)),
        Membership::NonMember { .. } => Ok(None),
    }
}

/// `c(h)_j = det(Mk with column j replaced by h) / det(Mk)`.
pub fn cramer_field(ctx: &RingContext, mk: &PolyMatrix, h: &[Poly]) -> Result<Vec<CramerFraction>> {
    let k = mk.rows();
    if mk.cols() != k || h.len() != k {
        return Err(Error::Dimension(format!("need a square matrix and a vector of length {k}")));
    }
    let det = mk.determinant()?;
    if ctx.reduce(&det)?.is_zero() {
        return Err(Error::InvalidArgument("the matrix is singular on X".into()));
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut cols = mk.columns();
        cols[j] = h.to_vec();
        let num = PolyMatrix::from_columns(k, ctx.nvars(), &cols)?.determinant()?;
        out.push(match divide_on(ctx, &num, &det)? {
            Some(q) => CramerFraction { numerator: q, denominator: ctx.one() },
            None => CramerFraction { numerator: num, denominator: det.clone() },
        });
    }
    Ok(out)
}

/// `[Mk]·c = h` with denominators cleared, modulo the relations of `ctx`.
pub fn verify_cramer(ctx: &RingContext, mk: &PolyMatrix, h: &[Poly], c: &[CramerFraction]) -> Result<bool> {
    let k = mk.rows();
    if c.len() != k || h.len() != k {
        return Ok(false);
    }
    let all = c.iter().fold(ctx.one(), |a, f| &a * &f.denominator);
    for (i, hi) in h.iter().enumerate() {
        let mut lhs = ctx.zero();
        for (j, f) in c.iter().enumerate() {
            let others = c.iter().enumerate().filter(|&(l, _)| l != j).fold(ctx.one(), |a, (_, g)| &a * &g.denominator);
            lhs = &lhs + &(&(mk.get(i, j) * &f.numerator) * &others);
        }
        if !ctx.reduce(&(&lhs - &(&all * hi)))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SeriesIdentity {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

impl SeriesIdentity {
    fn new(identity: String, lhs: &BiSeries, rhs: &BiSeries) -> Self {
        let n = lhs.order().min(rhs.order());
        let (l, r) = (lhs.truncate(n), rhs.truncate(n));
        SeriesIdentity { identity, lhs: render_series(&l), rhs: render_series(&r), holds: l == r }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ChainRuleReport {
    pub truncation: usize,
    /// `G∘F = 0` to truncation.
    pub vanishes: bool,
    pub cramer: Vec<String>,
    /// `c(∂G/∂t)∘F = -∂F_j/∂t`, one per `j < n`.
    pub velocity: Vec<SeriesIdentity>,
    /// `(∂G/∂z_n∘F)·∂F_n/∂s = -[DG_{n-1}∘F]·(∂F_j/∂s)`, one per row of `G`.
    pub reduction: Vec<SeriesIdentity>,
    /// `(∂F_j/∂s)/(p s^{p-1})`, present when each has nonnegative `s`-order.
    pub quotients: Option<Vec<String>>,
    pub ok: bool,
}

/// Exact derivative of a coordinate when it is polynomial.
fn coordinate_partial(param: &CurveFamilyParam, j: usize, var: usize) -> BiSeries {
    match param.polys() {
        Some(p) => BiSeries::from_poly(&p[j].differentiate(var), param.truncation()),
        None if var == 0 => param.coords()[j].partial_t(),
        None => param.coords()[j].partial_s(),
    }
}

/// Checks the chain-rule identities for `G` along the parametrization.
/// A failure after `G∘F = 0` has been confirmed is an internal error.
pub fn chain_rule_check(param: &CurveFamilyParam, imp: &Implicitization) -> Result<ChainRuleReport> {
    let ctx = &imp.ctx;
    let n = param.n();
    let t = imp.t();
    let q = imp.generators.len();
    let order = param.truncation();
    let coords = param.coords();
    if ctx.nvars() != n + 1 {
        return Err(Error::RingMismatch(format!("G must be written over {} variables", n + 1)));
    }
    if n < 2 {
        return Err(Error::InvalidArgument("the chain-rule check needs n >= 2".into()));
    }
    let g = &imp.generators;
    let vanishes = g.iter().all(|gk| compose_series(gk, coords, order).is_zero());
    let mut report = ChainRuleReport {
        truncation: order,
        vanishes,
        cramer: Vec::new(),
        velocity: Vec::new(),
        reduction: Vec::new(),
        quotients: None,
        ok: false,
    };
    if !vanishes {
        return Ok(report);
    }
    let along = |p: &Poly| compose_series(p, coords, order);
    // velocity part, through the Cramer field when DG_{n-1} is square
    if q == n - 1 {
        let cols: Vec<Vec<Poly>> = (0..n - 1).map(|j| g.iter().map(|gk| gk.differentiate(j)).collect()).collect();
        let mk = PolyMatrix::from_columns(q, ctx.nvars(), &cols)?;
        let h: Vec<Poly> = g.iter().map(|gk| gk.differentiate(t)).collect();
        let c = cramer_field(ctx, &mk, &h)?;
        if !verify_cramer(ctx, &mk, &h, &c)? {
            return Err(Error::Internal("Cramer field does not solve its system".into()));
        }
        report.cramer = c.iter().map(|f| f.render(ctx)).collect();
        for (j, f) in c.iter().enumerate() {
            let dft = coordinate_partial(param, j, 0);
            let name = &ctx.names()[j];
            report.velocity.push(if f.denominator.is_one() {
                SeriesIdentity::new(format!("c_{}∘F = -d({name}∘F)/dt", j + 1), &along(&f.numerator), &dft.neg())
            } else {
                SeriesIdentity::new(
                    format!("num_{}∘F = -(den∘F)·d({name}∘F)/dt", j + 1),
                    &along(&f.numerator),
                    &along(&f.denominator).mul(&dft).neg(),
                )
            });
        }
    } else {
        // no square block; check the uncleared chain rule row by row
        for (k, gk) in g.iter().enumerate() {
            let mut rhs = BiSeries::zero(order);
            for j in 0..n - 1 {
                rhs = rhs.add(&along(&gk.differentiate(j)).mul(&coordinate_partial(param, j, 0)));
            }
            report.velocity.push(SeriesIdentity::new(
                format!("dG_{}/dt∘F = -[DG_{{n-1}}∘F]·dF/dt", k + 1),
                &along(&gk.differentiate(t)),
                &rhs.neg(),
            ));
        }
    }
    let dfn = coordinate_partial(param, n - 1, 1);
    for (k, gk) in g.iter().enumerate() {
        let mut rhs = BiSeries::zero(order);
        for j in 0..n - 1 {
            rhs = rhs.add(&along(&gk.differentiate(j)).mul(&coordinate_partial(param, j, 1)));
        }
        report.reduction.push(SeriesIdentity::new(
            format!("(dG_{}/dz{n}∘F)·dF_{n}/ds = -[DG_{{n-1}}∘F]·dF/ds", k + 1),
            &along(&gk.differentiate(n - 1)).mul(&dfn),
            &rhs.neg(),
        ));
    }
    if let Some(bad) = report.velocity.iter().chain(&report.reduction).find(|i| !i.holds) {
        return Err(Error::Internal(format!("chain-rule identity failed: {}", bad.identity)));
    }
    if param.check_normal_form().is_ok() {
        let p = param.multiplicity();
        let inv_p = Rational::one() / rat(p as i64);
        report.quotients = (0..n - 1)
            .map(|j| coordinate_partial(param, j, 1).shift_s_down(p - 1).ok().map(|x| render_series(&x.scale(&inv_p))))
            .collect();
    }
    report.ok = report.quotients.is_some();
    Ok(report)
}

/// `(∂G/∂t)_D ∈ closure((DG_{n-1})_D)` over `X ×_Y X` at the origin.
pub fn bilip_verdict(param: &CurveFamilyParam, opts: &ClosureOptions) -> Result<(Implicitization, ConditionReport)> {
    param.check_normal_form()?;
    let n = param.n();
    if n < 2 {
        return Err(Error::InvalidArgument("the bi-Lipschitz test needs n >= 2".into()));
    }
    let imp = implicitize(param)?;
    let ctx = &imp.ctx;
    let t = imp.t();
    let g = &imp.generators;
    let cols: Vec<Vec<Poly>> = (0..n - 1).map(|j| g.iter().map(|gk| gk.differentiate(j)).collect()).collect();
    let module = ModulePresentation::new(ctx.clone(), g.len(), cols)?;
    let targets = vec![("dG/dt".to_string(), g.iter().map(|gk| gk.differentiate(t)).collect::<Vec<_>>())];
    let mut o = opts.clone();
    if o.parametrization.is_none() {
        let polys = param.polys().unwrap_or_default();
        let mut images = polys.to_vec();
        images.push(Poly::var(2, 0));
        o.parametrization = Some(Parametrization { params: ts_names(), images, center: vec![rat(0), rat(0)] });
    }
    let mut report = doubled_condition(
        Condition::Bilip,
        ctx,
        &targets,
        &module,
        None,
        &o,
        vec![format!("G = {}", imp.render().join(", "))],
    )?;
    if report.aggregate == Status::Holds {
        report.notes.push(
            "the t-partials of the parametrization are Lipschitz rel Y, so the family is bi-Lipschitz \
             equisingular (metric bounds are not verified independently)"
                .into(),
        );
    }
    Ok((imp, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::verify_verdict;
    use crate::equising::Evidence;

    fn param(src: &[&str], n: usize) -> CurveFamilyParam {
        let polys = src.iter().map(|s| Poly::parse(s, &ts_names()).unwrap()).collect();
        CurveFamilyParam::from_polys(polys, n).unwrap()
    }

    fn same_up_to_scalar(a: &Poly, b: &Poly) -> bool {
        a.primitive() == b.primitive()
    }

    #[test]
    fn implicitization_examples() {
        let imp = implicitize(&param(&["s^3 + t*s^4", "s^2"], 50)).unwrap();
        assert_eq!(imp.generators.len(), 1);
        assert!(same_up_to_scalar(&imp.generators[0], &imp.ctx.parse("(z1 - t*z2^2)^2 - z2^3").unwrap()));
        let imp = implicitize(&param(&["s^3", "s^2"], 20)).unwrap();
        assert!(same_up_to_scalar(&imp.generators[0], &imp.ctx.parse("z1^2 - z2^3").unwrap()));
        let f = CurveFamilyParam::from_polys(vec![Poly::parse("s", &ts_names()).unwrap(), Poly::zero(2)], 10).unwrap();
        let imp = implicitize(&f).unwrap();
        assert_eq!(imp.render(), vec!["z2"]);
        let series = CurveFamilyParam::new(vec![BiSeries::s(5)], 5).unwrap();
        assert!(implicitize(&series).is_err());
    }

    #[test]
    fn cramer_examples() {
        let ctx = curve_ring(2).unwrap();
        let g = ctx.parse("(z1 - t*z2^2)^2 - z2^3").unwrap();
        let ctx = ctx.with_relations(vec![g.clone()]).unwrap();
        let mk = PolyMatrix::from_columns(1, 3, &[vec![g.differentiate(0)]]).unwrap();
        let h = vec![g.differentiate(2)];
        let c = cramer_field(&ctx, &mk, &h).unwrap();
        assert_eq!(c[0].numerator, ctx.parse("-z2^2").unwrap());
        assert!(c[0].denominator.is_one());
        assert!(verify_cramer(&ctx, &mk, &h, &c).unwrap());
        let c = cramer_field(&ctx, &mk, &[ctx.zero()]).unwrap();
        assert!(c[0].numerator.is_zero());
        let id = PolyMatrix::identity(2, 3);
        let h = vec![ctx.parse("z1 + t").unwrap(), ctx.parse("z2^2").unwrap()];
        let c = cramer_field(&ctx, &id, &h).unwrap();
        assert_eq!(c.iter().map(|f| f.numerator.clone()).collect::<Vec<_>>(), h);
        let zero = PolyMatrix::zero(1, 1, 3);
        assert!(cramer_field(&ctx, &zero, &[ctx.one()]).is_err());
        // inexact division keeps the fraction
        let mk = PolyMatrix::from_columns(1, 3, &[vec![ctx.parse("z1").unwrap()]]).unwrap();
        let c = cramer_field(&ctx, &mk, &[ctx.parse("z2").unwrap()]).unwrap();
        assert_eq!(c[0].render(&ctx), "(z2)/(z1)");
        assert!(verify_cramer(&ctx, &mk, &[ctx.parse("z2").unwrap()], &c).unwrap());
    }

    #[test]
    fn chain_rule_on_the_fixture() {
        let f = param(&["s^3 + t*s^4", "s^2"], 50);
        let imp = implicitize(&f).unwrap();
        let r = chain_rule_check(&f, &imp).unwrap();
        assert!(r.vanishes && r.ok);
        assert_eq!(r.cramer, vec!["-z2^2"]);
        assert!(r.velocity[0].lhs.starts_with("-s^4 + O("));
        assert_eq!(r.velocity[0].lhs, r.velocity[0].rhs);
        assert_eq!(r.quotients.as_ref().unwrap()[0], "2*t*s^2 + 3/2*s + O(50)");
    }

    #[test]
    fn chain_rule_for_a_product_family() {
        let f = param(&["s^3", "s^2"], 30);
        let imp = implicitize(&f).unwrap();
        let r = chain_rule_check(&f, &imp).unwrap();
        assert!(r.ok);
        assert!(r.velocity[0].lhs.starts_with("0 + "));
        assert_eq!(r.velocity[0].lhs, r.velocity[0].rhs);
    }

    #[test]
    fn perturbed_g_is_flagged() {
        let f = param(&["s^3 + t*s^4", "s^2"], 30);
        let mut imp = implicitize(&f).unwrap();
        imp.generators[0] = &imp.generators[0] + &imp.ctx.parse("t*z2^3").unwrap();
        let r = chain_rule_check(&f, &imp).unwrap();
        assert!(!r.vanishes && !r.ok);
    }

    fn verified(r: &ConditionReport) {
        assert!(r.verify().unwrap());
        for g in &r.generators {
            if let Evidence::Closure(v) = &g.certificate {
                assert!(verify_verdict(v).unwrap());
            }
        }
    }

    #[test]
    fn bilip_product_and_unit_families() {
        let o = ClosureOptions::default();
        let (_, r) = bilip_verdict(&param(&["s^3", "s^2"], 30), &o).unwrap();
        assert_eq!(r.aggregate, Status::Holds);
        verified(&r);
        let (imp, r) = bilip_verdict(&param(&["s^3 + t*s^3", "s^2"], 30), &o).unwrap();
        assert!(same_up_to_scalar(&imp.generators[0], &imp.ctx.parse("z1^2 - (1 + t)^2*z2^3").unwrap()));
        assert_eq!(r.aggregate, Status::Holds, "{r:#?}");
        verified(&r);
    }
}
