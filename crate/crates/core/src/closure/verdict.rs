//! Verdicts, serializable certificates and their independent verification.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::arc::{parse_rational, ArcData, CurveArc};
use super::dependence::{DependenceCertificate, DependenceData};
use super::pullback::check_witness;
use crate::error::{Error, Result};
use crate::exactalg::{combinations, Poly, PolyMatrix, Rational, TruncSeries};
use crate::groebner::{verify_combination, ModVec};
use crate::modulealg::{generic_rank, ModulePresentation, RingContext, VarRole};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Holds => "Holds",
            Status::Fails => "Fails",
            Status::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// The membership question, in rendered form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Query {
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    pub target: Vec<String>,
    pub generators: Vec<Vec<String>>,
    pub point: Vec<String>,
}

impl Query {
    pub fn new(ctx: &RingContext, target: &[Poly], gens: &[ModVec], point: &[Rational]) -> Self {
        Query {
            vars: ctx.names().to_vec(),
            relations: ctx.relations().iter().map(|r| ctx.render(r)).collect(),
            target: target.iter().map(|p| ctx.render(p)).collect(),
            generators: gens.iter().map(|g| g.iter().map(|p| ctx.render(p)).collect()).collect(),
            point: point.iter().map(|x| x.to_string()).collect(),
        }
    }

    /// Ring, target, generators and point parsed back.
    pub fn parse(&self) -> Result<(RingContext, ModVec, Vec<ModVec>, Vec<Rational>)> {
        let mut ctx = RingContext::from_parts(self.vars.clone(), vec![VarRole::Fiber; self.vars.len()])?;
        let rels = self.relations.iter().map(|r| ctx.parse(r)).collect::<Result<Vec<_>>>()?;
        ctx.set_relations(rels)?;
        let target = self.target.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?;
        let gens = self
            .generators
            .iter()
            .map(|g| g.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let point = self.point.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        if point.len() != ctx.nvars() {
            return Err(Error::Dimension("point does not match the variables".into()));
        }
        if gens.iter().any(|g| g.len() != target.len()) {
            return Err(Error::Dimension("generators and target have different ranks".into()));
        }
        Ok((ctx, target, gens, point))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Bounds {
    pub max_m: u32,
    pub max_deg: u32,
    pub max_unknowns: usize,
    pub arc_count: usize,
    pub degree_budget: u32,
    pub truncation: usize,
    pub seed: u64,
    pub arcs_tested: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// The target is zero.
    Zero,
    /// `unit * target = Σ cofactors_j gens_j` modulo the relations, with
    /// `unit` nonzero at the point.
    Plain { unit: String, cofactors: Vec<String> },
    /// Monomial target inside the Newton polyhedron: `Σ λ_j e_j <= alpha`.
    Newton { exponents: Vec<Vec<u32>>, alpha: Vec<u32>, lambda: Vec<String> },
    /// Monomial target below the Newton polyhedron along `x_i = t^(W_i)`.
    Separation { weights: Vec<String>, arc_exponents: Vec<u32> },
    Dependence(DependenceData),
    /// Refuting arc with a witness row `λ`: `val(λ·g_j∘φ) >= bound` for
    /// every generator while `val(λ·h∘φ) = target_valuation < bound`.
    Arc { arc: ArcData, witness: Vec<Vec<String>>, bound: usize, target_valuation: usize },
    /// Reduction to ideals of `k x k` minors; `ideal` generates `J_k(M)`.
    Minors { k: usize, ideal: Vec<String>, verdicts: Vec<ClosureVerdict> },
    Exhausted { reasons: Vec<String> },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Zero => "zero",
            Certificate::Plain { .. } => "plain",
            Certificate::Newton { .. } => "newton",
            Certificate::Separation { .. } => "separation",
            Certificate::Dependence(_) => "dependence",
            Certificate::Arc { .. } => "arc",
            Certificate::Minors { .. } => "minors",
            Certificate::Exhausted { .. } => "exhausted",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClosureVerdict {
    pub status: Status,
    pub engine: String,
    pub query: Query,
    pub certificate: Certificate,
    pub bounds: Bounds,
    pub model: String,
}

pub(crate) fn model_for(status: Status) -> String {
    match status {
        Status::Holds => "holds in the polynomial model",
        Status::Fails => "refuted by an analytic arc",
        Status::Inconclusive => "bounded search exhausted",
    }
    .to_string()
}

fn series_strings(s: &TruncSeries) -> Vec<String> {
    let mut v = s.to_strings();
    while v.last().is_some_and(|x| x == "0") {
        v.pop();
    }
    v
}

pub(crate) fn witness_data(w: &[TruncSeries]) -> Vec<Vec<String>> {
    w.iter().map(series_strings).collect()
}

fn exps_of(p: &Poly) -> Option<Vec<u32>> {
    if p.is_monomial() {
        p.terms().next().map(|(m, _)| m.exps().to_vec())
    } else {
        None
    }
}

fn dot(w: &[u32], e: &[u32]) -> u64 {
    w.iter().zip(e).map(|(&a, &b)| a as u64 * b as u64).sum()
}

/// `k x k` minors of `(h | M)` that use the column `h`.
pub fn minors_with_target(h: &[Poly], gens: &[ModVec], k: usize) -> Result<Vec<Poly>> {
    let p = h.len();
    let nvars = h.first().map(Poly::nvars).unwrap_or(0);
    let mut cols = vec![h.to_vec()];
    cols.extend(gens.iter().cloned());
    let mat = PolyMatrix::from_columns(p, nvars, &cols)?;
    let mut out = Vec::new();
    if k == 0 || k > p || k > cols.len() {
        return Ok(out);
    }
    for rs in combinations(p, k) {
        for rest in combinations(gens.len(), k - 1) {
            let cs: Vec<usize> = std::iter::once(0).chain(rest.into_iter().map(|c| c + 1)).collect();
            let d = mat.submatrix(&rs, &cs).determinant()?;
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Nonzero `k x k` minors of the generator matrix; empty when `k` exceeds
/// its size.
pub fn module_minors(ctx: &RingContext, gens: &[ModVec], p: usize, k: usize) -> Result<Vec<Poly>> {
    if k == 0 || k > p || k > gens.len() {
        return Ok(Vec::new());
    }
    let m = ModulePresentation::new(ctx.clone(), p, gens.to_vec())?;
    crate::modulealg::minors(&m, k)
}

/// Re-checks a verdict from its serialized query and certificate alone.
/// `Ok(false)` means the certificate does not establish the status.
pub fn verify_verdict(v: &ClosureVerdict) -> Result<bool> {
    let (ctx, h, gens, point) = v.query.parse()?;
    let nvars = ctx.nvars();
    ctx.check_point(&point)?;
    let ok = match (&v.status, &v.certificate) {
        (Status::Holds, Certificate::Zero) => h.iter().all(Poly::is_zero),
        (Status::Holds, Certificate::Plain { unit, cofactors }) => {
            let u = ctx.parse(unit)?;
            let cof = cofactors.iter().map(|c| ctx.parse(c)).collect::<Result<Vec<_>>>()?;
            let uh: Vec<Poly> = h.iter().map(|x| &u * x).collect();
            !u.eval(&point).is_zero()
                && cof.len() == gens.len()
                && verify_combination(nvars, &uh, &gens, &cof, ctx.relations())?
        }
        (Status::Holds, Certificate::Newton { exponents, alpha, lambda }) => {
            let lam = lambda.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            let gexps: Option<Vec<Vec<u32>>> = gens.iter().map(|g| exps_of(&g[0])).collect();
            h.len() == 1
                && ctx.relations().is_empty()
                && point.iter().all(Zero::is_zero)
                && exps_of(&h[0]).as_ref() == Some(alpha)
                && gexps.as_ref() == Some(exponents)
                && lam.len() == exponents.len()
                && lam.iter().all(|l| !l.is_negative())
                && lam.iter().sum::<Rational>() == Rational::one()
                && (0..nvars).all(|i| {
                    let s: Rational = lam.iter().zip(exponents).map(|(l, e)| l * Rational::from_integer(e[i].into())).sum();
                    s <= Rational::from_integer(alpha[i].into())
                })
        }
        (Status::Fails, Certificate::Separation { weights: _, arc_exponents }) => {
            let gexps: Option<Vec<Vec<u32>>> = gens.iter().map(|g| exps_of(&g[0])).collect();
            match (exps_of(&h[0]), gexps) {
                (Some(alpha), Some(ge)) => {
                    h.len() == 1
                        && ctx.relations().is_empty()
                        && point.iter().all(Zero::is_zero)
                        && arc_exponents.len() == nvars
                        && arc_exponents.iter().all(|&w| w > 0)
                        && ge.iter().all(|e| dot(arc_exponents, e) > dot(arc_exponents, &alpha))
                }
                _ => false,
            }
        }
        (Status::Holds, Certificate::Dependence(d)) => {
            let cert = DependenceCertificate::from_data(d, ctx.names())?;
            let g: Option<Vec<Poly>> = gens.iter().map(|g| (g.len() == 1).then(|| g[0].clone())).collect();
            match g {
                Some(g) if h.len() == 1 => cert.verify(&h[0], &g, ctx.relations())?,
                _ => false,
            }
        }
        (Status::Fails, Certificate::Arc { arc, witness, bound, target_valuation }) => {
            let a = CurveArc::from_data(ctx.relations(), nvars, arc)?;
            let w = witness
                .iter()
                .map(|c| {
                    let coeffs = c.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                    Ok(TruncSeries::from_coeffs(coeffs, a.truncation()))
                })
                .collect::<Result<Vec<_>>>()?;
            a.center() == point
                && !a.is_constant()
                && check_witness(&h, &gens, &a, &w, *bound) == Some(*target_valuation)
        }
        (status @ (Status::Holds | Status::Fails), Certificate::Minors { k, ideal, verdicts }) => {
            let p = h.len();
            let jk = module_minors(&ctx, &gens, p, *k)?;
            let rendered: Vec<String> = jk.iter().map(|m| ctx.render(m)).collect();
            let with_h = minors_with_target(&h, &gens, *k)?;
            let mut full = gens.clone();
            full.insert(0, h.clone());
            let rank = generic_rank(&ModulePresentation::new(ctx.clone(), p, full)?)?;
            let nested_ok = |nv: &ClosureVerdict| -> Result<bool> {
                Ok(nv.query.vars == v.query.vars
                    && nv.query.relations == v.query.relations
                    && nv.query.point == v.query.point
                    && nv.query.generators == rendered.iter().map(|s| vec![s.clone()]).collect::<Vec<_>>()
                    && nv.query.target.len() == 1
                    && with_h.iter().any(|m| ctx.render(m) == nv.query.target[0])
                    && verify_verdict(nv)?)
            };
            let mut good = *k >= 1 && rank == *k && ideal == &rendered;
            if good {
                match status {
                    Status::Holds => {
                        for m in &with_h {
                            let r = ctx.render(m);
                            let mut found = false;
                            for nv in verdicts.iter().filter(|nv| nv.query.target.first() == Some(&r)) {
                                if nv.status == Status::Holds && nested_ok(nv)? {
                                    found = true;
                                    break;
                                }
                            }
                            good &= found;
                        }
                    }
                    _ => {
                        let mut found = false;
                        for nv in verdicts.iter().filter(|nv| nv.status == Status::Fails) {
                            if nested_ok(nv)? {
                                found = true;
                                break;
                            }
                        }
                        good &= found;
                    }
                }
            }
            good
        }
        (Status::Inconclusive, Certificate::Exhausted { reasons }) => !reasons.is_empty(),
        _ => false,
    };
    Ok(ok)
}
