//! Integral-closure membership for ideals and modules.
//!
//! Three engines: the Newton polyhedron for monomial ideals, a bounded search
//! for integral dependence equations, and refutation along sampled arcs. An
//! exhausted search is reported as `Inconclusive`, never as a refutation.

pub mod arc;
pub mod dependence;
pub mod monomial;
pub mod pullback;
pub mod verdict;

use serde::{Deserialize, Serialize};

pub use arc::{pair_arc, sample_arcs, sample_pair_arcs, ArcData, ArcMethod, ArcOptions, CurveArc, Parametrization};
pub use dependence::{dependence_search, DependenceBounds, DependenceCertificate, DependenceOutcome};
pub use monomial::{monomial_closure, newton_test, NewtonTest};
pub use pullback::{arc_pullback_membership, PullbackMembership};
pub use verdict::{verify_verdict, Bounds, Certificate, ClosureVerdict, Query, Status};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rational, DEFAULT_TRUNCATION};
use crate::groebner::{local_membership, LocalMembership, ModVec};
use crate::modulealg::{generic_rank, Ideal, ModulePresentation, RingContext};
use verdict::{minors_with_target, model_for, module_minors, witness_data};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Auto,
    Monomial,
    Dependence,
    Arcs,
    Plain,
}

/// Which closure is asked for. Only the integral closure has an engine.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureKind {
    #[default]
    Integral,
    Strict,
}

#[derive(Clone, Debug)]
pub struct ClosureOptions {
    pub kind: ClosureKind,
    pub strategy: Strategy,
    pub max_m: u32,
    /// `None`: twice the largest input degree.
    pub max_deg: Option<u32>,
    pub max_unknowns: usize,
    pub arc_count: usize,
    pub degree_budget: u32,
    pub truncation: usize,
    pub seed: u64,
    /// Base point; `None` is the origin.
    pub point: Option<Vec<Rational>>,
    /// Extra arcs tried before sampled ones.
    pub arcs: Vec<CurveArc>,
    pub parametrization: Option<Parametrization>,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            kind: ClosureKind::Integral,
            strategy: Strategy::Auto,
            max_m: 4,
            max_deg: None,
            max_unknowns: 4000,
            arc_count: 32,
            degree_budget: 6,
            truncation: DEFAULT_TRUNCATION,
            seed: 0,
            point: None,
            arcs: Vec::new(),
            parametrization: None,
        }
    }
}

struct Run<'a> {
    ctx: &'a RingContext,
    target: ModVec,
    gens: Vec<ModVec>,
    point: Vec<Rational>,
    opts: &'a ClosureOptions,
    bounds: Bounds,
    reasons: Vec<String>,
}

impl<'a> Run<'a> {
    fn new(ctx: &'a RingContext, target: ModVec, gens: Vec<ModVec>, opts: &'a ClosureOptions) -> Result<Self> {
        if opts.kind == ClosureKind::Strict {
            return Err(Error::Unsupported(
                "strict integral closure has no computational characterization here; only the integral closure can be tested".into(),
            ));
        }
        let point = opts.point.clone().unwrap_or_else(|| ctx.origin());
        ctx.check_point(&point)?;
        let p = target.len();
        if let Some(g) = gens.iter().find(|g| g.len() != p) {
            return Err(Error::Dimension(format!("generator of rank {} against a target of rank {p}", g.len())));
        }
        if target.iter().chain(gens.iter().flatten()).any(|x| x.nvars() != ctx.nvars()) {
            return Err(Error::RingMismatch("polynomial over a different ring".into()));
        }
        let max_in = target
            .iter()
            .chain(gens.iter().flatten())
            .chain(ctx.relations())
            .map(Poly::total_degree)
            .max()
            .unwrap_or(1)
            .max(1);
        let bounds = Bounds {
            max_m: opts.max_m,
            max_deg: opts.max_deg.unwrap_or(2 * max_in),
            max_unknowns: opts.max_unknowns,
            arc_count: opts.arc_count,
            degree_budget: opts.degree_budget,
            truncation: opts.truncation,
            seed: opts.seed,
            arcs_tested: 0,
        };
        Ok(Run { ctx, target, gens, point, opts, bounds, reasons: Vec::new() })
    }

    fn verdict(&self, status: Status, engine: &str, certificate: Certificate) -> ClosureVerdict {
        ClosureVerdict {
            status,
            engine: engine.to_string(),
            query: Query::new(self.ctx, &self.target, &self.gens, &self.point),
            certificate,
            bounds: self.bounds.clone(),
            model: model_for(status),
        }
    }

    fn exhausted(&self) -> ClosureVerdict {
        let mut reasons = self.reasons.clone();
        if reasons.is_empty() {
            reasons.push("no engine applied".into());
        }
        self.verdict(Status::Inconclusive, "none", Certificate::Exhausted { reasons })
    }

    /// Swallows resource limits into the reasons list.
    fn soft<T>(&mut self, engine: &str, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(x) => Ok(Some(x)),
            Err(Error::Limit(m)) => {
                self.reasons.push(format!("{engine}: {m}"));
                Ok(None)
            }
            Err(Error::NoArcStrategy(m)) => {
                self.reasons.push(format!("{engine}: {m}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn zero(&self) -> Option<ClosureVerdict> {
        self.target.iter().all(Poly::is_zero).then(|| self.verdict(Status::Holds, "zero", Certificate::Zero))
    }

    fn plain(&mut self) -> Result<Option<ClosureVerdict>> {
        let r = local_membership(self.ctx.nvars(), &self.target, &self.gens, self.ctx.relations(), &self.point);
        match self.soft("plain", r)? {
            Some(LocalMembership::Member { unit, cofactors }) => {
                let cert = Certificate::Plain {
                    unit: self.ctx.render(&unit),
                    cofactors: cofactors.iter().map(|c| self.ctx.render(c)).collect(),
                };
                Ok(Some(self.verdict(Status::Holds, "plain", cert)))
            }
            Some(LocalMembership::NonMember { .. }) => {
                self.reasons.push("plain: not a member of the module itself".into());
                Ok(None)
            }
            None => Ok(None),
        }
    }

    fn monomial(&mut self) -> Result<Option<ClosureVerdict>> {
        let applicable = self.target.len() == 1
            && self.ctx.relations().is_empty()
            && self.point.iter().all(num_traits::Zero::is_zero)
            && self.target[0].is_monomial()
            && self.gens.iter().all(|g| g[0].is_monomial());
        if !applicable {
            if self.opts.strategy == Strategy::Monomial {
                return Err(Error::InvalidArgument(
                    "monomial engine needs a monomial target and monomial generators at the origin, without relations"
                        .into(),
                ));
            }
            return Ok(None);
        }
        let exps = monomial::monomial_exponents(&self.gens.iter().map(|g| g[0].clone()).collect::<Vec<_>>())?;
        let alpha = self.target[0].terms().next().unwrap().0.exps().to_vec();
        Ok(Some(match newton_test(&exps, &alpha) {
            NewtonTest::Inside { lambda } => self.verdict(
                Status::Holds,
                "monomial",
                Certificate::Newton { exponents: exps, alpha, lambda: lambda.iter().map(|l| l.to_string()).collect() },
            ),
            NewtonTest::Outside { weights } => {
                let w = monomial::separating_arc_exponents(&exps, &alpha, &weights);
                self.verdict(
                    Status::Fails,
                    "monomial",
                    Certificate::Separation {
                        weights: weights.iter().map(|x| x.to_string()).collect(),
                        arc_exponents: w,
                    },
                )
            }
        }))
    }

    fn dependence(&mut self) -> Result<Option<ClosureVerdict>> {
        if self.target.len() != 1 {
            return Ok(None);
        }
        let g: Vec<Poly> = self.gens.iter().map(|g| g[0].clone()).collect();
        let b = DependenceBounds {
            max_m: self.bounds.max_m,
            max_deg: self.bounds.max_deg,
            max_unknowns: self.bounds.max_unknowns,
        };
        let r = dependence_search(&self.target[0], &g, self.ctx.relations(), &b);
        match self.soft("dependence", r)? {
            Some(DependenceOutcome::Found(c)) => {
                let data = c.to_data(&g, self.ctx.names())?;
                Ok(Some(self.verdict(Status::Holds, "dependence", Certificate::Dependence(data))))
            }
            Some(DependenceOutcome::Exhausted { reason }) => {
                self.reasons.push(format!("dependence: exhausted ({reason})"));
                Ok(None)
            }
            None => Ok(None),
        }
    }

    fn arcs(&mut self) -> Result<Option<ClosureVerdict>> {
        let ao = ArcOptions {
            count: self.opts.arc_count,
            degree_budget: self.opts.degree_budget,
            truncation: self.opts.truncation,
            seed: self.opts.seed,
            center: self.point.clone(),
        };
        let user: Vec<CurveArc> = self.opts.arcs.iter().filter(|a| a.center() == self.point).cloned().collect();
        let r = sample_arcs(self.ctx, &ao, self.opts.parametrization.as_ref(), &user);
        let Some(arcs) = self.soft("arcs", r)? else { return Ok(None) };
        let mut inconclusive = 0;
        for a in &arcs {
            self.bounds.arcs_tested += 1;
            match arc_pullback_membership(&self.target, &self.gens, a)? {
                PullbackMembership::NonMember { witness, bound, target_valuation } => {
                    let cert = Certificate::Arc { arc: a.to_data(), witness: witness_data(&witness), bound, target_valuation };
                    return Ok(Some(self.verdict(Status::Fails, "arcs", cert)));
                }
                PullbackMembership::Inconclusive { .. } => inconclusive += 1,
                PullbackMembership::Member { .. } => {}
            }
        }
        self.reasons.push(format!(
            "arcs: no refutation among {} arcs ({inconclusive} undecided at truncation {})",
            arcs.len(),
            self.opts.truncation
        ));
        Ok(None)
    }
}

fn allows(s: Strategy, engine: Strategy) -> bool {
    s == Strategy::Auto || s == engine
}

fn ideal_run(run: &mut Run) -> Result<ClosureVerdict> {
    if let Some(v) = run.zero() {
        return Ok(v);
    }
    let s = run.opts.strategy;
    if allows(s, Strategy::Monomial) {
        if let Some(v) = run.monomial()? {
            return Ok(v);
        }
    }
    if allows(s, Strategy::Plain) {
        if let Some(v) = run.plain()? {
            return Ok(v);
        }
    }
    if allows(s, Strategy::Dependence) {
        if let Some(v) = run.dependence()? {
            return Ok(v);
        }
    }
    if allows(s, Strategy::Arcs) {
        if let Some(v) = run.arcs()? {
            return Ok(v);
        }
    }
    Ok(run.exhausted())
}

/// Tests `f ∈ closure(I)` at the base point.
pub fn closure_membership_ideal(f: &Poly, ideal: &Ideal, opts: &ClosureOptions) -> Result<ClosureVerdict> {
    let gens: Vec<ModVec> = ideal.generators().iter().map(|g| vec![g.clone()]).collect();
    let mut run = Run::new(ideal.context(), vec![f.clone()], gens, opts)?;
    ideal_run(&mut run)
}

/// Tests `h ∈ closure(M)` at the base point: plain membership, arcs against
/// `h` directly, then the reduction to ideals of minors.
pub fn closure_membership_module(h: &[Poly], m: &ModulePresentation, opts: &ClosureOptions) -> Result<ClosureVerdict> {
    let ctx = m.context();
    let mut run = Run::new(ctx, h.to_vec(), m.generators().to_vec(), opts)?;
    if run.target.len() == 1 {
        return ideal_run(&mut run);
    }
    if let Some(v) = run.zero() {
        return Ok(v);
    }
    let s = opts.strategy;
    if allows(s, Strategy::Plain) {
        if let Some(v) = run.plain()? {
            return Ok(v);
        }
    }
    if allows(s, Strategy::Arcs) {
        if let Some(v) = run.arcs()? {
            return Ok(v);
        }
    }
    if s == Strategy::Plain {
        return Ok(run.exhausted());
    }
    let full = m.with_column(h)?;
    let rank = match run.soft("minors", generic_rank(&full))? {
        Some(k) => k,
        None => return Ok(run.exhausted()),
    };
    if rank == 0 {
        run.reasons.push("minors: generic rank of (h, M) is zero with a nonzero h".into());
        return Ok(run.exhausted());
    }
    let jk = module_minors(ctx, m.generators(), m.rank(), rank)?;
    let with_h = minors_with_target(h, m.generators(), rank)?;
    let ideal = Ideal::new(ctx.clone(), jk.clone())?;
    let mut verdicts = Vec::new();
    let mut all_hold = true;
    for d in &with_h {
        let sub = closure_membership_ideal(d, &ideal, opts)?;
        match sub.status {
            Status::Fails => {
                let cert = Certificate::Minors {
                    k: rank,
                    ideal: jk.iter().map(|x| ctx.render(x)).collect(),
                    verdicts: vec![sub],
                };
                return Ok(run.verdict(Status::Fails, "minors", cert));
            }
            Status::Inconclusive => {
                all_hold = false;
                run.reasons.push(format!("minors: {} undecided", ctx.render(d)));
            }
            Status::Holds => {}
        }
        verdicts.push(sub);
    }
    if all_hold {
        let cert = Certificate::Minors { k: rank, ideal: jk.iter().map(|x| ctx.render(x)).collect(), verdicts };
        return Ok(run.verdict(Status::Holds, "minors", cert));
    }
    Ok(run.exhausted())
}
