//! Gröbner bases for ideals and submodules of free modules, with normal
//! forms, membership (plain and local), elimination and radical membership.

mod coeff;
mod engine;
mod order;

use num_traits::Zero;

pub use coeff::{Coeff, Fp};
pub use engine::Limits;
pub use order::{pot_cmp, MonomialOrder};

use engine::{all_spairs_reduce, Buchberger, Ctx, Elem, Reducer, SVec, Term};

use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, Rational};

/// Element of a free module, one polynomial per component.
pub type ModVec = Vec<Poly>;

fn check_ambient(nvars: usize, ncomp: usize, v: &[Poly]) -> Result<()> {
    if v.len() != ncomp {
        return Err(Error::Dimension(format!("vector with {} components, expected {ncomp}", v.len())));
    }
    if let Some(p) = v.iter().find(|p| p.nvars() != nvars) {
        return Err(Error::RingMismatch(format!(
            "polynomial over {} variables in a ring with {nvars}",
            p.nvars()
        )));
    }
    Ok(())
}

fn to_svec<C: Coeff>(ctx: &Ctx, v: &[Poly], conv: &impl Fn(&Rational) -> Option<C>) -> Result<SVec<C>> {
    let mut terms = Vec::new();
    for (comp, p) in v.iter().enumerate() {
        for (m, c) in p.terms() {
            let c = conv(c).ok_or_else(|| {
                Error::InvalidArgument("coefficient denominator vanishes in the prime field".into())
            })?;
            terms.push((Term { comp, exps: m.exps().to_vec() }, c));
        }
    }
    Ok(SVec::from_unsorted(ctx, terms))
}

fn from_svec<C: Coeff>(ctx: &Ctx, v: &SVec<C>, lift: &impl Fn(&C) -> Rational) -> ModVec {
    let mut out = vec![Poly::zero(ctx.nvars); ctx.ncomp];
    for (t, c) in &v.terms {
        out[t.comp].add_term(Monomial::from_exps(t.exps.clone()), lift(c));
    }
    out
}

fn q_conv(q: &Rational) -> Option<Rational> {
    Some(q.clone())
}

fn q_lift(q: &Rational) -> Rational {
    q.clone()
}

/// Reduced Gröbner basis over the rationals, optionally remembering how each
/// element is built from the input generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ctx: Ctx,
    elems: Vec<Elem<Rational>>,
    ngens: usize,
    reductions: usize,
}

impl GroebnerBasis {
    pub fn compute(nvars: usize, ncomp: usize, gens: &[ModVec], order: MonomialOrder, track: bool) -> Result<Self> {
        Self::compute_with_limits(nvars, ncomp, gens, order, track, Limits::default())
    }

    pub fn compute_with_limits(
        nvars: usize,
        ncomp: usize,
        gens: &[ModVec],
        order: MonomialOrder,
        track: bool,
        limits: Limits,
    ) -> Result<Self> {
        if ncomp == 0 {
            return Err(Error::Dimension("free module of rank 0".into()));
        }
        for g in gens {
            check_ambient(nvars, ncomp, g)?;
        }
        let ctx = Ctx { nvars, ncomp, order };
        let svecs = gens.iter().map(|g| to_svec(&ctx, g, &q_conv)).collect::<Result<Vec<_>>>()?;
        let (ctx, elems, reductions) = Buchberger::run(ctx, svecs, track, limits)?;
        Ok(GroebnerBasis { ctx, elems, ngens: gens.len(), reductions })
    }

    /// Basis of an ideal of polynomials in `nvars` variables.
    pub fn ideal(nvars: usize, gens: &[Poly], order: MonomialOrder) -> Result<Self> {
        let gens: Vec<ModVec> = gens.iter().map(|g| vec![g.clone()]).collect();
        Self::compute(nvars, 1, &gens, order, false)
    }

    pub fn nvars(&self) -> usize {
        self.ctx.nvars
    }

    pub fn ncomp(&self) -> usize {
        self.ctx.ncomp
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.ctx.order
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Number of S-pairs that were reduced.
    pub fn reductions(&self) -> usize {
        self.reductions
    }

    /// Basis elements, sorted by ascending leading term.
    pub fn generators(&self) -> Vec<ModVec> {
        self.elems.iter().map(|e| from_svec(&self.ctx, &e.vec, &q_lift)).collect()
    }

    /// First components of the basis elements; the basis of an ideal.
    pub fn polys(&self) -> Vec<Poly> {
        self.generators().into_iter().map(|mut v| v.swap_remove(0)).collect()
    }

    /// Leading terms as (component, exponent vector).
    pub fn leading_terms(&self) -> Vec<(usize, Vec<u32>)> {
        self.elems
            .iter()
            .map(|e| {
                let (t, _) = e.vec.lead().unwrap();
                (t.comp, t.exps.clone())
            })
            .collect()
    }

    pub fn is_unit(&self) -> bool {
        self.ctx.ncomp == 1
            && self.elems.iter().any(|e| e.vec.terms.len() == 1 && e.vec.terms[0].0.exps.iter().all(|&x| x == 0))
    }

    /// Every S-pair of the basis reduces to zero.
    pub fn is_groebner(&self) -> bool {
        all_spairs_reduce(&self.ctx, &self.elems)
    }

    fn reducer(&self) -> Reducer<'_, Rational> {
        Reducer { ctx: &self.ctx, basis: self.elems.iter().collect() }
    }

    pub fn normal_form(&self, v: &[Poly]) -> Result<ModVec> {
        check_ambient(self.ctx.nvars, self.ctx.ncomp, v)?;
        let s = to_svec(&self.ctx, v, &q_conv)?;
        Ok(from_svec(&self.ctx, &self.reducer().reduce(&s, None), &q_lift))
    }

    pub fn normal_form_poly(&self, f: &Poly) -> Result<Poly> {
        Ok(self.normal_form(std::slice::from_ref(f))?.swap_remove(0))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(Poly::is_zero))
    }

    /// Cofactors `c` with `v = sum c_j gens_j` when `v` is a member; needs a
    /// basis computed with tracking.
    pub fn express(&self, v: &[Poly]) -> Result<Option<Vec<Poly>>> {
        check_ambient(self.ctx.nvars, self.ctx.ncomp, v)?;
        if self.elems.iter().any(|e| e.cof.is_none()) {
            return Err(Error::InvalidArgument("basis was computed without cofactor tracking".into()));
        }
        let s = to_svec(&self.ctx, v, &q_conv)?;
        let (quots, rem) = self.reducer().reduce_with_quotients(&s);
        if !rem.is_zero() {
            return Ok(None);
        }
        let idx = engine::ideal_ctx(&self.ctx);
        let mut cof: Vec<SVec<Rational>> = vec![SVec::zero(); self.ngens];
        for (q, e) in quots.iter().zip(&self.elems) {
            if q.is_zero() {
                continue;
            }
            for (c, ec) in cof.iter_mut().zip(e.cof.as_ref().unwrap()) {
                *c = c.add(&idx, &SVec::mul_poly(&idx, q, ec));
            }
        }
        Ok(Some(cof.iter().map(|c| from_svec(&idx, c, &q_lift).swap_remove(0)).collect()))
    }
}

/// Reduced basis over the prime field `F_prime`, coefficients lifted to
/// symmetric representatives.
pub fn groebner_basis_modp(
    nvars: usize,
    ncomp: usize,
    gens: &[ModVec],
    order: MonomialOrder,
    prime: u64,
) -> Result<Vec<ModVec>> {
    if !(2..(1u64 << 32)).contains(&prime) {
        return Err(Error::InvalidArgument(format!("modulus {prime} out of range")));
    }
    for g in gens {
        check_ambient(nvars, ncomp, g)?;
    }
    let ctx = Ctx { nvars, ncomp, order };
    let conv = |q: &Rational| Fp::from_rational(q, prime);
    let svecs = gens.iter().map(|g| to_svec(&ctx, g, &conv)).collect::<Result<Vec<_>>>()?;
    let (ctx, elems, _) = Buchberger::run(ctx, svecs, false, Limits::default())?;
    Ok(elems.iter().map(|e| from_svec(&ctx, &e.vec, &|c: &Fp| c.lift())).collect())
}

/// Polynomial `r` placed in component `c` of a rank-`p` free module.
pub fn embed(r: &Poly, c: usize, p: usize) -> ModVec {
    let mut v = vec![Poly::zero(r.nvars()); p];
    v[c] = r.clone();
    v
}

/// `gens` followed by `r e_c` for every relation and every component.
pub fn with_relations(gens: &[ModVec], relations: &[Poly], p: usize) -> Vec<ModVec> {
    let mut all = gens.to_vec();
    for c in 0..p {
        for r in relations {
            all.push(embed(r, c, p));
        }
    }
    all
}

/// Plain membership outcome.
#[derive(Clone, PartialEq, Debug)]
pub enum Membership {
    /// `v = sum cofactors_j gens_j + sum_c sum_k relation_cofactors[c][k] r_k e_c`.
    Member { cofactors: Vec<Poly>, relation_cofactors: Vec<Vec<Poly>> },
    NonMember { remainder: ModVec },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Decides `v` in the submodule generated by `gens` modulo the ideal of
/// `relations` (applied componentwise).
pub fn submodule_membership(nvars: usize, v: &[Poly], gens: &[ModVec], relations: &[Poly]) -> Result<Membership> {
    let p = v.len();
    check_ambient(nvars, p, v)?;
    if v.iter().all(Poly::is_zero) {
        return Ok(Membership::Member {
            cofactors: vec![Poly::zero(nvars); gens.len()],
            relation_cofactors: vec![vec![Poly::zero(nvars); relations.len()]; p],
        });
    }
    let all = with_relations(gens, relations, p);
    let gb = GroebnerBasis::compute(nvars, p, &all, MonomialOrder::DegRevLex, true)?;
    match gb.express(v)? {
        Some(cof) => {
            let (main, rest) = cof.split_at(gens.len());
            let relation_cofactors = rest.chunks(relations.len().max(1)).take(p).map(|c| c.to_vec()).collect();
            let relation_cofactors = if relations.is_empty() { vec![Vec::new(); p] } else { relation_cofactors };
            Ok(Membership::Member { cofactors: main.to_vec(), relation_cofactors })
        }
        None => Ok(Membership::NonMember { remainder: gb.normal_form(v)? }),
    }
}

pub fn ideal_membership(nvars: usize, f: &Poly, gens: &[Poly], relations: &[Poly]) -> Result<Membership> {
    let gens: Vec<ModVec> = gens.iter().map(|g| vec![g.clone()]).collect();
    submodule_membership(nvars, std::slice::from_ref(f), &gens, relations)
}

/// `v - sum cofactors_j gens_j`, componentwise.
pub fn combination_residual(v: &[Poly], gens: &[ModVec], cofactors: &[Poly]) -> Result<ModVec> {
    if gens.len() != cofactors.len() {
        return Err(Error::Dimension(format!("{} cofactors for {} generators", cofactors.len(), gens.len())));
    }
    let mut out = v.to_vec();
    for (g, c) in gens.iter().zip(cofactors) {
        if g.len() != out.len() {
            return Err(Error::Dimension("generator of the wrong rank".into()));
        }
        for (o, gi) in out.iter_mut().zip(g) {
            *o = &*o - &(c * gi);
        }
    }
    Ok(out)
}

/// Checks `v = sum cofactors_j gens_j` modulo the ideal of `relations`.
pub fn verify_combination(
    nvars: usize,
    v: &[Poly],
    gens: &[ModVec],
    cofactors: &[Poly],
    relations: &[Poly],
) -> Result<bool> {
    let res = combination_residual(v, gens, cofactors)?;
    if res.iter().all(Poly::is_zero) {
        return Ok(true);
    }
    if relations.is_empty() {
        return Ok(false);
    }
    let gb = GroebnerBasis::ideal(nvars, relations, MonomialOrder::DegRevLex)?;
    for r in &res {
        if !gb.normal_form_poly(r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Generators of `I ∩ k[remaining variables]`, still written over all
/// `nvars` variables.
pub fn eliminate(nvars: usize, gens: &[Poly], vars: &[usize]) -> Result<Vec<Poly>> {
    if let Some(v) = vars.iter().find(|&&v| v >= nvars) {
        return Err(Error::InvalidArgument(format!("variable index {v} out of range")));
    }
    let gb = GroebnerBasis::ideal(nvars, gens, MonomialOrder::Elimination(vars.to_vec()))?;
    Ok(gb.polys().into_iter().filter(|p| !vars.iter().any(|&v| p.uses_var(v))).collect())
}

/// Whether `f` vanishes on the zero set of the ideal generated by `gens`,
/// decided by `1 ∈ I + (1 - w f)` with a fresh variable `w`.
pub fn radical_membership(nvars: usize, f: &Poly, gens: &[Poly]) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let mut all: Vec<Poly> = gens.iter().map(|g| g.extend(1)).collect();
    let w = Poly::var(nvars + 1, nvars);
    all.push(Poly::one(nvars + 1) - &w * &f.extend(1));
    Ok(GroebnerBasis::ideal(nvars + 1, &all, MonomialOrder::DegRevLex)?.is_unit())
}

/// Generators of the ideal quotient `(N : v)` where `N` is generated by
/// `gens` and the relations times each basis vector.
pub fn module_quotient(nvars: usize, v: &[Poly], gens: &[ModVec], relations: &[Poly]) -> Result<Vec<Poly>> {
    let p = v.len();
    check_ambient(nvars, p, v)?;
    let mut all: Vec<ModVec> = Vec::new();
    let mut top = v.to_vec();
    top.push(Poly::one(nvars));
    all.push(top);
    for g in with_relations(gens, relations, p) {
        check_ambient(nvars, p, &g)?;
        let mut g = g;
        g.push(Poly::zero(nvars));
        all.push(g);
    }
    let gb = GroebnerBasis::compute(nvars, p + 1, &all, MonomialOrder::DegRevLex, false)?;
    Ok(gb
        .generators()
        .into_iter()
        .filter(|g| g[..p].iter().all(Poly::is_zero))
        .map(|mut g| g.swap_remove(p))
        .collect())
}

/// Membership in the localization at a rational point.
#[derive(Clone, PartialEq, Debug)]
pub enum LocalMembership {
    /// `unit * v = sum cofactors_j gens_j` modulo relations, with
    /// `unit(point) != 0`.
    Member { unit: Poly, cofactors: Vec<Poly> },
    /// Every generator of `(N : v)` vanishes at the point.
    NonMember { quotient: Vec<Poly> },
}

pub fn local_membership(
    nvars: usize,
    v: &[Poly],
    gens: &[ModVec],
    relations: &[Poly],
    point: &[Rational],
) -> Result<LocalMembership> {
    if point.len() != nvars {
        return Err(Error::Dimension(format!("point has {} coordinates, ring has {nvars}", point.len())));
    }
    if let Membership::Member { cofactors, .. } = submodule_membership(nvars, v, gens, relations)? {
        return Ok(LocalMembership::Member { unit: Poly::one(nvars), cofactors });
    }
    let quotient = module_quotient(nvars, v, gens, relations)?;
    let mut candidates: Vec<&Poly> = quotient.iter().filter(|s| !s.eval(point).is_zero()).collect();
    candidates.sort_by_key(|s| (s.total_degree(), s.num_terms()));
    let Some(s) = candidates.first() else {
        return Ok(LocalMembership::NonMember { quotient });
    };
    let sv: ModVec = v.iter().map(|x| *s * x).collect();
    match submodule_membership(nvars, &sv, gens, relations)? {
        Membership::Member { cofactors, .. } => Ok(LocalMembership::Member { unit: (*s).clone(), cofactors }),
        Membership::NonMember { .. } => Err(Error::Internal("quotient element failed to multiply into the module".into())),
    }
}
