//! Buchberger's algorithm for submodules of free modules over a polynomial
//! ring, generic over the coefficient field.

use std::cmp::Ordering;

use super::coeff::Coeff;
use super::order::{pot_cmp, MonomialOrder};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Term {
    pub comp: usize,
    pub exps: Vec<u32>,
}

impl Term {
    fn divides(&self, o: &Term) -> bool {
        self.comp == o.comp && self.exps.iter().zip(&o.exps).all(|(a, b)| a <= b)
    }

    fn quotient(&self, d: &Term) -> Vec<u32> {
        self.exps.iter().zip(&d.exps).map(|(a, b)| a - b).collect()
    }

    fn lcm(&self, o: &Term) -> Term {
        Term { comp: self.comp, exps: self.exps.iter().zip(&o.exps).map(|(a, b)| *a.max(b)).collect() }
    }

    fn coprime(&self, o: &Term) -> bool {
        self.exps.iter().zip(&o.exps).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Ctx {
    pub nvars: usize,
    pub ncomp: usize,
    pub order: MonomialOrder,
}

impl Ctx {
    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        pot_cmp(&self.order, a.comp, &a.exps, b.comp, &b.exps)
    }
}

/// Sparse vector with terms in strictly ascending order; the leading term
/// is the last entry.
#[derive(Clone, PartialEq, Debug)]
pub(crate) struct SVec<C> {
    pub terms: Vec<(Term, C)>,
}

impl<C: Coeff> SVec<C> {
    pub fn zero() -> Self {
        SVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Term, C)> {
        self.terms.last()
    }

    pub fn from_unsorted(ctx: &Ctx, mut terms: Vec<(Term, C)>) -> Self {
        terms.retain(|(_, c)| !c.is_zero_coeff());
        terms.sort_by(|a, b| ctx.cmp(&a.0, &b.0));
        let mut out: Vec<(Term, C)> = Vec::with_capacity(terms.len());
        for (t, c) in terms {
            match out.last_mut() {
                Some((lt, lc)) if *lt == t => {
                    *lc = lc.add(&c);
                    if lc.is_zero_coeff() {
                        out.pop();
                    }
                }
                _ => out.push((t, c)),
            }
        }
        SVec { terms: out }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero_coeff() {
            return SVec::zero();
        }
        SVec { terms: self.terms.iter().map(|(t, a)| (t.clone(), a.mul(c))).collect() }
    }

    /// `self - c * x^m * g` (multiplying by a monomial preserves order).
    pub fn sub_mul(&self, ctx: &Ctx, c: &C, m: &[u32], g: &SVec<C>) -> SVec<C> {
        let shifted = g.terms.iter().map(|(t, a)| {
            (Term { comp: t.comp, exps: t.exps.iter().zip(m).map(|(x, y)| x + y).collect() }, a.mul(c))
        });
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (t, v) = b.next().unwrap();
                    out.push((t, v.neg()));
                }
                (Some(x), Some(y)) => match ctx.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap()),
                    Ordering::Greater => {
                        let (t, v) = b.next().unwrap();
                        out.push((t, v.neg()));
                    }
                    Ordering::Equal => {
                        let (t, u) = a.next().unwrap();
                        let (_, v) = b.next().unwrap();
                        let s = u.sub(&v);
                        if !s.is_zero_coeff() {
                            out.push((t, s));
                        }
                    }
                },
            }
        }
        SVec { terms: out }
    }

    pub fn add(&self, ctx: &Ctx, g: &SVec<C>) -> SVec<C> {
        let Some(first) = g.terms.first() else {
            return self.clone();
        };
        let minus_one = first.1.one_like().neg();
        self.sub_mul(ctx, &minus_one, &vec![0; ctx.nvars], g)
    }

    /// Product of a polynomial (component 0 only) with a vector.
    pub fn mul_poly(ctx: &Ctx, p: &SVec<C>, g: &SVec<C>) -> SVec<C> {
        let mut acc = SVec::zero();
        for (t, c) in &p.terms {
            acc = acc.sub_mul(ctx, &c.neg(), &t.exps, g);
        }
        acc
    }
}

pub(crate) fn unit_vec<C: Coeff>(nvars: usize, comp: usize, one: C) -> SVec<C> {
    SVec { terms: vec![(Term { comp, exps: vec![0; nvars] }, one)] }
}

#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum number of basis elements created.
    pub max_elements: usize,
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_elements: 4000, max_pairs: 200_000 }
    }
}

/// A basis element together with its expression in the input generators.
#[derive(Clone, Debug)]
pub(crate) struct Elem<C> {
    pub vec: SVec<C>,
    pub cof: Option<Vec<SVec<C>>>,
}

pub(crate) struct Reducer<'a, C> {
    pub ctx: &'a Ctx,
    pub basis: Vec<&'a Elem<C>>,
}

impl<'a, C: Coeff> Reducer<'a, C> {
    fn find(&self, t: &Term) -> Option<&'a Elem<C>> {
        self.basis.iter().copied().find(|e| e.vec.lead().is_some_and(|(lt, _)| lt.divides(t)))
    }

    /// Full reduction; `cof` (if tracked) is updated alongside.
    pub fn reduce(&self, f: &SVec<C>, mut cof: Option<&mut Vec<SVec<C>>>) -> SVec<C> {
        let mut p = f.clone();
        let mut rem: Vec<(Term, C)> = Vec::new();
        while let Some((lt, lc)) = p.lead().cloned() {
            match self.find(&lt) {
                Some(g) => {
                    let (gt, gc) = g.vec.lead().unwrap();
                    let q = lc.mul(&gc.inv());
                    let m = lt.quotient(gt);
                    p = p.sub_mul(self.ctx, &q, &m, &g.vec);
                    if let (Some(cf), Some(gcf)) = (cof.as_deref_mut(), g.cof.as_ref()) {
                        let idx = ideal_ctx(self.ctx);
                        for (a, b) in cf.iter_mut().zip(gcf) {
                            *a = a.sub_mul(&idx, &q, &m, b);
                        }
                    }
                }
                None => {
                    rem.push(p.terms.pop().unwrap());
                }
            }
        }
        rem.reverse();
        SVec { terms: rem }
    }

    /// Reduction returning quotients with respect to the basis elements
    /// (polynomials stored in component 0).
    pub fn reduce_with_quotients(&self, f: &SVec<C>) -> (Vec<SVec<C>>, SVec<C>) {
        let idx = ideal_ctx(self.ctx);
        let mut quots: Vec<SVec<C>> = vec![SVec::zero(); self.basis.len()];
        let mut p = f.clone();
        let mut rem: Vec<(Term, C)> = Vec::new();
        while let Some((lt, lc)) = p.lead().cloned() {
            let hit = self
                .basis
                .iter()
                .position(|e| e.vec.lead().is_some_and(|(t, _)| t.divides(&lt)));
            match hit {
                Some(k) => {
                    let g = self.basis[k];
                    let (gt, gc) = g.vec.lead().unwrap();
                    let q = lc.mul(&gc.inv());
                    let m = lt.quotient(gt);
                    p = p.sub_mul(self.ctx, &q, &m, &g.vec);
                    let mono = SVec { terms: vec![(Term { comp: 0, exps: m }, q)] };
                    quots[k] = quots[k].add(&idx, &mono);
                }
                None => rem.push(p.terms.pop().unwrap()),
            }
        }
        rem.reverse();
        (quots, SVec { terms: rem })
    }
}

pub(crate) fn ideal_ctx(ctx: &Ctx) -> Ctx {
    Ctx { nvars: ctx.nvars, ncomp: 1, order: ctx.order.clone() }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Term,
}

pub(crate) struct Buchberger<C> {
    ctx: Ctx,
    elems: Vec<Elem<C>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    track: bool,
    limits: Limits,
    pub reductions: usize,
}

impl<C: Coeff> Buchberger<C> {
    fn lead(&self, i: usize) -> &Term {
        &self.elems[i].vec.lead().unwrap().0
    }

    fn reducer(&self) -> Reducer<'_, C> {
        Reducer { ctx: &self.ctx, basis: self.active.iter().map(|&i| &self.elems[i]).collect() }
    }

    fn monic(&self, mut e: Elem<C>) -> Elem<C> {
        let inv = e.vec.lead().unwrap().1.inv();
        if !inv.is_one_coeff() {
            e.vec = e.vec.scale(&inv);
            if let Some(cf) = e.cof.as_mut() {
                for c in cf.iter_mut() {
                    *c = c.scale(&inv);
                }
            }
        }
        e
    }

    fn insert(&mut self, e: Elem<C>) -> Result<()> {
        if self.elems.len() >= self.limits.max_elements {
            return Err(Error::Limit(format!(
                "Gröbner basis exceeded {} elements",
                self.limits.max_elements
            )));
        }
        let e = self.monic(e);
        self.elems.push(e);
        let h = self.elems.len() - 1;
        self.update(h);
        Ok(())
    }

    /// Gebauer-Möller pair update.
    fn update(&mut self, h: usize) {
        let lt_h = self.lead(h).clone();
        let ideal = self.ctx.ncomp == 1;
        let cands: Vec<usize> =
            self.active.iter().copied().filter(|&g| self.lead(g).comp == lt_h.comp).collect();
        let lcms: Vec<Term> = cands.iter().map(|&g| lt_h.lcm(self.lead(g))).collect();
        let coprime: Vec<bool> = cands.iter().map(|&g| ideal && lt_h.coprime(self.lead(g))).collect();
        let mut kept: Vec<usize> = Vec::new();
        for k in 0..cands.len() {
            if coprime[k] {
                kept.push(k);
                continue;
            }
            let dominated = (k + 1..cands.len()).chain(kept.iter().copied()).any(|o| lcms[o].divides(&lcms[k]));
            if !dominated {
                kept.push(k);
            }
        }
        let lt_of = |s: &Self, i: usize| s.lead(i).clone();
        let mut retained = Vec::with_capacity(self.pairs.len());
        for p in std::mem::take(&mut self.pairs) {
            let drop = lt_h.divides(&p.lcm)
                && lt_h.lcm(&lt_of(self, p.i)) != p.lcm
                && lt_h.lcm(&lt_of(self, p.j)) != p.lcm;
            if !drop {
                retained.push(p);
            }
        }
        self.pairs = retained;
        for k in kept {
            if !coprime[k] {
                self.pairs.push(Pair { i: cands[k], j: h, lcm: lcms[k].clone() });
            }
        }
        let elems = &self.elems;
        self.active.retain(|&g| !lt_h.divides(&elems[g].vec.lead().unwrap().0));
        self.active.push(h);
    }

    fn spoly(&self, p: &Pair) -> Elem<C> {
        let (fi, fj) = (&self.elems[p.i], &self.elems[p.j]);
        let mi = p.lcm.quotient(self.lead(p.i));
        let mj = p.lcm.quotient(self.lead(p.j));
        let one = fi.vec.lead().unwrap().1.one_like();
        let zero = SVec::zero();
        let a = zero.sub_mul(&self.ctx, &one.neg(), &mi, &fi.vec);
        let vec = a.sub_mul(&self.ctx, &one, &mj, &fj.vec);
        let cof = match (&fi.cof, &fj.cof) {
            (Some(ci), Some(cj)) => {
                let idx = ideal_ctx(&self.ctx);
                Some(
                    ci.iter()
                        .zip(cj)
                        .map(|(x, y)| zero.sub_mul(&idx, &one.neg(), &mi, x).sub_mul(&idx, &one, &mj, y))
                        .collect(),
                )
            }
            _ => None,
        };
        Elem { vec, cof }
    }

    pub fn run(ctx: Ctx, gens: Vec<SVec<C>>, track: bool, limits: Limits) -> Result<(Ctx, Vec<Elem<C>>, usize)> {
        let ngens = gens.len();
        let mut bb = Buchberger {
            ctx,
            elems: Vec::new(),
            active: Vec::new(),
            pairs: Vec::new(),
            track,
            limits,
            reductions: 0,
        };
        for (i, g) in gens.into_iter().enumerate() {
            let Some(one) = g.lead().map(|(_, c)| c.one_like()) else {
                continue;
            };
            let mut cof = if bb.track {
                let mut v = vec![SVec::zero(); ngens];
                v[i] = unit_vec(bb.ctx.nvars, 0, one);
                Some(v)
            } else {
                None
            };
            let r = bb.reducer().reduce(&g, cof.as_mut());
            if !r.is_zero() {
                bb.insert(Elem { vec: r, cof })?;
            }
        }
        while !bb.pairs.is_empty() {
            if bb.reductions >= bb.limits.max_pairs {
                return Err(Error::Limit(format!("more than {} S-pair reductions", bb.limits.max_pairs)));
            }
            let mut best = 0;
            for k in 1..bb.pairs.len() {
                let (a, b) = (&bb.pairs[k], &bb.pairs[best]);
                let o = bb.ctx.cmp(&a.lcm, &b.lcm).then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
                if o == Ordering::Less {
                    best = k;
                }
            }
            let pair = bb.pairs.swap_remove(best);
            let mut s = bb.spoly(&pair);
            bb.reductions += 1;
            let r = bb.reducer().reduce(&s.vec, s.cof.as_mut());
            if !r.is_zero() {
                s.vec = r;
                bb.insert(s)?;
            }
        }
        // inter-reduce the minimal basis
        let mut active = bb.active.clone();
        active.sort_by(|&a, &b| bb.ctx.cmp(bb.lead(a), bb.lead(b)));
        let mut out: Vec<Elem<C>> = Vec::with_capacity(active.len());
        for (k, &i) in active.iter().enumerate() {
            let others: Vec<&Elem<C>> =
                active.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, &j)| &bb.elems[j]).collect();
            let red = Reducer { ctx: &bb.ctx, basis: others };
            let mut e = bb.elems[i].clone();
            // the lead is irreducible by the others; reduce only the tail
            let (lt, lc) = e.vec.terms.pop().unwrap();
            let mut cof = e.cof.clone();
            let tail = red.reduce(&e.vec, cof.as_mut());
            let mut terms = tail.terms;
            terms.push((lt, lc));
            e.vec = SVec { terms };
            e.cof = cof;
            out.push(e);
        }
        Ok((bb.ctx, out, bb.reductions))
    }
}

/// Checks the Gröbner property directly: every S-pair reduces to zero.
pub(crate) fn all_spairs_reduce<C: Coeff>(ctx: &Ctx, elems: &[Elem<C>]) -> bool {
    let red = Reducer { ctx, basis: elems.iter().collect() };
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let (ti, ci) = elems[i].vec.lead().unwrap();
            let (tj, cj) = elems[j].vec.lead().unwrap();
            if ti.comp != tj.comp {
                continue;
            }
            let l = ti.lcm(tj);
            let zero = SVec::zero();
            let s = zero
                .sub_mul(ctx, &ci.inv().neg(), &l.quotient(ti), &elems[i].vec)
                .sub_mul(ctx, &cj.inv(), &l.quotient(tj), &elems[j].vec);
            if !red.reduce(&s, None).is_zero() {
                return false;
            }
        }
    }
    true
}
