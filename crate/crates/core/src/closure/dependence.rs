//! Search for integral dependence equations `f^m + a_1 f^(m-1) + ... + a_m = 0`
//! with `a_i ∈ I^i`, by linear algebra over ℚ.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, Rational};

#[derive(Clone, Debug)]
pub struct DependenceBounds {
    pub max_m: u32,
    /// Degree bound on the multipliers of the products of generators.
    pub max_deg: u32,
    pub max_unknowns: usize,
}

/// One summand `μ · g_{i_1} ⋯ g_{i_k}` of some `a_i`.
#[derive(Clone, PartialEq, Debug)]
pub struct ProductTerm {
    /// Generator indices of the product (a multiset, sorted).
    pub product: Vec<usize>,
    pub multiplier: Poly,
}

/// `f^m + Σ_i a_i f^(m-i) + Σ_r ν_r r = 0` with `a_i = Σ μ·(products of i generators)`.
#[derive(Clone, PartialEq, Debug)]
pub struct DependenceCertificate {
    pub m: u32,
    /// `terms[i-1]` are the summands of `a_i`.
    pub terms: Vec<Vec<ProductTerm>>,
    pub relation_cofactors: Vec<Poly>,
}

impl DependenceCertificate {
    pub fn coefficients(&self, gens: &[Poly]) -> Result<Vec<Poly>> {
        let nvars = gens.first().map(Poly::nvars).unwrap_or(0);
        self.terms
            .iter()
            .enumerate()
            .map(|(i, ts)| {
                let mut a = Poly::zero(nvars);
                for t in ts {
                    if t.product.len() != i + 1 || t.product.iter().any(|&g| g >= gens.len()) {
                        return Err(Error::InvalidArgument(format!("product {:?} does not lie in I^{}", t.product, i + 1)));
                    }
                    let mut p = t.multiplier.clone();
                    for &g in &t.product {
                        p = &p * &gens[g];
                    }
                    a = &a + &p;
                }
                Ok(a)
            })
            .collect()
    }

    /// Exact check of the dependence identity.
    pub fn verify(&self, f: &Poly, gens: &[Poly], relations: &[Poly]) -> Result<bool> {
        if self.m == 0 || self.terms.len() != self.m as usize || self.relation_cofactors.len() != relations.len() {
            return Ok(false);
        }
        let a = self.coefficients(gens)?;
        let m = self.m;
        let mut total = f.pow(m);
        for (i, ai) in a.iter().enumerate() {
            total = &total + &(ai * &f.pow(m - 1 - i as u32));
        }
        for (c, r) in self.relation_cofactors.iter().zip(relations) {
            total = &total + &(c * r);
        }
        Ok(total.is_zero())
    }

    pub fn to_data(&self, gens: &[Poly], names: &[String]) -> Result<DependenceData> {
        let a = self.coefficients(gens)?;
        Ok(DependenceData {
            m: self.m,
            coefficients: a.iter().map(|p| p.to_string_with(names)).collect(),
            terms: self
                .terms
                .iter()
                .map(|ts| {
                    ts.iter()
                        .map(|t| TermData { product: t.product.clone(), multiplier: t.multiplier.to_string_with(names) })
                        .collect()
                })
                .collect(),
            relation_cofactors: self.relation_cofactors.iter().map(|p| p.to_string_with(names)).collect(),
        })
    }

    pub fn from_data(d: &DependenceData, names: &[String]) -> Result<Self> {
        Ok(DependenceCertificate {
            m: d.m,
            terms: d
                .terms
                .iter()
                .map(|ts| {
                    ts.iter()
                        .map(|t| Ok(ProductTerm { product: t.product.clone(), multiplier: Poly::parse(&t.multiplier, names)? }))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
            relation_cofactors: d.relation_cofactors.iter().map(|s| Poly::parse(s, names)).collect::<Result<Vec<_>>>()?,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TermData {
    pub product: Vec<usize>,
    pub multiplier: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DependenceData {
    pub m: u32,
    /// `a_1, ..., a_m` expanded, for reading.
    pub coefficients: Vec<String>,
    pub terms: Vec<Vec<TermData>>,
    pub relation_cofactors: Vec<String>,
}

#[derive(Clone, PartialEq, Debug)]
pub enum DependenceOutcome {
    Found(DependenceCertificate),
    Exhausted { reason: String },
}

fn weighted_degree(m: &Monomial, w: &[u32]) -> u32 {
    m.exps().iter().zip(w).map(|(e, x)| e * x).sum()
}

/// Common weighted degree of all terms, if `p` is weighted homogeneous.
fn homogeneous_degree(p: &Poly, w: &[u32]) -> Option<u32> {
    let mut it = p.terms().map(|(m, _)| weighted_degree(m, w));
    let d = it.next()?;
    it.all(|x| x == d).then_some(d)
}

/// A positive weight vector making every input weighted homogeneous.
pub fn detect_grading(nvars: usize, polys: &[&Poly]) -> Option<Vec<u32>> {
    let ok = |w: &[u32]| polys.iter().all(|p| p.is_zero() || homogeneous_degree(p, w).is_some());
    let standard = vec![1; nvars];
    if ok(&standard) {
        return Some(standard);
    }
    if nvars > 6 {
        return None;
    }
    let total = 3usize.pow(nvars as u32);
    (0..total)
        .map(|mut k| {
            (0..nvars)
                .map(|_| {
                    let d = (k % 3) as u32 + 1;
                    k /= 3;
                    d
                })
                .collect::<Vec<u32>>()
        })
        .find(|w| ok(w))
}

/// Monomials in `nvars` variables with weighted degree exactly `d`.
fn monomials_of_weight(nvars: usize, w: &[u32], d: u32, cap: usize) -> Option<Vec<Monomial>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, rest: u32, w: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Monomial>, cap: usize) -> bool {
        if out.len() > cap {
            return false;
        }
        if i == w.len() {
            if rest == 0 {
                out.push(Monomial::from_exps(cur.clone()));
            }
            return true;
        }
        let mut e = 0;
        while e * w[i] <= rest {
            cur[i] = e;
            if !rec(i + 1, rest - e * w[i], w, cur, out, cap) {
                return false;
            }
            e += 1;
        }
        cur[i] = 0;
        true
    }
    rec(0, d, w, &mut cur, &mut out, cap).then_some(out)
}

/// Monomials of total degree at most `d`.
fn monomials_up_to(nvars: usize, d: u32, cap: usize) -> Option<Vec<Monomial>> {
    let ones = vec![1; nvars];
    let mut out = Vec::new();
    for k in 0..=d {
        out.extend(monomials_of_weight(nvars, &ones, k, cap)?);
        if out.len() > cap {
            return None;
        }
    }
    Some(out)
}

/// Multisets of size `k` from `0..n`, in lexicographic order.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

enum Unknown {
    Product { i: usize, product: usize, mono: Monomial },
    Relation { r: usize, mono: Monomial },
}

/// Incremental row echelon form with tracked combinations.
struct Echelon {
    rows: Vec<(BTreeMap<Monomial, Rational>, BTreeMap<usize, Rational>)>,
    pivot: HashMap<Monomial, usize>,
}

impl Echelon {
    fn reduce(&self, v: &mut BTreeMap<Monomial, Rational>, comb: &mut BTreeMap<usize, Rational>) {
        // eliminate pivots from the largest monomial down
        let mut cursor: Option<Monomial> = None;
        loop {
            let next = match &cursor {
                None => v.keys().next_back().cloned(),
                Some(c) => v.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(m) = next else { break };
            if let Some(&ri) = self.pivot.get(&m) {
                let c = v[&m].clone();
                let (row, rc) = &self.rows[ri];
                for (k, x) in row {
                    let e = v.entry(k.clone()).or_insert_with(Rational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
                for (k, x) in rc {
                    let e = comb.entry(*k).or_insert_with(Rational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        comb.remove(k);
                    }
                }
            }
            cursor = Some(m);
        }
    }

    fn insert(&mut self, mut v: BTreeMap<Monomial, Rational>, mut comb: BTreeMap<usize, Rational>) {
        self.reduce(&mut v, &mut comb);
        let Some((lead, c)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else { return };
        let inv = Rational::one() / c;
        for x in v.values_mut() {
            *x *= &inv;
        }
        for x in comb.values_mut() {
            *x *= &inv;
        }
        self.pivot.insert(lead, self.rows.len());
        self.rows.push((v, comb));
    }
}

fn to_map(p: &Poly) -> BTreeMap<Monomial, Rational> {
    p.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Bounded search for an integral dependence equation of `f` over the ideal
/// generated by `gens`, modulo `relations`.
pub fn dependence_search(f: &Poly, gens: &[Poly], relations: &[Poly], bounds: &DependenceBounds) -> Result<DependenceOutcome> {
    if bounds.max_m == 0 || bounds.max_deg == 0 {
        return Err(Error::InvalidArgument("dependence bounds must be at least 1".into()));
    }
    let nvars = f.nvars();
    let gens: Vec<Poly> = gens.to_vec();
    if f.is_zero() {
        return Ok(DependenceOutcome::Found(DependenceCertificate {
            m: 1,
            terms: vec![Vec::new()],
            relation_cofactors: vec![Poly::zero(nvars); relations.len()],
        }));
    }
    let mut inputs: Vec<&Poly> = vec![f];
    inputs.extend(gens.iter());
    inputs.extend(relations.iter());
    let grading = detect_grading(nvars, &inputs);
    let max_in = inputs.iter().map(|p| p.total_degree()).max().unwrap_or(0);
    let slack = bounds.max_deg.saturating_sub(max_in);
    let df = grading.as_ref().and_then(|w| homogeneous_degree(f, w));
    let mut reasons = Vec::new();
    for m in 1..=bounds.max_m {
        let mut unknowns: Vec<Unknown> = Vec::new();
        let mut columns: Vec<Poly> = Vec::new();
        let mut over = false;
        let fpow: Vec<Poly> = (0..=m).map(|e| f.pow(e)).collect();
        let mut products_by_i: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        'build: for i in 1..=m as usize {
            let prods = multisets(gens.len(), i);
            for (pi, pr) in prods.iter().enumerate() {
                let mut g = Poly::one(nvars);
                for &k in pr {
                    g = &g * &gens[k];
                }
                if g.is_zero() {
                    continue;
                }
                let base = &g * &fpow[m as usize - i];
                let monos = match (&grading, df) {
                    (Some(w), Some(df)) => {
                        let target = i as u32 * df;
                        match homogeneous_degree(&g, w) {
                            Some(dg) if dg <= target => {
                                monomials_of_weight(nvars, w, target - dg, bounds.max_unknowns)
                                    .map(|v| v.into_iter().filter(|mo| mo.degree() <= bounds.max_deg).collect())
                            }
                            _ => Some(Vec::new()),
                        }
                    }
                    _ => {
                        let cap = (m * f.total_degree() + slack).saturating_sub(base.total_degree());
                        monomials_up_to(nvars, cap.min(bounds.max_deg), bounds.max_unknowns)
                    }
                };
                let Some(monos) = monos else {
                    over = true;
                    break 'build;
                };
                for mo in monos {
                    columns.push(base.mul_monomial(&mo, &Rational::one()));
                    unknowns.push(Unknown::Product { i, product: pi, mono: mo });
                    if unknowns.len() > bounds.max_unknowns {
                        over = true;
                        break 'build;
                    }
                }
            }
            products_by_i.push(prods);
        }
        if !over {
            for (ri, r) in relations.iter().enumerate() {
                let monos = match (&grading, df) {
                    (Some(w), Some(df)) => match homogeneous_degree(r, w) {
                        Some(dr) if dr <= m * df => monomials_of_weight(nvars, w, m * df - dr, bounds.max_unknowns),
                        _ => Some(Vec::new()),
                    },
                    _ => monomials_up_to(nvars, (m * f.total_degree() + slack).saturating_sub(r.total_degree()), bounds.max_unknowns),
                };
                let Some(monos) = monos else {
                    over = true;
                    break;
                };
                for mo in monos {
                    columns.push(r.mul_monomial(&mo, &Rational::one()));
                    unknowns.push(Unknown::Relation { r: ri, mono: mo });
                }
                if unknowns.len() > bounds.max_unknowns {
                    over = true;
                    break;
                }
            }
        }
        if over {
            reasons.push(format!("m={m}: more than {} unknowns", bounds.max_unknowns));
            continue;
        }
        let mut ech = Echelon { rows: Vec::new(), pivot: HashMap::new() };
        for (k, col) in columns.iter().enumerate() {
            ech.insert(to_map(col), BTreeMap::from([(k, Rational::one())]));
        }
        // Σ x_k col_k = -f^m
        let mut target = to_map(&fpow[m as usize]);
        let mut comb = BTreeMap::new();
        ech.reduce(&mut target, &mut comb);
        if !target.is_empty() {
            reasons.push(format!("m={m}: no solution with {} unknowns", unknowns.len()));
            continue;
        }
        // target - Σ comb_k col_k = 0, so x_k = comb_k
        let mut terms: Vec<Vec<ProductTerm>> = vec![Vec::new(); m as usize];
        let mut rel = vec![Poly::zero(nvars); relations.len()];
        let mut acc: BTreeMap<(usize, usize), Poly> = BTreeMap::new();
        for (k, x) in comb {
            match &unknowns[k] {
                Unknown::Product { i, product, mono } => {
                    let e = acc.entry((*i, *product)).or_insert_with(|| Poly::zero(nvars));
                    e.add_term(mono.clone(), x);
                }
                Unknown::Relation { r, mono } => rel[*r].add_term(mono.clone(), x),
            }
        }
        for ((i, pi), mu) in acc {
            if !mu.is_zero() {
                terms[i - 1].push(ProductTerm { product: products_by_i[i][pi].clone(), multiplier: mu });
            }
        }
        let cert = DependenceCertificate { m, terms, relation_cofactors: rel };
        if !cert.verify(f, &gens, relations)? {
            return Err(Error::Internal("dependence certificate failed its own check".into()));
        }
        return Ok(DependenceOutcome::Found(cert));
    }
    Ok(DependenceOutcome::Exhausted { reason: reasons.join("; ") })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn p(s: &str) -> Poly {
        Poly::parse(s, &names()).unwrap()
    }

    fn bounds() -> DependenceBounds {
        DependenceBounds { max_m: 4, max_deg: 12, max_unknowns: 4000 }
    }

    #[test]
    fn xy_over_squares() {
        let gens = vec![p("x^2"), p("y^2")];
        match dependence_search(&p("x*y"), &gens, &[], &bounds()).unwrap() {
            DependenceOutcome::Found(c) => {
                assert_eq!(c.m, 2);
                let a = c.coefficients(&gens).unwrap();
                assert!(a[0].is_zero());
                assert_eq!(a[1], p("-x^2*y^2"));
                assert!(c.verify(&p("x*y"), &gens, &[]).unwrap());
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn plain_member_is_degree_one() {
        match dependence_search(&p("x"), &[p("x")], &[], &bounds()).unwrap() {
            DependenceOutcome::Found(c) => {
                assert_eq!(c.m, 1);
                assert_eq!(c.coefficients(&[p("x")]).unwrap(), vec![p("-x")]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn exhausted_outside_closure() {
        let o = dependence_search(&p("y"), &[p("x")], &[], &bounds()).unwrap();
        assert!(matches!(o, DependenceOutcome::Exhausted { .. }));
    }

    #[test]
    fn modulo_relations() {
        // on the cusp x^2 = y^3, x lies in the closure of (y) but not in (y)
        let rel = vec![p("x^2 - y^3")];
        match dependence_search(&p("x"), &[p("y")], &rel, &bounds()).unwrap() {
            DependenceOutcome::Found(c) => assert!(c.verify(&p("x"), &[p("y")], &rel).unwrap()),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn gradings() {
        let w = detect_grading(2, &[&p("x^2 - y^3")]).unwrap();
        assert_eq!(w, vec![3, 2]);
        assert!(detect_grading(2, &[&p("x + y^2 + x*y")]).is_none());
    }
}
