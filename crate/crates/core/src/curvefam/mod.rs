//! Families of irreducible curves parametrized as
//! `(t, s) ↦ (t, F_1(t, s), …, F_n(t, s))`: normal form, implicitization,
//! the Cramer field of a square Jacobian block and the bi-Lipschitz test.

mod implicit;

pub use implicit::{
    bilip_verdict, chain_rule_check, cramer_field, implicitize, verify_cramer, ChainRuleReport, CramerFraction,
    Implicitization, SeriesIdentity,
};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{BiSeries, Poly, Rational};

pub(crate) fn ts_names() -> Vec<String> {
    vec!["t".to_string(), "s".to_string()]
}

/// Text form of a series, with its truncation.
pub fn render_series(b: &BiSeries) -> String {
    format!("{} + O({})", b.poly().to_string_with(&ts_names()), b.order() + 1)
}

fn s_power(p: u32, order: usize) -> BiSeries {
    BiSeries::from_terms(&[(Rational::one(), 0, p)], order)
}

/// Compares two series on the terms both of them know.
pub(crate) fn agree(a: &BiSeries, b: &BiSeries) -> bool {
    let n = a.order().min(b.order());
    a.truncate(n) == b.truncate(n)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveFamilyParam {
    coords: Vec<BiSeries>,
    p: u32,
    truncation: usize,
    polys: Option<Vec<Poly>>,
    normal: bool,
}

impl CurveFamilyParam {
    /// Coordinates `F_1..F_n` after `t`; each must vanish along `s = 0`.
    /// The multiplicity is the smallest `s`-order among them.
    pub fn new(coords: Vec<BiSeries>, truncation: usize) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("a curve family needs at least one coordinate besides t".into()));
        }
        let coords: Vec<BiSeries> = coords.iter().map(|c| c.truncate(truncation)).collect();
        for (i, c) in coords.iter().enumerate() {
            if !c.s_coefficient(0).is_zero() {
                return Err(Error::InvalidArgument(format!("F_{} does not vanish along s = 0", i + 1)));
            }
        }
        let p = coords
            .iter()
            .filter_map(BiSeries::s_order)
            .min()
            .ok_or_else(|| Error::InvalidArgument("all coordinates vanish".into()))?;
        Ok(CurveFamilyParam { coords, p, truncation, polys: None, normal: false })
    }

    /// Polynomial coordinates in the variables `(t, s)`.
    pub fn from_polys(polys: Vec<Poly>, truncation: usize) -> Result<Self> {
        if polys.iter().any(|p| p.nvars() != 2) {
            return Err(Error::RingMismatch("coordinates must be polynomials in (t, s)".into()));
        }
        let series = polys.iter().map(|p| BiSeries::from_poly(p, truncation)).collect();
        let mut out = Self::new(series, truncation)?;
        out.polys = Some(polys);
        Ok(out)
    }

    /// From `[coeff, i, j]` term lists meaning `coeff·t^i·s^j`. With
    /// `polynomial` set the lists are taken as exact polynomials.
    pub fn from_term_lists(lists: &[Vec<(Rational, u32, u32)>], truncation: usize, polynomial: bool) -> Result<Self> {
        if polynomial {
            let polys = lists
                .iter()
                .map(|l| {
                    let mut p = Poly::zero(2);
                    for (c, i, j) in l {
                        p.add_term(crate::exactalg::Monomial::from_exps(vec![*i, *j]), c.clone());
                    }
                    p
                })
                .collect();
            Self::from_polys(polys, truncation)
        } else {
            Self::new(lists.iter().map(|l| BiSeries::from_terms(l, truncation)).collect(), truncation)
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BiSeries] {
        &self.coords
    }

    pub fn multiplicity(&self) -> u32 {
        self.p
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn polys(&self) -> Option<&[Poly]> {
        self.polys.as_deref()
    }

    pub fn is_normal_form(&self) -> bool {
        self.normal
    }

    /// Checks the normal-form shape: last coordinate `s^p`, the others of
    /// `s`-order above `p`, up to truncation.
    pub fn check_normal_form(&self) -> Result<()> {
        let n = self.n();
        let last = &self.coords[n - 1];
        if !agree(last, &s_power(self.p, self.truncation)) {
            return Err(Error::InvalidArgument(format!(
                "last coordinate {} is not s^{}",
                render_series(last),
                self.p
            )));
        }
        for (i, c) in self.coords[..n - 1].iter().enumerate() {
            if c.s_order().is_some_and(|o| o <= self.p) {
                return Err(Error::InvalidArgument(format!("F_{} has s-order at most {}", i + 1, self.p)));
            }
        }
        Ok(())
    }

    /// Sets the normal-form flag after checking it.
    pub fn into_normal_form(mut self) -> Result<Self> {
        self.check_normal_form()?;
        self.normal = true;
        Ok(self)
    }

    pub fn render(&self) -> Vec<String> {
        self.coords.iter().map(render_series).collect()
    }
}

/// `L(t, z) = (t, z_1 + v_1(t) z_n, …, z_{n-1} + v_{n-1}(t) z_n, v_n(t) z_n)`
/// applied after moving coordinate `pivot` into the last slot.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearChange {
    /// Coordinate swapped with the last one (the last itself when no swap).
    pub pivot: usize,
    pub v: Vec<BiSeries>,
}

impl LinearChange {
    fn swap<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let mut out = x.to_vec();
        let n = out.len();
        out.swap(self.pivot, n - 1);
        out
    }

    pub fn is_identity(&self) -> bool {
        let n = self.v.len();
        self.pivot == n - 1
            && self.v[..n - 1].iter().all(BiSeries::is_zero)
            && self.v[n - 1] == BiSeries::constant(Rational::one(), self.v[n - 1].order())
    }

    /// Image of the normalized coordinates in the original ones.
    pub fn apply(&self, z: &[BiSeries]) -> Vec<BiSeries> {
        let n = z.len();
        let zn = &z[n - 1];
        let mut out: Vec<BiSeries> = (0..n - 1).map(|i| z[i].add(&self.v[i].mul(zn))).collect();
        out.push(self.v[n - 1].mul(zn));
        self.swap(&out)
    }

    pub fn apply_inverse(&self, w: &[BiSeries]) -> Result<Vec<BiSeries>> {
        let w = self.swap(w);
        let n = w.len();
        let last = w[n - 1].mul(&self.v[n - 1].inverse()?);
        let mut out: Vec<BiSeries> = (0..n - 1).map(|i| w[i].sub(&self.v[i].mul(&last))).collect();
        out.push(last);
        Ok(out)
    }

    pub fn render(&self) -> Vec<String> {
        self.v.iter().map(render_series).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AuditEntry {
    pub step: String,
    pub series: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalFormResult {
    pub linear: LinearChange,
    /// `u = c^{1/p}`, so that `R(t, s) = (t, s·u(t, s))`.
    pub reparam_unit: BiSeries,
    /// `S` with `R^{-1}(t, σ) = (t, S(t, σ))`.
    pub inverse_reparam: BiSeries,
    pub family: CurveFamilyParam,
    pub audit: Vec<AuditEntry>,
}

impl NormalFormResult {
    pub fn reparam_is_identity(&self) -> bool {
        self.reparam_unit == BiSeries::constant(Rational::one(), self.reparam_unit.order())
    }

    /// `L(F̃∘R)` against the input, on the terms both sides know.
    pub fn verify(&self, input: &CurveFamilyParam) -> Result<bool> {
        let r = BiSeries::s(self.reparam_unit.order()).mul(&self.reparam_unit);
        let back: Vec<BiSeries> =
            self.family.coords.iter().map(|c| c.compose_s(&r)).collect::<Result<Vec<_>>>()?;
        let back = self.linear.apply(&back);
        Ok(back.iter().zip(&input.coords).all(|(a, b)| agree(a, b)))
    }
}

/// Brings a family with `F = s^p v(t) mod s^{p+1}`, `v(0) ≠ 0`, into the
/// form `(t, F̃_1, …, F̃_{n-1}, s^p)` with `ord_s F̃_i > p`.
pub fn normal_form(param: &CurveFamilyParam) -> Result<NormalFormResult> {
    let p = param.p;
    let n = param.n();
    let v: Vec<BiSeries> = param.coords.iter().map(|c| c.s_coefficient(p)).collect();
    let v0: Vec<Rational> = v.iter().map(|x| x.coeff(0, 0)).collect();
    let pivot = if !v0[n - 1].is_zero() {
        n - 1
    } else {
        (0..n).rev().find(|&i| !v0[i].is_zero()).ok_or_else(|| {
            Error::InvalidArgument(format!("v(0) = 0: the multiplicity of the family is not {p}"))
        })?
    };
    let mut linear = LinearChange { pivot, v: Vec::new() };
    linear.v = linear.swap(&v);
    let mut audit = vec![
        AuditEntry { step: "input".into(), series: param.render() },
        AuditEntry { step: format!("v(t), coefficient of s^{p}"), series: linear.render() },
    ];
    let g = linear.apply_inverse(&param.coords)?;
    audit.push(AuditEntry { step: "L^-1 F".into(), series: g.iter().map(render_series).collect() });
    let c = g[n - 1].shift_s_down(p)?;
    if !c.coeff(0, 0).is_one() {
        return Err(Error::InvalidArgument(format!("c(0, 0) = {} is not a unit normalized to 1", c.coeff(0, 0))));
    }
    let u = c.nth_root(p)?;
    let big_s = BiSeries::invert_s_times_unit(&u)?;
    audit.push(AuditEntry { step: "c(t, s)".into(), series: vec![render_series(&c)] });
    audit.push(AuditEntry { step: format!("c^(1/{p})"), series: vec![render_series(&u)] });
    audit.push(AuditEntry { step: "R^-1".into(), series: vec![render_series(&big_s)] });
    let coords: Vec<BiSeries> = g.iter().map(|x| x.compose_s(&big_s)).collect::<Result<Vec<_>>>()?;
    let order = coords.iter().map(BiSeries::order).min().unwrap_or(0);
    let coords: Vec<BiSeries> = coords.iter().map(|x| x.truncate(order)).collect();
    audit.push(AuditEntry { step: "L^-1 F R^-1".into(), series: coords.iter().map(render_series).collect() });
    let family = CurveFamilyParam { coords, p, truncation: order, polys: None, normal: false };
    let family = family.into_normal_form().map_err(|e| Error::Internal(format!("normal form check failed: {e}")))?;
    let out = NormalFormResult { linear, reparam_unit: u, inverse_reparam: big_s, family, audit };
    if !out.verify(param)? {
        return Err(Error::Internal("normal form does not recompose to the input".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn param(src: &[&str], n: usize) -> CurveFamilyParam {
        let polys = src.iter().map(|s| Poly::parse(s, &ts_names()).unwrap()).collect();
        CurveFamilyParam::from_polys(polys, n).unwrap()
    }

    fn bs(src: &str, n: usize) -> BiSeries {
        BiSeries::from_poly(&Poly::parse(src, &ts_names()).unwrap(), n)
    }

    #[test]
    fn already_normal() {
        let f = param(&["s^3", "s^2"], 30);
        assert_eq!(f.multiplicity(), 2);
        let r = normal_form(&f).unwrap();
        assert!(r.linear.is_identity());
        assert!(r.reparam_is_identity());
        assert!(agree(&r.family.coords()[0], &bs("s^3", 30)));
        assert!(r.family.is_normal_form());
    }

    #[test]
    fn unit_in_last_coordinate() {
        let f = param(&["s^3", "s^2*(1 + s)"], 50);
        let r = normal_form(&f).unwrap();
        let fam = &r.family;
        assert!(agree(&fam.coords()[1], &bs("s^2", 50)));
        assert_eq!(fam.coords()[1].s_order(), Some(2));
        assert_eq!(fam.coords()[0].s_order(), Some(3));
        assert_eq!(r.reparam_unit.coeff(0, 1), crate::exactalg::ratio(1, 2));
        assert!(r.verify(&f).unwrap());
    }

    #[test]
    fn shear_then_reparametrize() {
        let f = param(&["s^2", "s^2 + s^3"], 40);
        let r = normal_form(&f).unwrap();
        assert_eq!(r.linear.v[0], bs("1", 38));
        let g = r.linear.apply_inverse(f.coords()).unwrap();
        assert!(agree(&g[0], &bs("-s^3", 40)));
        assert!(agree(&g[1], &bs("s^2 + s^3", 40)));
        assert!(r.family.is_normal_form());
    }

    #[test]
    fn swaps_when_last_slot_vanishes() {
        let f = param(&["2*s^2 + t*s^2", "s^3"], 30);
        let r = normal_form(&f).unwrap();
        assert_eq!(r.linear.pivot, 0);
        assert!(r.verify(&f).unwrap());
        assert_eq!(r.family.coords()[0].s_order(), Some(3));
    }

    #[test]
    fn rejects_degenerate_input() {
        let f = param(&["t*s^2", "s^3"], 20);
        assert!(matches!(normal_form(&f), Err(Error::InvalidArgument(_))));
        let fam = CurveFamilyParam::new(vec![bs("t + s", 10)], 10);
        assert!(fam.is_err());
        assert!(param(&["s^2", "s^2"], 10).into_normal_form().is_err());
    }
}
