use num_traits::{One, Zero};

use super::poly::{rat, Monomial, Poly, Rational};
use crate::error::{Error, Result};

pub const T: usize = 0;
pub const S: usize = 1;

/// Power series in `(t, s)` known for every term `t^i s^j` with `i + j <= order`.
///
/// Stored as a polynomial in the two variables `t` (index 0) and `s`
/// (index 1) with all terms of total degree above `order` removed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiSeries {
    poly: Poly,
    order: usize,
}

impl BiSeries {
    pub fn from_poly(p: &Poly, order: usize) -> Self {
        assert_eq!(p.nvars(), 2, "bivariate series need a two-variable polynomial");
        let poly = Poly::from_terms(
            2,
            p.terms().filter(|(m, _)| m.degree() as usize <= order).map(|(m, c)| (m.clone(), c.clone())),
        );
        BiSeries { poly, order }
    }

    /// From `[coeff, i, j]` triples meaning `coeff * t^i * s^j`.
    pub fn from_terms(terms: &[(Rational, u32, u32)], order: usize) -> Self {
        let p = Poly::from_terms(
            2,
            terms.iter().map(|(c, i, j)| (Monomial::from_exps(vec![*i, *j]), c.clone())),
        );
        Self::from_poly(&p, order)
    }

    pub fn zero(order: usize) -> Self {
        BiSeries { poly: Poly::zero(2), order }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::from_poly(&Poly::constant(2, c), order)
    }

    pub fn t(order: usize) -> Self {
        Self::from_poly(&Poly::var(2, T), order)
    }

    pub fn s(order: usize) -> Self {
        Self::from_poly(&Poly::var(2, S), order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.poly.coeff(&Monomial::from_exps(vec![i, j]))
    }

    /// Triples `(coeff, i, j)` in canonical order.
    pub fn terms(&self) -> Vec<(Rational, u32, u32)> {
        self.poly.terms().map(|(m, c)| (c.clone(), m.exps()[0], m.exps()[1])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_poly(&self.poly, order.min(self.order))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_poly(&(&self.poly + &o.poly), self.order.min(o.order))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_poly(&(&self.poly - &o.poly), self.order.min(o.order))
    }

    pub fn neg(&self) -> Self {
        BiSeries { poly: -&self.poly, order: self.order }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BiSeries { poly: self.poly.scale(c), order: self.order }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order.min(o.order);
        let a = self.truncate(n);
        let b = o.truncate(n);
        let mut out = Poly::zero(2);
        for (m1, c1) in a.poly.terms() {
            for (m2, c2) in b.poly.terms() {
                if (m1.degree() + m2.degree()) as usize <= n {
                    out.add_term(m1.mul(m2), c1 * c2);
                }
            }
        }
        BiSeries { poly: out, order: n }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Rational::one(), self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Smallest `j` such that some `t^i s^j` occurs; `None` for zero.
    pub fn s_order(&self) -> Option<u32> {
        self.poly.terms().map(|(m, _)| m.exps()[S]).min()
    }

    /// Coefficient of `s^j` as a series in `t` (known up to `t^(order - j)`).
    pub fn s_coefficient(&self, j: u32) -> BiSeries {
        let order = self.order.saturating_sub(j as usize);
        let p = Poly::from_terms(
            2,
            self.poly
                .terms()
                .filter(|(m, _)| m.exps()[S] == j)
                .map(|(m, c)| (Monomial::from_exps(vec![m.exps()[T], 0]), c.clone())),
        );
        Self::from_poly(&p, order)
    }

    /// Divides by `s^p`; fails when some term has lower `s`-degree.
    pub fn shift_s_down(&self, p: u32) -> Result<Self> {
        if self.s_order().is_some_and(|o| o < p) {
            return Err(Error::Series(format!("series is not divisible by s^{p}")));
        }
        if p as usize > self.order {
            return Err(Error::Series("shift exceeds truncation".into()));
        }
        let poly = Poly::from_terms(
            2,
            self.poly
                .terms()
                .map(|(m, c)| (Monomial::from_exps(vec![m.exps()[T], m.exps()[S] - p]), c.clone())),
        );
        Ok(BiSeries { poly, order: self.order - p as usize })
    }

    pub fn partial_t(&self) -> Self {
        BiSeries { poly: self.poly.differentiate(T), order: self.order.saturating_sub(1) }
    }

    pub fn partial_s(&self) -> Self {
        BiSeries { poly: self.poly.differentiate(S), order: self.order.saturating_sub(1) }
    }

    fn homogeneous_part(&self, k: u32) -> Poly {
        Poly::from_terms(
            2,
            self.poly.terms().filter(|(m, _)| m.degree() == k).map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// `self^a` for rational `a`, for a series with constant term 1.
    ///
    /// Uses the Euler-operator recurrence on homogeneous components:
    /// `B_k = (1/k) * sum_{j=1..k} ((a+1) j - k) C_j B_{k-j}`.
    pub fn pow_rational(&self, a: &Rational) -> Result<Self> {
        if !self.poly.constant_term().is_one() {
            return Err(Error::Series("constant term must be 1".into()));
        }
        let n = self.order;
        let comps: Vec<Poly> = (0..=n as u32).map(|k| self.homogeneous_part(k)).collect();
        let mut out: Vec<Poly> = vec![Poly::one(2)];
        let a1 = a + Rational::one();
        for k in 1..=n {
            let mut acc = Poly::zero(2);
            for j in 1..=k {
                if comps[j].is_zero() {
                    continue;
                }
                let w = &a1 * rat(j as i64) - rat(k as i64);
                if w.is_zero() {
                    continue;
                }
                acc = acc + (&comps[j] * &out[k - j]).scale(&w);
            }
            out.push(acc.scale(&(Rational::one() / rat(k as i64))));
        }
        let poly = out.into_iter().fold(Poly::zero(2), |x, y| x + y);
        Ok(BiSeries { poly, order: n })
    }

    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("root index must be at least 1".into()));
        }
        self.pow_rational(&Rational::new(1.into(), (n as i64).into()))
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.poly.constant_term();
        if c0.is_zero() {
            return Err(Error::Series("inverse of a non-unit series".into()));
        }
        let inv0 = Rational::one() / c0;
        Ok(self.scale(&inv0).pow_rational(&rat(-1))?.scale(&inv0))
    }

    /// `self(t, inner(t, s))`; `inner` must vanish at the origin.
    pub fn compose_s(&self, inner: &BiSeries) -> Result<Self> {
        if !inner.poly.constant_term().is_zero() {
            return Err(Error::Series("inner series must vanish at the origin".into()));
        }
        let n = self.order.min(inner.order);
        let inner = inner.truncate(n);
        let tvar = BiSeries::t(n);
        let mut spowers = vec![BiSeries::constant(Rational::one(), n)];
        let mut tpowers = vec![BiSeries::constant(Rational::one(), n)];
        let mut acc = BiSeries::zero(n);
        for (m, c) in self.truncate(n).poly.terms() {
            let (i, j) = (m.exps()[T] as usize, m.exps()[S] as usize);
            while spowers.len() <= j {
                let next = spowers.last().unwrap().mul(&inner);
                spowers.push(next);
            }
            while tpowers.len() <= i {
                let next = tpowers.last().unwrap().mul(&tvar);
                tpowers.push(next);
            }
            acc = acc.add(&tpowers[i].mul(&spowers[j]).scale(c));
        }
        Ok(acc)
    }

    /// Solves `sigma = s * u(t, s)` for `s` as a series in `(t, sigma)`,
    /// where `u` has constant term 1. Returns `S(t, sigma)`.
    pub fn invert_s_times_unit(u: &BiSeries) -> Result<Self> {
        if !u.poly.constant_term().is_one() {
            return Err(Error::Series("unit must have constant term 1".into()));
        }
        let n = u.order;
        let sigma = BiSeries::s(n);
        // the top-degree terms of u_s are unknown but only ever meet phi,
        // which has no terms below degree 2
        let du = Self::from_poly(&u.poly.differentiate(S), n);
        let mut cur = sigma.clone();
        // Newton on S*u(t, S) - sigma; the known degree doubles per pass
        for _ in 0..=n {
            let us = u.compose_s(&cur)?;
            let phi = cur.mul(&us).sub(&sigma).truncate(n);
            if phi.is_zero() {
                break;
            }
            let dphi = us.add(&cur.mul(&du.compose_s(&cur)?));
            cur = cur.sub(&phi.mul(&dphi.inverse()?)).truncate(n);
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::ratio;

    fn bs(src: &str, n: usize) -> BiSeries {
        let names = vec!["t".to_string(), "s".to_string()];
        BiSeries::from_poly(&Poly::parse(src, &names).unwrap(), n)
    }

    #[test]
    fn bivariate_root() {
        let c = bs("1 + s + t*s", 8);
        let r = c.nth_root(2).unwrap();
        assert_eq!(r.mul(&r), c);
        assert_eq!(r.coeff(0, 1), ratio(1, 2));
        assert_eq!(r.coeff(0, 2), ratio(-1, 8));
    }

    #[test]
    fn inversion_of_reparametrization() {
        let u = bs("1 + s + 2*t*s", 10);
        let inv = BiSeries::invert_s_times_unit(&u).unwrap();
        // sigma = S * u(t, S)
        let back = inv.mul(&u.compose_s(&inv).unwrap());
        assert_eq!(back.truncate(10), bs("s", 10));
    }

    #[test]
    fn s_order_and_shift() {
        let f = bs("s^3 + t*s^4", 10);
        assert_eq!(f.s_order(), Some(3));
        assert_eq!(f.shift_s_down(3).unwrap(), bs("1 + t*s", 7));
        assert!(f.shift_s_down(4).is_err());
    }
}
