use std::fmt;

use num_traits::{One, Zero};

use super::poly::{rat, Poly, Rational};
use crate::error::{Error, Result};

/// Default truncation order for every series computation.
pub const DEFAULT_TRUNCATION: usize = 50;

/// Univariate power series in `t` known up to and including `t^order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Coefficients beyond `order` are discarded; missing ones are zero.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Index of the first nonzero coefficient, `None` when the series is zero
    /// to its known precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        TruncSeries { coeffs: (0..=n).map(|k| &self.coeffs[k] - &o.coeffs[k]).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Product, carrying the smaller of the two truncations.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > n {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j > n {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TruncSeries::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Series("inverse of a non-unit series".into()));
        }
        let n = self.order();
        let inv0 = Rational::one() / c0;
        let mut b = vec![Rational::zero(); n + 1];
        b[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &b[k - j];
                }
            }
            b[k] = -(acc * &inv0);
        }
        Ok(TruncSeries { coeffs: b })
    }

    /// Divides by `t^v`; the top `v` coefficients become unknown.
    pub fn shift_down(&self, v: usize) -> Result<Self> {
        if self.coeffs.iter().take(v).any(|c| !c.is_zero()) {
            return Err(Error::Series(format!("series is not divisible by t^{v}")));
        }
        if v > self.order() {
            return Err(Error::Series("shift exceeds truncation".into()));
        }
        Ok(TruncSeries { coeffs: self.coeffs[v..].to_vec() })
    }

    /// Exact quotient `self / d`, requiring `val(self) >= val(d)`.
    pub fn div(&self, d: &Self) -> Result<Self> {
        let vd = d
            .valuation()
            .ok_or_else(|| Error::Series("division by a series that is zero to precision".into()))?;
        let num = self.shift_down(vd)?;
        let den = d.shift_down(vd)?;
        let n = num.order().min(den.order());
        Ok(num.truncate(n).mul(&den.truncate(n).inverse()?).truncate(n))
    }

    /// `self^(a)` for rational `a`, for a series with constant term 1.
    pub fn pow_rational(&self, a: &Rational) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Series("constant term must be 1".into()));
        }
        let n = self.order();
        let mut b = vec![Rational::zero(); n + 1];
        b[0] = Rational::one();
        let a1 = a + Rational::one();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = &a1 * rat(j as i64) - rat(k as i64);
                acc += w * &self.coeffs[j] * &b[k - j];
            }
            b[k] = acc / rat(k as i64);
        }
        Ok(TruncSeries { coeffs: b })
    }

    /// `n`-th root of a series with constant term 1.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("root index must be at least 1".into()));
        }
        self.pow_rational(&Rational::new(1.into(), (n as i64).into()))
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return TruncSeries::zero(0);
        }
        TruncSeries {
            coeffs: (1..=n).map(|k| &self.coeffs[k] * rat(k as i64)).collect(),
        }
    }

    /// `self(inner(t))` for `inner` without constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Series("inner series must vanish at 0".into()));
        }
        let n = self.order().min(inner.order());
        let mut acc = TruncSeries::zero(n);
        let mut power = TruncSeries::one(n);
        for k in 0..=n {
            if !self.coeffs[k].is_zero() {
                acc = acc.add(&power.scale(&self.coeffs[k]));
            }
            power = power.mul(inner).truncate(n);
        }
        Ok(acc)
    }

    /// Lifts a polynomial in one variable (index `var` of a ring with `nvars`
    /// variables; others must not occur) to a series.
    pub fn from_univariate(p: &Poly, var: usize, order: usize) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (m, c) in p.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if i != var && e > 0 {
                    return Err(Error::Series("polynomial is not univariate".into()));
                }
            }
            let e = m.exps()[var] as usize;
            if e <= order {
                coeffs[e] += c;
            }
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl Poly {
    /// Composition with an arc: variable `i` becomes the series `arc[i]`.
    pub fn eval_series(&self, arc: &[TruncSeries]) -> TruncSeries {
        assert_eq!(arc.len(), self.nvars());
        let order = arc.iter().map(TruncSeries::order).min().unwrap_or(DEFAULT_TRUNCATION);
        let mut powers: Vec<Vec<TruncSeries>> = vec![Vec::new(); arc.len()];
        let mut acc = TruncSeries::zero(order);
        for (m, c) in self.terms() {
            let mut t = TruncSeries::constant(c.clone(), order);
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let ps = &mut powers[i];
                if ps.is_empty() {
                    ps.push(TruncSeries::one(order));
                }
                while ps.len() <= e as usize {
                    let next = ps.last().unwrap().mul(&arc[i]).truncate(order);
                    ps.push(next);
                }
                t = t.mul(&ps[e as usize]).truncate(order);
            }
            acc = acc.add(&t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::ratio;

    fn series(c: &[i64], n: usize) -> TruncSeries {
        TruncSeries::from_coeffs(c.iter().map(|&x| rat(x)).collect(), n)
    }

    #[test]
    fn square_root_of_one_plus_s() {
        let c = series(&[1, 1], 3);
        let r = c.nth_root(2).unwrap();
        assert_eq!(
            r.coeffs(),
            &[rat(1), ratio(1, 2), ratio(-1, 8), ratio(1, 16)]
        );
        // squaring recovers the input to truncation
        assert_eq!(r.mul(&r).truncate(3), c);
    }

    #[test]
    fn exact_roots() {
        assert_eq!(series(&[1], 5).nth_root(3).unwrap(), series(&[1], 5));
        assert_eq!(series(&[1, 2, 1], 6).nth_root(2).unwrap(), series(&[1, 1], 6));
        assert!(series(&[2, 1], 4).nth_root(2).is_err());
        assert!(series(&[1, 1], 4).nth_root(0).is_err());
    }

    #[test]
    fn inverse_and_division() {
        let a = series(&[1, -1], 10);
        let inv = a.inverse().unwrap();
        assert!(inv.coeffs().iter().all(|c| c == &rat(1)));
        let num = series(&[0, 0, 3, 3], 10);
        let den = series(&[0, 1, 1], 10);
        let q = num.div(&den).unwrap();
        assert_eq!(q.truncate(5), series(&[0, 3], 5));
    }

    #[test]
    fn product_truncation_is_min() {
        let a = series(&[0, 0, 1], 5);
        let b = series(&[1, 1], 3);
        assert_eq!(a.mul(&b).order(), 3);
    }

    #[test]
    fn poly_on_arc() {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let p = Poly::parse("x^2 - y^3", &names).unwrap();
        let arc = [series(&[0, 0, 0, 1], 12), series(&[0, 0, 1], 12)];
        assert!(p.eval_series(&arc).is_zero());
    }
}
