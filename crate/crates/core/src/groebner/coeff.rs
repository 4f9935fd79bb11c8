use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::exactalg::Rational;

/// Field operations needed by the Gröbner engine.
pub trait Coeff: Clone + PartialEq + Debug {
    fn is_zero_coeff(&self) -> bool;
    fn is_one_coeff(&self) -> bool;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
}

impl Coeff for Rational {
    fn is_zero_coeff(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one_coeff(&self) -> bool {
        One::is_one(self)
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Element of the prime field with modulus `m` (prime, below 2^32).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub v: u64,
    pub m: u64,
}

impl Fp {
    pub fn new(v: u64, m: u64) -> Self {
        Fp { v: v % m, m }
    }

    /// Reduction of a rational; `None` when the denominator vanishes mod `m`.
    pub fn from_rational(q: &Rational, m: u64) -> Option<Fp> {
        let red = |x: &BigInt| -> u64 {
            let r = x.mod_floor(&BigInt::from(m));
            r.to_u64().unwrap()
        };
        let d = red(q.denom());
        if d == 0 {
            return None;
        }
        let n = red(q.numer());
        Some(Fp::new(n, m).mul(&Fp::new(d, m).inv()))
    }

    /// Symmetric lift to an integer in `(-m/2, m/2]`.
    pub fn lift(&self) -> Rational {
        let v = if self.v > self.m / 2 { self.v as i64 - self.m as i64 } else { self.v as i64 };
        Rational::from_integer(BigInt::from(v))
    }
}

impl Coeff for Fp {
    fn is_zero_coeff(&self) -> bool {
        self.v == 0
    }
    fn is_one_coeff(&self) -> bool {
        self.v == 1
    }
    fn one_like(&self) -> Self {
        Fp::new(1, self.m)
    }
    fn add(&self, o: &Self) -> Self {
        Fp::new(self.v + o.v, self.m)
    }
    fn sub(&self, o: &Self) -> Self {
        Fp::new(self.v + self.m - o.v, self.m)
    }
    fn mul(&self, o: &Self) -> Self {
        Fp::new(self.v * o.v, self.m)
    }
    fn neg(&self) -> Self {
        Fp::new(self.m - self.v, self.m)
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero in a prime field");
        // Fermat
        let mut base = self.v;
        let mut e = self.m - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.m;
            }
            base = base * base % self.m;
            e >>= 1;
        }
        Fp { v: acc, m: self.m }
    }
}
