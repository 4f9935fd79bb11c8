//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' unary)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero constant, which is how rational
//! coefficients such as `3/2*z1` are written. Exponents must evaluate to
//! nonnegative integer constants. Whitespace is insignificant.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Monomial, Poly, Rational};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    match rhs.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::one() / c)),
                        Some(_) => return self.err(at, "division by zero"),
                        None => return self.err(at, "division by a non-constant polynomial"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            let e = self.unary()?;
            let e = match e.constant_value() {
                Some(c) if c.is_integer() && !c.is_negative() => c.to_integer(),
                _ => return self.err(at, "exponent must be a nonnegative integer"),
            };
            let e = match e.to_u32() {
                Some(e) => e,
                None => return self.err(at, "exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let start = match self.peek() {
            Some(_) => self.pos,
            None => return self.err(self.pos, "unexpected end of input"),
        };
        let c = self.src[start];
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if self.peek() != Some(b')') {
                return self.err(self.pos, "expected `)`");
            }
            self.pos += 1;
            return Ok(inner);
        }
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let n: BigInt = digits.parse().unwrap();
            return Ok(Poly::constant(self.nvars(), Rational::from_integer(n)));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return match self.names.iter().position(|n| n == ident) {
                Some(i) => Ok(Poly::var(self.nvars(), i)),
                None => self.err(start, format!("unknown variable `{ident}`")),
            };
        }
        self.err(start, format!("unexpected character `{}`", c as char))
    }
}

impl Poly {
    /// Parses `src` over the ring whose variables are `names`, in order.
    pub fn parse(src: &str, names: &[String]) -> Result<Poly> {
        let mut p = Parser { src: src.as_bytes(), pos: 0, names };
        let out = p.expr()?;
        if p.peek().is_some() {
            return p.err(p.pos, "trailing input");
        }
        Ok(out)
    }

    /// Canonical text form: terms by descending total degree, ties broken by
    /// descending exponent vector; `parse(to_string_with(p)) == p`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        assert_eq!(names.len(), self.nvars(), "wrong number of variable names");
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms().collect();
        terms.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{e}", names[i]) })
                .collect();
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn precedence_and_rationals() {
        let n = names(&["x", "y"]);
        let p = Poly::parse("3/2*x^2 - (x - y)^2 + 2^3", &n).unwrap();
        assert_eq!(p.to_string_with(&n), "1/2*x^2 + 2*x*y - y^2 + 8");
        assert_eq!(Poly::parse(&p.to_string_with(&n), &n).unwrap(), p);
    }

    #[test]
    fn unary_minus_and_whitespace() {
        let n = names(&["x"]);
        let p = Poly::parse(" - x ^ 2 -  - 1 ", &n).unwrap();
        assert_eq!(p.to_string_with(&n), "-x^2 + 1");
        assert_eq!(Poly::parse("-x^2", &n).unwrap(), -Poly::parse("x^2", &n).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let n = names(&["x", "y"]);
        match Poly::parse("x + * y", &n) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match Poly::parse("x + w", &n) {
            Err(Error::Parse { pos, msg }) => {
                assert_eq!(pos, 4);
                assert!(msg.contains("`w`"));
            }
            other => panic!("{other:?}"),
        }
        assert!(Poly::parse("x/y", &n).is_err());
        assert!(Poly::parse("x^(1/2)", &n).is_err());
        assert!(Poly::parse("(x + y", &n).is_err());
        assert!(Poly::parse("", &n).is_err());
    }

    #[test]
    fn zero_renders() {
        let n = names(&["x"]);
        assert_eq!(Poly::parse("x - x", &n).unwrap().to_string_with(&n), "0");
    }
}
