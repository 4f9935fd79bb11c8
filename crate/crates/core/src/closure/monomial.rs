//! Integral closure of monomial ideals through the Newton polyhedron.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, Rational};

/// Outcome of testing `x^alpha` against the Newton polyhedron of `exps`.
#[derive(Clone, PartialEq, Debug)]
pub enum NewtonTest {
    /// `Σ λ_j e_j <= alpha` with `λ >= 0`, `Σ λ_j = 1`.
    Inside { lambda: Vec<Rational> },
    /// `w·e_j > w·alpha` for every generator, `w >= 0`.
    Outside { weights: Vec<Rational> },
}

/// `max c·x` subject to `A x <= b`, `x >= 0`, with `b >= 0`. Returns the
/// optimal primal point, the dual solution and the optimum.
fn simplex(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Rational) {
    let m = a.len();
    let n = c.len();
    // tableau rows: constraints with slacks, then objective row (negated costs)
    let width = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![Rational::zero(); width];
        row[..n].clone_from_slice(&a[i]);
        row[n + i] = Rational::one();
        row[width - 1] = b[i].clone();
        t.push(row);
    }
    let mut obj = vec![Rational::zero(); width];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();
    loop {
        // Bland: smallest index with negative reduced cost
        let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // bounded by construction (w <= 1 and tau <= w·e_j)
        let (li, _) = leave.expect("bounded program");
        let pv = t[li][enter].clone();
        for x in t[li].iter_mut() {
            *x = &*x / &pv;
        }
        let prow = t[li].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == li || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x = &*x - &f * p;
            }
        }
        basis[li] = enter;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    let y: Vec<Rational> = (0..m).map(|i| t[m][n + i].clone()).collect();
    (x, y, t[m][width - 1].clone())
}

/// Decides whether `alpha` lies in `conv(exps) + R^n_{>=0}`.
pub fn newton_test(exps: &[Vec<u32>], alpha: &[u32]) -> NewtonTest {
    let n = alpha.len();
    let k = exps.len();
    if k == 0 {
        return NewtonTest::Outside { weights: vec![Rational::zero(); n] };
    }
    // variables (w_1..w_n, tau); maximize tau - w·alpha
    let q = |v: u32| Rational::from_integer(v.into());
    let mut a = Vec::new();
    let mut b = Vec::new();
    for e in exps {
        let mut row: Vec<Rational> = e.iter().map(|&x| -q(x)).collect();
        row.push(Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    for i in 0..n {
        let mut row = vec![Rational::zero(); n + 1];
        row[i] = Rational::one();
        a.push(row);
        b.push(Rational::one());
    }
    let mut c: Vec<Rational> = alpha.iter().map(|&x| -q(x)).collect();
    c.push(Rational::one());
    let (x, y, opt) = simplex(&a, &b, &c);
    if opt.is_positive() {
        NewtonTest::Outside { weights: x[..n].to_vec() }
    } else {
        let lam = &y[..k];
        let s: Rational = lam.iter().sum();
        NewtonTest::Inside { lambda: lam.iter().map(|l| l / &s).collect() }
    }
}

/// Exponent vectors of a monomial generating set.
pub fn monomial_exponents(gens: &[Poly]) -> Result<Vec<Vec<u32>>> {
    gens.iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            if !g.is_monomial() {
                return Err(Error::InvalidArgument("generator is not a single term".into()));
            }
            Ok(g.terms().next().unwrap().0.exps().to_vec())
        })
        .collect()
}

/// Minimal monomial generators of the integral closure, sorted
/// lexicographically from the largest power of the first variable down.
pub fn monomial_closure(nvars: usize, gens: &[Poly]) -> Result<Vec<Poly>> {
    let exps = monomial_exponents(gens)?;
    if exps.is_empty() {
        return Ok(Vec::new());
    }
    let top: Vec<u32> = (0..nvars).map(|i| exps.iter().map(|e| e[i]).max().unwrap()).collect();
    let mut inside: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        if matches!(newton_test(&exps, &cur), NewtonTest::Inside { .. }) {
            inside.push(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == nvars {
                let mut minimal: Vec<Vec<u32>> = inside
                    .iter()
                    .filter(|a| !inside.iter().any(|b| b != *a && b.iter().zip(a.iter()).all(|(x, y)| x <= y)))
                    .cloned()
                    .collect();
                minimal.sort_by(|a, b| b.cmp(a));
                return Ok(minimal
                    .into_iter()
                    .map(|e| Poly::term(nvars, Rational::one(), Monomial::from_exps(e)))
                    .collect());
            }
            if cur[i] < top[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Integer arc exponents `W` with `W·alpha < min_j W·e_j`, all positive.
pub fn separating_arc_exponents(exps: &[Vec<u32>], alpha: &[u32], weights: &[Rational]) -> Vec<u32> {
    let den = weights.iter().fold(num_bigint::BigInt::one(), |acc, w| num_integer::Integer::lcm(&acc, w.denom()));
    let wi: Vec<u64> = weights
        .iter()
        .map(|w| {
            let v = w * Rational::from_integer(den.clone());
            num_traits::ToPrimitive::to_u64(&v.to_integer()).unwrap_or(0)
        })
        .collect();
    let size: u64 = alpha.iter().map(|&a| a as u64).sum::<u64>() + 1;
    let w: Vec<u32> = wi.iter().map(|&x| (x * size + 1) as u32).collect();
    debug_assert!({
        let dot = |e: &[u32]| e.iter().zip(&w).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>();
        exps.iter().all(|e| dot(e) > dot(alpha))
    });
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn close(src: &[&str]) -> Vec<String> {
        let n = names();
        let g: Vec<Poly> = src.iter().map(|s| Poly::parse(s, &n).unwrap()).collect();
        monomial_closure(2, &g).unwrap().iter().map(|p| p.to_string_with(&n)).collect()
    }

    #[test]
    fn closures() {
        assert_eq!(close(&["x^3", "y^3"]), vec!["x^3", "x^2*y", "x*y^2", "y^3"]);
        assert_eq!(close(&["x"]), vec!["x"]);
        assert_eq!(close(&["x^2", "y^3"]), vec!["x^2", "x*y^2", "y^3"]);
    }

    #[test]
    fn certificates() {
        match newton_test(&[vec![3, 0], vec![0, 3]], &[2, 1]) {
            NewtonTest::Inside { lambda } => {
                assert_eq!(lambda.iter().sum::<Rational>(), Rational::one());
            }
            o => panic!("{o:?}"),
        }
        let exps = vec![vec![2, 0], vec![0, 3]];
        match newton_test(&exps, &[1, 1]) {
            NewtonTest::Outside { weights } => {
                let w = separating_arc_exponents(&exps, &[1, 1], &weights);
                assert!(w.iter().all(|&x| x > 0));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn rejects_binomials() {
        let n = names();
        let g = vec![Poly::parse("x + y", &n).unwrap()];
        assert!(monomial_closure(2, &g).is_err());
    }
}
