//! Euler-identity certificates for weighted-homogeneous families.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::report::{Condition, ConditionReport, Evidence, GeneratorReport, ReportBounds};
use crate::closure::arc::parse_rational;
use crate::closure::{ClosureOptions, Status};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, PolyMatrix, Rational};
use crate::modulealg::{RingContext, VarRole, VarietyFamily};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightVector {
    /// One weight per fiber variable.
    pub z: Vec<i64>,
    /// One weight per parameter.
    pub y: Vec<i64>,
    /// Weighted degree of each component of `F`.
    pub degrees: Vec<i64>,
}

fn weighted_degree(m: &Monomial, w: &[i64]) -> i64 {
    m.exps().iter().zip(w).map(|(&e, &x)| e as i64 * x).sum()
}

fn all_weights(ctx: &RingContext, w: &WeightVector) -> Result<Vec<i64>> {
    let (z, y) = (ctx.fiber(), ctx.params());
    if w.z.len() != z.len() || w.y.len() != y.len() {
        return Err(Error::Dimension(format!(
            "weights for {} fiber and {} parameter variables, ring has {} and {}",
            w.z.len(),
            w.y.len(),
            z.len(),
            y.len()
        )));
    }
    let mut all = vec![0; ctx.nvars()];
    for (i, &v) in z.iter().enumerate() {
        all[v] = w.z[i];
    }
    for (i, &v) in y.iter().enumerate() {
        all[v] = w.y[i];
    }
    Ok(all)
}

/// Checks that every monomial of `F_c` has weighted degree `d_c`.
pub fn verify_weights(fam: &VarietyFamily, w: &WeightVector) -> Result<()> {
    let ctx = fam.context();
    let all = all_weights(ctx, w)?;
    if w.degrees.len() != fam.p() {
        return Err(Error::Dimension(format!("{} degrees for {} components", w.degrees.len(), fam.p())));
    }
    if w.z.iter().chain(&w.y).any(|&x| x < 0) {
        return Err(Error::WeightVerification("weights must be nonnegative".into()));
    }
    for (c, f) in fam.map().iter().enumerate() {
        for (m, _) in f.terms() {
            let d = weighted_degree(m, &all);
            if d != w.degrees[c] {
                return Err(Error::WeightVerification(format!(
                    "component {} has a term of weighted degree {d}, expected {}",
                    c + 1,
                    w.degrees[c]
                )));
            }
        }
    }
    Ok(())
}

/// `D·∂F/∂y = Σ A_i z_i ∂F/∂z_i + Σ C_c F_c e_c` with `D, A_i, C_c`
/// polynomials in the parameters and `D` nonzero at the point.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EulerCertificate {
    pub vars: Vec<String>,
    pub fiber: Vec<String>,
    pub family: Vec<String>,
    pub parameter: String,
    pub denominator: String,
    pub z_coefficients: Vec<String>,
    pub relation_coefficients: Vec<String>,
    pub point: Vec<String>,
}

impl EulerCertificate {
    pub fn verify(&self) -> Result<bool> {
        let roles = self
            .vars
            .iter()
            .map(|v| if self.fiber.contains(v) { VarRole::Fiber } else { VarRole::Param })
            .collect();
        let ctx = RingContext::from_parts(self.vars.clone(), roles)?;
        let f = self.family.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?;
        let y = ctx.index(&self.parameter)?;
        let z = ctx.fiber();
        let d = ctx.parse(&self.denominator)?;
        let a = self.z_coefficients.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?;
        let c = self.relation_coefficients.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?;
        let point = self.point.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        if a.len() != z.len() || c.len() != f.len() || point.len() != ctx.nvars() {
            return Ok(false);
        }
        let only_params = |p: &Poly| z.iter().all(|&i| !p.uses_var(i));
        if !only_params(&d) || !a.iter().all(only_params) || !c.iter().all(only_params) || d.eval(&point).is_zero() {
            return Ok(false);
        }
        for (k, fk) in f.iter().enumerate() {
            let mut rhs = &c[k] * fk;
            for (i, &zi) in z.iter().enumerate() {
                rhs = &rhs + &(&(&a[i] * &ctx.var(zi)) * &fk.differentiate(zi));
            }
            if &d * &fk.differentiate(y) != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Coefficients of `p` as a polynomial in the fiber variables.
fn split_fiber(p: &Poly, fiber: &[usize]) -> BTreeMap<Vec<u32>, Poly> {
    let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key: Vec<u32> = fiber.iter().map(|&i| m.exps()[i]).collect();
        let mut e = m.exps().to_vec();
        for &i in fiber {
            e[i] = 0;
        }
        out.entry(key).or_insert_with(|| Poly::zero(p.nvars())).add_term(Monomial::from_exps(e), c.clone());
    }
    out
}

struct Ansatz {
    /// Rows `(coefficients, right-hand side)`.
    rows: Vec<(Vec<Poly>, Poly)>,
    unknowns: Vec<String>,
}

impl Ansatz {
    fn render(&self, ctx: &RingContext) -> Vec<String> {
        self.rows
            .iter()
            .map(|(cs, rhs)| {
                let mut terms = Vec::new();
                for (c, u) in cs.iter().zip(&self.unknowns) {
                    if c.is_zero() {
                        continue;
                    }
                    let s = ctx.render(c);
                    terms.push(if c.is_one() {
                        u.clone()
                    } else if c.num_terms() > 1 {
                        format!("({s})*{u}")
                    } else {
                        format!("{s}*{u}")
                    });
                }
                let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "- ") };
                format!("{lhs} = {}", ctx.render(rhs))
            })
            .collect()
    }

    /// Solution over the fraction field of the parameter ring as
    /// `(D, numerators)`, or `None` when inconsistent.
    fn solve(&self, nvars: usize) -> Result<Option<(Poly, Vec<Poly>)>> {
        let k = self.unknowns.len();
        let mut rows = self.rows.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut r = 0;
        for col in 0..k {
            let Some(pr) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else { continue };
            rows.swap(r, pr);
            let (prow, prhs) = rows[r].clone();
            let piv = prow[col].clone();
            for row in rows.iter_mut().skip(r + 1) {
                if row.0[col].is_zero() {
                    continue;
                }
                let a = row.0[col].clone();
                for (x, p) in row.0.iter_mut().zip(&prow) {
                    *x = &(&piv * &*x) - &(&a * p);
                }
                row.1 = &(&piv * &row.1) - &(&a * &prhs);
            }
            pivots.push(col);
            r += 1;
        }
        if rows[r..].iter().any(|(_, rhs)| !rhs.is_zero()) {
            return Ok(None);
        }
        let n = pivots.len();
        let block = |replace: Option<usize>| -> Result<Poly> {
            let cols: Vec<Vec<Poly>> = (0..n)
                .map(|j| (0..n).map(|i| if Some(j) == replace { rows[i].1.clone() } else { rows[i].0[pivots[j]].clone() }).collect())
                .collect();
            PolyMatrix::from_columns(n, nvars, &cols)?.determinant()
        };
        let d = if n == 0 { Poly::one(nvars) } else { block(None)? };
        let mut num = vec![Poly::zero(nvars); k];
        for (j, &c) in pivots.iter().enumerate() {
            num[c] = block(Some(j))?;
        }
        Ok(Some((d, num)))
    }
}

fn build_ansatz(fam: &VarietyFamily, y: usize) -> Ansatz {
    let ctx = fam.context();
    let z = ctx.fiber();
    let n = ctx.nvars();
    let p = fam.p();
    let mut unknowns: Vec<String> = (1..=z.len()).map(|i| format!("a{i}")).collect();
    unknowns.extend((1..=p).map(|c| format!("c{c}")));
    let mut rows = Vec::new();
    for (c, f) in fam.map().iter().enumerate() {
        let mut cols: Vec<BTreeMap<Vec<u32>, Poly>> = z.iter().map(|&zi| split_fiber(&(&ctx.var(zi) * &f.differentiate(zi)), &z)).collect();
        for k in 0..p {
            cols.push(if k == c { split_fiber(f, &z) } else { BTreeMap::new() });
        }
        let rhs = split_fiber(&f.differentiate(y), &z);
        let mut keys: Vec<Vec<u32>> = cols.iter().flat_map(|m| m.keys().cloned()).chain(rhs.keys().cloned()).collect();
        keys.sort_by(|a, b| b.cmp(a));
        keys.dedup();
        for key in keys {
            let coeffs = cols.iter().map(|m| m.get(&key).cloned().unwrap_or_else(|| Poly::zero(n))).collect();
            rows.push((coeffs, rhs.get(&key).cloned().unwrap_or_else(|| Poly::zero(n))));
        }
    }
    Ansatz { rows, unknowns }
}

/// Divides out a common monomial factor and rational content.
fn normalize(d: Poly, rest: Vec<Poly>) -> (Poly, Vec<Poly>) {
    let all: Vec<&Poly> = std::iter::once(&d).chain(rest.iter()).filter(|p| !p.is_zero()).collect();
    let n = d.nvars();
    let mut g: Option<Monomial> = None;
    for p in &all {
        for (m, _) in p.terms() {
            g = Some(match g {
                None => m.clone(),
                Some(x) => x.gcd(m),
            });
        }
    }
    let g = g.unwrap_or_else(|| Monomial::one(n));
    let div = |p: &Poly| -> Poly {
        Poly::from_terms(n, p.terms().map(|(m, c)| (m.div(&g).expect("common factor"), c.clone())))
    };
    let d = div(&d);
    let rest: Vec<Poly> = rest.iter().map(div).collect();
    // scale so that all coefficients are coprime integers and D leads positively
    use num_integer::Integer;
    let coeffs = || std::iter::once(&d).chain(rest.iter()).flat_map(|p| p.terms().map(|(_, c)| c.clone()).collect::<Vec<_>>());
    let den = coeffs().fold(num_bigint::BigInt::one(), |a, c| a.lcm(c.denom()));
    let num = coeffs().fold(num_bigint::BigInt::zero(), |a, c| a.gcd(&(c * Rational::from_integer(den.clone())).to_integer()));
    let mut scale = if num.is_zero() { Rational::one() } else { Rational::new(den, num) };
    if d.terms().last().is_some_and(|(_, c)| c.is_negative()) {
        scale = -scale;
    }
    (d.scale(&scale), rest.iter().map(|p| p.scale(&scale)).collect())
}

/// Certifies `∂F/∂y_l ∈ m_Y·J_zM + I(X)` for every parameter, in the ring
/// where the certificate denominators are inverted, at `point`.
pub fn wh_euler_fastpath(fam: &VarietyFamily, w: &WeightVector, point: &[Rational], opts: &ClosureOptions) -> Result<ConditionReport> {
    verify_weights(fam, w)?;
    let ctx = fam.context();
    ctx.check_point(point)?;
    let params = ctx.params();
    let fiber_names: Vec<String> = ctx.fiber().iter().map(|&i| ctx.names()[i].clone()).collect();
    let mut gens = Vec::new();
    let mut notes = Vec::new();
    for (l, &y) in params.iter().enumerate() {
        let name = format!("dF/d{}", ctx.names()[y]);
        let ansatz = build_ansatz(fam, y);
        let trivial = fam.map().iter().all(|f| f.differentiate(y).is_zero());
        let (d, num) = if trivial {
            (ctx.one(), vec![ctx.zero(); ansatz.unknowns.len()])
        } else {
            if w.y[l] == 0 {
                let consistent = ansatz.solve(ctx.nvars())?.is_some();
                return Err(Error::FastPathInapplicable(format!(
                    "parameter `{}` has weight 0; the Euler ansatz {} is {}: {}",
                    ctx.names()[y],
                    name,
                    if consistent { "consistent but not implied by the weights" } else { "inconsistent" },
                    ansatz.render(ctx).join(", ")
                )));
            }
            match ansatz.solve(ctx.nvars())? {
                Some(s) => s,
                None => {
                    return Err(Error::FastPathInapplicable(format!(
                        "the Euler ansatz for {name} is inconsistent: {}",
                        ansatz.render(ctx).join(", ")
                    )))
                }
            }
        };
        let (d, num) = normalize(d, num);
        if d.eval(point).is_zero() {
            return Err(Error::FastPathInapplicable(format!(
                "certificate denominator {} vanishes at the point",
                ctx.render(&d)
            )));
        }
        let nz = ctx.fiber().len();
        let cert = EulerCertificate {
            vars: ctx.names().to_vec(),
            fiber: fiber_names.clone(),
            family: fam.map().iter().map(|f| ctx.render(f)).collect(),
            parameter: ctx.names()[y].clone(),
            denominator: ctx.render(&d),
            z_coefficients: num[..nz].iter().map(|p| ctx.render(p)).collect(),
            relation_coefficients: num[nz..].iter().map(|p| ctx.render(p)).collect(),
            point: point.iter().map(|x| x.to_string()).collect(),
        };
        if !cert.verify()? {
            return Err(Error::Internal(format!("Euler certificate for {name} does not verify")));
        }
        if !trivial {
            notes.push(format!("{name}: valid where {} != 0", cert.denominator));
        }
        gens.push(GeneratorReport { name, verdict: Status::Holds, certificate: Evidence::Euler(cert) });
    }
    let pt = ctx.names().iter().zip(point).map(|(n, v)| format!("{n}={v}")).collect();
    Ok(ConditionReport::new(Condition::WhFastpath, pt, gens, ReportBounds::from(opts), notes))
}
