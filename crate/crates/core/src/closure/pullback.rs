//! Membership of `h∘φ` in the span of `g_j∘φ` over the series ring.

use num_traits::Zero;

use super::arc::CurveArc;
use crate::error::{Error, Result};
use crate::exactalg::{Poly, TruncSeries};
use crate::groebner::ModVec;

#[derive(Clone, PartialEq, Debug)]
pub enum PullbackMembership {
    /// `h∘φ = Σ c_j (g_j∘φ)` up to the arc truncation.
    Member { cofactors: Vec<TruncSeries> },
    /// A row `λ` with `val(λ·g_j∘φ) >= bound` for all `j` and
    /// `val(λ·h∘φ) = target_valuation < bound`.
    NonMember { witness: Vec<TruncSeries>, bound: usize, target_valuation: usize },
    Inconclusive { reason: String },
}

impl PullbackMembership {
    pub fn is_nonmember(&self) -> bool {
        matches!(self, PullbackMembership::NonMember { .. })
    }
}

fn dot(a: &[TruncSeries], b: &[TruncSeries]) -> TruncSeries {
    let order = a.iter().chain(b).map(TruncSeries::order).min().unwrap_or(0);
    a.iter().zip(b).fold(TruncSeries::zero(order), |acc, (x, y)| acc.add(&x.mul(y)))
}

fn pull(v: &[Poly], arc: &CurveArc) -> Vec<TruncSeries> {
    v.iter().map(|p| arc.pullback(p)).collect()
}

/// Checks a nonmembership witness directly against the arc; returns the
/// valuation of `λ·h∘φ` when it is valid.
pub fn check_witness(h: &[Poly], gens: &[ModVec], arc: &CurveArc, witness: &[TruncSeries], bound: usize) -> Option<usize> {
    if bound == 0 || bound > arc.truncation() + 1 || witness.len() != h.len() {
        return None;
    }
    let lam: Vec<TruncSeries> = witness.iter().map(|w| w.truncate(arc.truncation())).collect();
    for g in gens {
        let s = dot(&lam, &pull(g, arc));
        if s.order() + 1 < bound || s.coeffs()[..bound].iter().any(|c| !c.is_zero()) {
            return None;
        }
    }
    let s = dot(&lam, &pull(h, arc));
    match s.valuation() {
        Some(v) if v < bound => Some(v),
        _ => None,
    }
}

/// Decides `h∘φ ∈ Σ O_t·(g_j∘φ)` by elimination over the discrete valuation
/// ring, pivoting on entries of least valuation.
pub fn arc_pullback_membership(h: &[Poly], gens: &[ModVec], arc: &CurveArc) -> Result<PullbackMembership> {
    let p = h.len();
    if gens.iter().any(|g| g.len() != p) {
        return Err(Error::Dimension("generators and target have different ranks".into()));
    }
    let n = arc.truncation();
    let r = gens.len();
    // a[i][j]: row i (component), column j (generator)
    let mut a: Vec<Vec<TruncSeries>> = (0..p).map(|i| gens.iter().map(|g| arc.pullback(&g[i])).collect()).collect();
    let unit = |k: usize, m: usize| -> Vec<TruncSeries> {
        (0..m).map(|i| if i == k { TruncSeries::one(n) } else { TruncSeries::zero(n) }).collect()
    };
    let mut lam: Vec<Vec<TruncSeries>> = (0..p).map(|i| unit(i, p)).collect();
    let mut cols: Vec<Vec<TruncSeries>> = (0..r).map(|j| unit(j, r)).collect();
    let mut hv = pull(h, arc);
    let mut free_rows: Vec<usize> = (0..p).collect();
    let mut free_cols: Vec<usize> = (0..r).collect();
    let mut pivots: Vec<(usize, usize, usize)> = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in &free_rows {
            for &j in &free_cols {
                if let Some(v) = a[i][j].valuation() {
                    if best.is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, pv)) = best else { break };
        let piv = a[pi][pj].clone();
        // clear the pivot row by column operations
        for &j in &free_cols {
            if j == pj || a[pi][j].is_zero() {
                continue;
            }
            let q = a[pi][j].div(&piv)?;
            for i in 0..p {
                let t = q.mul(&a[i][pj]);
                a[i][j] = a[i][j].sub(&t);
            }
            for k in 0..r {
                let t = q.mul(&cols[pj][k]);
                cols[j][k] = cols[j][k].sub(&t);
            }
        }
        // clear the pivot column by row operations
        for &i in &free_rows {
            if i == pi || a[i][pj].is_zero() {
                continue;
            }
            let q = a[i][pj].div(&piv)?;
            for j in 0..r {
                let t = q.mul(&a[pi][j]);
                a[i][j] = a[i][j].sub(&t);
            }
            let t = q.mul(&hv[pi]);
            hv[i] = hv[i].sub(&t);
            for k in 0..p {
                let t = q.mul(&lam[pi][k]);
                lam[i][k] = lam[i][k].sub(&t);
            }
        }
        free_rows.retain(|&i| i != pi);
        free_cols.retain(|&j| j != pj);
        pivots.push((pi, pj, pv));
    }

    let mut candidates: Vec<(usize, usize)> = Vec::new();
    let mut undecided = false;
    for &(i, _, v) in &pivots {
        match hv[i].valuation() {
            Some(w) if w < v => candidates.push((i, v)),
            Some(_) => {}
            None => {
                if hv[i].order() + 1 < v {
                    undecided = true;
                }
            }
        }
    }
    for &i in &free_rows {
        match hv[i].valuation() {
            Some(w) => candidates.push((i, w + 1)),
            None => {}
        }
    }
    for (i, bound) in candidates {
        let witness: Vec<TruncSeries> = lam[i].iter().map(|s| s.truncate(bound.saturating_sub(1))).collect();
        if let Some(tv) = check_witness(h, gens, arc, &witness, bound) {
            return Ok(PullbackMembership::NonMember { witness, bound, target_valuation: tv });
        }
        undecided = true;
    }
    if pivots.is_empty() {
        return Ok(PullbackMembership::Inconclusive {
            reason: format!("target and generators vanish to the truncation order {n} along the arc"),
        });
    }
    if undecided {
        return Ok(PullbackMembership::Inconclusive {
            reason: format!("decision depends on terms beyond the truncation order {n}"),
        });
    }
    let mut y = vec![TruncSeries::zero(n); r];
    for &(i, j, _) in &pivots {
        y[j] = if hv[i].is_zero() { TruncSeries::zero(n) } else { hv[i].div(&a[i][j])? };
    }
    let order = y.iter().map(TruncSeries::order).min().unwrap_or(n);
    let cofactors = (0..r)
        .map(|k| (0..r).fold(TruncSeries::zero(order), |acc, j| acc.add(&cols[j][k].mul(&y[j]))))
        .collect();
    Ok(PullbackMembership::Member { cofactors })
}
