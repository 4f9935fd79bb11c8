use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// Monomial order on exponent vectors.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonomialOrder {
    DegRevLex,
    /// Lexicographic with variable 0 largest.
    Lex,
    /// Block order: the listed variables form the first block (compared by
    /// degrevlex restricted to the block), ties broken by degrevlex on the rest.
    Elimination(Vec<usize>),
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::DegRevLex
    }
}

fn degrevlex(a: &[u32], b: &[u32], mask: Option<&[bool]>, want: bool) -> Ordering {
    let pick = |i: usize| mask.map_or(true, |m| m[i] == want);
    let da: u32 = a.iter().enumerate().filter(|(i, _)| pick(*i)).map(|(_, e)| e).sum();
    let db: u32 = b.iter().enumerate().filter(|(i, _)| pick(*i)).map(|(_, e)| e).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if !pick(i) {
            continue;
        }
        match a[i].cmp(&b[i]) {
            Ordering::Equal => {}
            // smaller exponent in the last variable wins
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(a, b, None, true),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination(vars) => {
                let mut mask = vec![false; a.len()];
                for &v in vars {
                    if v < mask.len() {
                        mask[v] = true;
                    }
                }
                degrevlex(a, b, Some(&mask), true).then_with(|| degrevlex(a, b, Some(&mask), false))
            }
        }
    }
}

/// Position over term: the component index is compared first (lower index
/// is larger), then the monomials.
pub fn pot_cmp(order: &MonomialOrder, ca: usize, a: &[u32], cb: usize, b: &[u32]) -> Ordering {
    cb.cmp(&ca).then_with(|| order.cmp(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrevlex_basics() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 in degree 2; xz < y^2 since z is last
        assert_eq!(o.cmp(&[2, 0, 0], &[1, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[0, 0, 3], &[1, 0, 0]), Ordering::Greater);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::Elimination(vec![2]);
        assert_eq!(o.cmp(&[0, 0, 1], &[5, 5, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[2, 0, 1], &[0, 1, 1]), Ordering::Greater);
    }

    #[test]
    fn position_first() {
        let o = MonomialOrder::DegRevLex;
        assert_eq!(pot_cmp(&o, 0, &[0], 1, &[9]), Ordering::Greater);
    }
}
