//! Hyperplane-section families `F = f∘β`, `β(z, y) = (z_1, …, z_{n-1}, Σ y_i z_i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::modulealg::{RingContext, VarRole, VarietyFamily};

/// The modification together with the substitution used to build it.
#[derive(Clone, PartialEq, Debug)]
pub struct Modification {
    pub family: VarietyFamily,
    /// Images of the original variables under `β`.
    pub beta: Vec<Poly>,
    /// `f` rewritten in the ring of the family.
    pub original: Vec<Poly>,
}

/// Builds `F = f∘β` over the chart `U_n`; `f` lives in a ring whose
/// variables are all fiber coordinates `z_1..z_n`. Parameters are named
/// `y1..y{n-1}`.
pub fn grassmann_modification(ctx: &RingContext, f: &[Poly]) -> Result<Modification> {
    let n = ctx.nvars();
    if n < 2 {
        return Err(Error::InvalidArgument("the modification needs at least two variables".into()));
    }
    if !ctx.params().is_empty() {
        return Err(Error::InvalidArgument("f must not involve parameters".into()));
    }
    let mut names: Vec<String> = ctx.names().to_vec();
    let mut roles = vec![VarRole::Fiber; n];
    for i in 1..n {
        names.push(format!("y{i}"));
        roles.push(VarRole::Param);
    }
    let big = RingContext::from_parts(names, roles)?;
    let total = big.nvars();
    let mut last = Poly::zero(total);
    for i in 0..n - 1 {
        last = &last + &(&big.var(n + i) * &big.var(i));
    }
    let mut beta: Vec<Poly> = (0..n - 1).map(|i| big.var(i)).collect();
    beta.push(last);
    let family: Vec<Poly> = f.iter().map(|p| p.compose(&beta, total)).collect();
    let original = f.iter().map(|p| p.extend(n - 1)).collect();
    Ok(Modification { family: VarietyFamily::new(big, family)?, beta, original })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// `∂F/∂y_i = z_i (∂f/∂z_n∘β)`, `∂F/∂z_i = ∂f/∂z_i∘β + y_i (∂f/∂z_n∘β)`,
/// `∂F/∂z_n = 0`, for every component. A failing identity is an internal
/// error.
pub fn grassmann_identities(m: &Modification) -> Result<Vec<IdentityCheck>> {
    let ctx = m.family.context();
    let n = ctx.fiber().len();
    let total = ctx.nvars();
    let mut out = Vec::new();
    for (c, (big_f, f)) in m.family.map().iter().zip(&m.original).enumerate() {
        let fzn = f.differentiate(n - 1).compose(&m.beta_full(total), total);
        let mut push = |identity: String, lhs: Poly, rhs: Poly| {
            out.push(IdentityCheck { identity, lhs: ctx.render(&lhs), rhs: ctx.render(&rhs), holds: lhs == rhs });
        };
        let comp = if m.family.p() > 1 { format!("[{}]", c + 1) } else { String::new() };
        for i in 0..n - 1 {
            let y = n + i;
            push(
                format!("dF{comp}/d{} = {}*(df/d{}∘β)", ctx.names()[y], ctx.names()[i], ctx.names()[n - 1]),
                big_f.differentiate(y),
                &ctx.var(i) * &fzn,
            );
            let fzi = f.differentiate(i).compose(&m.beta_full(total), total);
            push(
                format!("dF{comp}/d{} = df/d{}∘β + {}*(df/d{}∘β)", ctx.names()[i], ctx.names()[i], ctx.names()[y], ctx.names()[n - 1]),
                big_f.differentiate(i),
                &fzi + &(&ctx.var(y) * &fzn),
            );
        }
        push(format!("dF{comp}/d{} = 0", ctx.names()[n - 1]), big_f.differentiate(n - 1), Poly::zero(total));
    }
    if let Some(bad) = out.iter().find(|c| !c.holds) {
        return Err(Error::Internal(format!("chain-rule identity failed: {}", bad.identity)));
    }
    Ok(out)
}

impl Modification {
    /// `β` extended by the identity on the parameters, for composing
    /// polynomials already written over the family ring.
    fn beta_full(&self, total: usize) -> Vec<Poly> {
        let n = self.beta.len();
        let mut b = self.beta.clone();
        for i in 0..n - 1 {
            b.push(Poly::var(total, n + i));
        }
        b
    }

    /// `z_i (∂f/∂z_n∘β)` for `i < n`, one vector per `i`.
    pub fn criterion_elements(&self) -> Vec<Vec<Poly>> {
        let ctx = self.family.context();
        let n = self.beta.len();
        let total = ctx.nvars();
        (0..n - 1)
            .map(|i| {
                self.original
                    .iter()
                    .map(|f| &ctx.var(i) * &f.differentiate(n - 1).compose(&self.beta_full(total), total))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modify(vars: &[&str], f: &str) -> Modification {
        let ctx = RingContext::new(vars, &[]).unwrap();
        grassmann_modification(&ctx, &[ctx.parse(f).unwrap()]).unwrap()
    }

    fn rendered(m: &Modification) -> String {
        m.family.context().render(&m.family.map()[0])
    }

    #[test]
    fn examples() {
        assert_eq!(rendered(&modify(&["z1", "z2"], "z2")), "z1*y1");
        let m = modify(&["z1", "z2"], "z1^2 + z2^2");
        let c = m.family.context();
        assert_eq!(m.family.map()[0], c.parse("z1^2*(1 + y1^2)").unwrap());
        let m = modify(&["z1", "z2", "z3"], "z1*z2 + z3^2");
        let c = m.family.context();
        assert_eq!(m.family.map()[0], c.parse("z1*z2 + (y1*z1 + y2*z2)^2").unwrap());
    }

    #[test]
    fn identities_hold() {
        for (v, f) in [
            (vec!["z1", "z2", "z3"], "z1*z2 + z3^2"),
            (vec!["z1", "z2"], "z1^2 + z2^3"),
            (vec!["z1", "z2", "z3"], "z1^3 + z2^2*z3 + z3^4 - z1*z2*z3"),
            (vec!["z1", "z2"], "7"),
        ] {
            let m = modify(&v, f);
            let checks = grassmann_identities(&m).unwrap();
            assert!(checks.iter().all(|c| c.holds));
            assert_eq!(checks.len(), 2 * (v.len() - 1) + 1);
        }
        let m = modify(&["z1", "z2", "z3"], "z1*z2 + z3^2");
        let checks = grassmann_identities(&m).unwrap();
        assert_eq!(checks[0].lhs, checks[0].rhs);
        let c = m.family.context();
        assert_eq!(c.parse(&checks[0].lhs).unwrap(), c.parse("2*z1*(y1*z1 + y2*z2)").unwrap());
    }
}
