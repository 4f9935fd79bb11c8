//! Submodules of free modules over coordinate rings: presentations,
//! Jacobian modules, minors ideals, generic rank, cosupport and `rho`.

mod ring;

pub use ring::{RingContext, VarRole};

use crate::error::{Error, Result};
use crate::exactalg::{combinations, Poly, PolyMatrix, Rational};
use crate::groebner::{radical_membership, GroebnerBasis, ModVec};

/// `X` (or the total space of a family) defined by `F = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarietyFamily {
    ctx: RingContext,
    f: Vec<Poly>,
}

impl VarietyFamily {
    pub fn new(mut ctx: RingContext, f: Vec<Poly>) -> Result<Self> {
        let n = ctx.fiber().len();
        if f.len() > n.max(1) {
            return Err(Error::InvalidArgument(format!(
                "{} defining functions for {n} fiber variables",
                f.len()
            )));
        }
        ctx.set_relations(f.clone())?;
        Ok(VarietyFamily { ctx, f })
    }

    pub fn parse(z: &[&str], y: &[&str], f: &[&str]) -> Result<Self> {
        let ctx = RingContext::new(z, y)?;
        let f = f.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, f)
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn map(&self) -> &[Poly] {
        &self.f
    }

    pub fn p(&self) -> usize {
        self.f.len()
    }
}

/// `M ⊆ O_X^p` given by generator columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModulePresentation {
    ctx: RingContext,
    p: usize,
    gens: Vec<ModVec>,
}

impl ModulePresentation {
    pub fn new(ctx: RingContext, p: usize, gens: Vec<ModVec>) -> Result<Self> {
        for g in &gens {
            if g.len() != p {
                return Err(Error::Dimension(format!("generator with {} entries, expected {p}", g.len())));
            }
            if g.iter().any(|x| x.nvars() != ctx.nvars()) {
                return Err(Error::RingMismatch("generator entry over another ring".into()));
            }
        }
        Ok(ModulePresentation { ctx, p, gens })
    }

    /// Columns given as lists of polynomial strings.
    pub fn parse(ctx: RingContext, p: usize, cols: &[Vec<&str>]) -> Result<Self> {
        let gens = cols
            .iter()
            .map(|c| c.iter().map(|s| ctx.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, p, gens)
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn rank(&self) -> usize {
        self.p
    }

    pub fn generators(&self) -> &[ModVec] {
        &self.gens
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.iter().all(|g| g.iter().all(Poly::is_zero))
    }

    pub fn matrix(&self) -> PolyMatrix {
        PolyMatrix::from_columns(self.p, self.ctx.nvars(), &self.gens).expect("validated on construction")
    }

    /// The module with `h` prepended as an extra generator.
    pub fn with_column(&self, h: &[Poly]) -> Result<Self> {
        let mut gens = vec![h.to_vec()];
        gens.extend(self.gens.iter().cloned());
        Self::new(self.ctx.clone(), self.p, gens)
    }

    /// `I·M` for an ideal given by generators.
    pub fn times_ideal(&self, ideal: &[Poly]) -> Self {
        let mut gens = Vec::new();
        for a in ideal {
            for g in &self.gens {
                gens.push(g.iter().map(|x| a * x).collect());
            }
        }
        ModulePresentation { ctx: self.ctx.clone(), p: self.p, gens }
    }

    /// `m_Y·M`, the products of the fiber variables with the generators.
    pub fn times_fiber_ideal(&self) -> Self {
        let m: Vec<Poly> = self.ctx.fiber().into_iter().map(|i| self.ctx.var(i)).collect();
        self.times_ideal(&m)
    }

    pub fn render(&self) -> Vec<Vec<String>> {
        self.gens.iter().map(|g| g.iter().map(|x| self.ctx.render(x)).collect()).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ideal {
    ctx: RingContext,
    gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ctx: RingContext, gens: Vec<Poly>) -> Result<Self> {
        if gens.iter().any(|g| g.nvars() != ctx.nvars()) {
            return Err(Error::RingMismatch("ideal generator over another ring".into()));
        }
        Ok(Ideal { ctx, gens })
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn render(&self) -> Vec<String> {
        self.gens.iter().map(|g| self.ctx.render(g)).collect()
    }

    /// Whether `f` vanishes on the zero set of this ideal.
    pub fn radical_contains(&self, f: &Poly) -> Result<bool> {
        radical_membership(self.ctx.nvars(), f, &self.gens)
    }

    /// Ideal of the fiber variables.
    pub fn fiber_ideal(ctx: &RingContext) -> Ideal {
        let gens = ctx.fiber().into_iter().map(|i| ctx.var(i)).collect();
        Ideal { ctx: ctx.clone(), gens }
    }

    /// Whether the generated ideal (plus the context relations) is the unit ideal.
    pub fn is_unit(&self) -> Result<bool> {
        let mut all = self.gens.clone();
        all.extend(self.ctx.relations().iter().cloned());
        Ok(GroebnerBasis::ideal(self.ctx.nvars(), &all, Default::default())?.is_unit())
    }
}

/// `JM`, `JM_Y` and `J_zM` of a family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobianModules {
    pub jm: ModulePresentation,
    pub jm_y: ModulePresentation,
    pub jz_m: ModulePresentation,
}

pub fn jacobian_modules(fam: &VarietyFamily) -> Result<JacobianModules> {
    let ctx = fam.context().clone();
    let col = |i: usize| -> ModVec { fam.map().iter().map(|f| f.differentiate(i)).collect() };
    let z: Vec<ModVec> = ctx.fiber().into_iter().map(col).collect();
    let y: Vec<ModVec> = ctx.params().into_iter().map(col).collect();
    let p = fam.p();
    let mut all = z.clone();
    all.extend(y.iter().cloned());
    Ok(JacobianModules {
        jm: ModulePresentation::new(ctx.clone(), p, all)?,
        jm_y: ModulePresentation::new(ctx.clone(), p, y)?,
        jz_m: ModulePresentation::new(ctx, p, z)?,
    })
}

/// All `k x k` minors of the generator matrix (zero minors dropped).
pub fn minors(m: &ModulePresentation, k: usize) -> Result<Vec<Poly>> {
    let r = m.num_generators();
    if k == 0 || k > m.rank().min(r) {
        return Err(Error::InvalidArgument(format!(
            "minor size {k} out of range for a {}x{r} matrix",
            m.rank()
        )));
    }
    let mat = m.matrix();
    let mut out = Vec::new();
    for rs in combinations(m.rank(), k) {
        for cs in combinations(r, k) {
            let d = mat.submatrix(&rs, &cs).determinant()?;
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

pub fn minors_ideal(m: &ModulePresentation, k: usize) -> Result<Ideal> {
    Ideal::new(m.context().clone(), minors(m, k)?)
}

/// Decides whether `f` vanishes identically on `X`.
pub struct VanishingOracle {
    ctx: RingContext,
    basis: Option<GroebnerBasis>,
}

impl VanishingOracle {
    pub fn new(ctx: &RingContext) -> Result<Self> {
        let basis = if ctx.relations().is_empty() { None } else { Some(ctx.relation_basis()?) };
        Ok(VanishingOracle { ctx: ctx.clone(), basis })
    }

    pub fn vanishes(&self, f: &Poly) -> Result<bool> {
        if f.is_zero() {
            return Ok(true);
        }
        let Some(gb) = &self.basis else {
            return Ok(false);
        };
        let r = gb.normal_form_poly(f)?;
        if r.is_zero() {
            return Ok(true);
        }
        if r.constant_value().is_some() {
            return Ok(gb.is_unit());
        }
        radical_membership(self.ctx.nvars(), &r, self.ctx.relations())
    }
}

/// Largest `k` such that some `k x k` minor does not vanish on `X`.
pub fn generic_rank(m: &ModulePresentation) -> Result<usize> {
    let oracle = VanishingOracle::new(m.context())?;
    generic_rank_with(m, &oracle)
}

pub fn generic_rank_with(m: &ModulePresentation, oracle: &VanishingOracle) -> Result<usize> {
    let top = m.rank().min(m.num_generators());
    let mat = m.matrix();
    let mut rank = 0;
    for k in 1..=top {
        let mut found = false;
        'search: for rs in combinations(m.rank(), k) {
            for cs in combinations(m.num_generators(), k) {
                let d = mat.submatrix(&rs, &cs).determinant()?;
                if !oracle.vanishes(&d)? {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            break;
        }
        rank = k;
    }
    Ok(rank)
}

/// Caveat for generic ranks over a variety not asserted to be irreducible:
/// the rank found is the maximum over the components.
pub fn reducibility_note(ctx: &RingContext) -> Option<String> {
    (!ctx.relations().is_empty() && !ctx.irreducible()).then(|| {
        "X is not asserted irreducible; the generic rank is the maximum over its components".to_string()
    })
}

/// `J_k(M) + I(X)` with `k` the generic rank; its zero set is `Σ(M)`.
pub fn cosupport_ideal(m: &ModulePresentation) -> Result<(usize, Ideal)> {
    let k = generic_rank(m)?;
    let mut gens = if k == 0 { vec![m.context().one()] } else { minors(m, k)? };
    gens.extend(m.context().relations().iter().cloned());
    Ok((k, Ideal::new(m.context().clone(), gens)?))
}

/// Ideal `(rho(h_c))` over the context extended by chart variables
/// `tau_j = T_j / T_i` (`j != i`, 1-based).
pub fn rho_ideal(m: &ModulePresentation, chart: usize) -> Result<Ideal> {
    let p = m.rank();
    if chart == 0 || chart > p {
        return Err(Error::InvalidArgument(format!("chart {chart} out of range 1..={p}")));
    }
    let mut ctx = m.context().clone();
    let names: Vec<String> = (1..=p).filter(|&j| j != chart).map(|j| format!("tau{j}")).collect();
    let taus = ctx.add_vars(&names, VarRole::Aux)?;
    let extra = taus.len();
    let gens = m
        .generators()
        .iter()
        .map(|h| {
            let mut acc = h[chart - 1].extend(extra);
            let mut t = taus.iter();
            for (j, hj) in h.iter().enumerate() {
                if j + 1 == chart {
                    continue;
                }
                acc = acc + &hj.extend(extra) * &ctx.var(*t.next().unwrap());
            }
            acc
        })
        .collect();
    Ideal::new(ctx, gens)
}

/// The image of `h` under `rho` in the given chart, over the ring of
/// [`rho_ideal`].
pub fn rho_element(h: &[Poly], chart: usize, ctx: &RingContext) -> Result<Poly> {
    let p = h.len();
    let extra = p - 1;
    let base = ctx.nvars() - extra;
    let mut acc = h[chart - 1].extend(extra);
    let mut t = base;
    for (j, hj) in h.iter().enumerate() {
        if j + 1 == chart {
            continue;
        }
        acc = acc + &hj.extend(extra) * &ctx.var(t);
        t += 1;
    }
    Ok(acc)
}

/// Rank of the generator matrix evaluated at a point of `X`.
pub fn rank_at_point(m: &ModulePresentation, pt: &[Rational]) -> Result<usize> {
    m.context().check_point(pt)?;
    Ok(m.matrix().eval(pt).rank())
}

/// Point with integer coordinates.
pub fn int_point(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reducible_inputs_are_flagged() {
        let ctx = RingContext::new(&["x", "y"], &[]).unwrap();
        assert!(reducibility_note(&ctx).is_none());
        let mut ctx = ctx.clone().with_relations(vec![ctx.parse("x*y").unwrap()]).unwrap();
        assert!(reducibility_note(&ctx).is_none());
        ctx.set_irreducible(false);
        assert!(reducibility_note(&ctx).is_some());
    }

    fn sphere() -> VarietyFamily {
        VarietyFamily::parse(&["z1", "z2", "z3"], &[], &["z1^2 + z2^2 + z3^2"]).unwrap()
    }

    #[test]
    fn jacobian_of_sphere() {
        let j = jacobian_modules(&sphere()).unwrap();
        assert_eq!(j.jm.render(), vec![vec!["2*z1"], vec!["2*z2"], vec!["2*z3"]]);
        assert!(j.jm_y.generators().is_empty());
    }

    #[test]
    fn jacobian_of_family() {
        let f = VarietyFamily::parse(&["z1", "z2"], &["t"], &["(z1 - t*z2^2)^2 - z2^3"]).unwrap();
        let j = jacobian_modules(&f).unwrap();
        let ctx = f.context();
        let expect = |s: &str| ctx.parse(s).unwrap();
        assert_eq!(j.jz_m.generators()[0][0], expect("2*(z1 - t*z2^2)"));
        assert_eq!(j.jz_m.generators()[1][0], expect("-4*t*z2*(z1 - t*z2^2) - 3*z2^2"));
        assert_eq!(j.jm_y.generators()[0][0], expect("-2*z2^2*(z1 - t*z2^2)"));
    }

    #[test]
    fn constant_family_has_zero_module() {
        let f = VarietyFamily::parse(&["z1"], &[], &["5"]).unwrap();
        assert!(jacobian_modules(&f).unwrap().jm.is_zero());
    }

    #[test]
    fn minors_examples() {
        let ctx = RingContext::new(&["z1"], &[]).unwrap();
        let m = ModulePresentation::parse(ctx, 2, &[vec!["z1", "0"], vec!["0", "z1"]]).unwrap();
        assert_eq!(minors_ideal(&m, 2).unwrap().render(), vec!["z1^2"]);
        assert_eq!(minors_ideal(&m, 1).unwrap().render(), vec!["z1"]);
        assert!(minors_ideal(&m, 3).is_err());
        let j = jacobian_modules(&sphere()).unwrap();
        assert_eq!(minors_ideal(&j.jm, 1).unwrap().render(), vec!["2*z1", "2*z2", "2*z3"]);
    }

    #[test]
    fn generic_ranks() {
        let j = jacobian_modules(&sphere()).unwrap();
        assert_eq!(generic_rank(&j.jm).unwrap(), 1);
        let ctx = RingContext::new(&["z"], &[]).unwrap();
        let zero = ModulePresentation::new(ctx, 1, vec![]).unwrap();
        assert_eq!(generic_rank(&zero).unwrap(), 0);
    }

    #[test]
    fn cosupport_of_line() {
        let ctx = RingContext::new(&["z"], &[]).unwrap();
        let m = ModulePresentation::parse(ctx.clone(), 1, &[vec!["z"]]).unwrap();
        let (k, i) = cosupport_ideal(&m).unwrap();
        assert_eq!(k, 1);
        assert_eq!(i.render(), vec!["z"]);
        let free = ModulePresentation::parse(ctx, 1, &[vec!["1"]]).unwrap();
        assert!(cosupport_ideal(&free).unwrap().1.is_unit().unwrap());
    }

    #[test]
    fn rho_examples() {
        let ctx = RingContext::new(&["z1", "z2"], &[]).unwrap();
        let m = ModulePresentation::parse(ctx.clone(), 2, &[vec!["z1", "z2"]]).unwrap();
        assert_eq!(rho_ideal(&m, 1).unwrap().render(), vec!["z2*tau2 + z1"]);
        let unit = ModulePresentation::parse(ctx.clone(), 2, &[vec!["1", "0"]]).unwrap();
        assert!(rho_ideal(&unit, 1).unwrap().is_unit().unwrap());
        let diag = ModulePresentation::parse(ctx, 2, &[vec!["z1", "0"], vec!["0", "z2"]]).unwrap();
        assert_eq!(rho_ideal(&diag, 2).unwrap().render(), vec!["z1*tau1", "z2"]);
        assert!(rho_ideal(&diag, 3).is_err());
    }

    #[test]
    fn rank_on_cone() {
        let f = VarietyFamily::parse(&["z1", "z2", "z3"], &[], &["z1^2 + z2^2 - z3^2"]).unwrap();
        let j = jacobian_modules(&f).unwrap();
        assert_eq!(rank_at_point(&j.jm, &int_point(&[3, 4, 5])).unwrap(), 1);
        assert_eq!(rank_at_point(&j.jm, &int_point(&[0, 0, 0])).unwrap(), 0);
        assert!(matches!(rank_at_point(&j.jm, &int_point(&[1, 1, 1])), Err(Error::PointOffVariety(_))));
    }
}
