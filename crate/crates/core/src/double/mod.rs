//! Doubles `h_D = (h∘π1, h∘π2)` and `M_D` over `X×X` or `X×_Y X`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rational};
use crate::groebner::ModVec;
use crate::modulealg::{Ideal, ModulePresentation, RingContext};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DoubleMode {
    /// Over `X × X`: every variable is doubled.
    Absolute,
    /// Over `X ×_Y X`: parameters (and helper variables) are shared.
    Relative,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Basis {
    /// `{(h_j)_D} ∪ {(0, (v'-v'')(h_j∘π2))}`
    B,
    /// `{(h_j)_D} ∪ {((v'-v'')(h_j∘π1), 0)}`
    BPrime,
    /// `{(h_j)_D} ∪ {(v h_j)_D}`
    BDoublePrime,
}

impl Basis {
    pub fn tag(self) -> &'static str {
        match self {
            Basis::B => "B",
            Basis::BPrime => "B'",
            Basis::BDoublePrime => "B''",
        }
    }
}

/// Product (or fibered product) ring with the two projections recorded as
/// variable maps. A doubled base variable `v` becomes `v_1` and `v_2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductRingContext {
    base: RingContext,
    ctx: RingContext,
    mode: DoubleMode,
    pi1: Vec<usize>,
    pi2: Vec<usize>,
    doubled: Vec<usize>,
}

impl ProductRingContext {
    pub fn new(base: &RingContext, mode: DoubleMode) -> Result<Self> {
        let n = base.nvars();
        let doubled: Vec<usize> = match mode {
            DoubleMode::Absolute => (0..n).collect(),
            DoubleMode::Relative => base.fiber(),
        };
        let shared: Vec<usize> = (0..n).filter(|i| !doubled.contains(i)).collect();
        let mut names = Vec::new();
        let mut roles = Vec::new();
        let mut pi1 = vec![0; n];
        let mut pi2 = vec![0; n];
        for (copy, pi) in [(1, &mut pi1), (2, &mut pi2)] {
            for &i in &doubled {
                pi[i] = names.len();
                names.push(format!("{}_{copy}", base.names()[i]));
                roles.push(base.roles()[i]);
            }
        }
        for &i in &shared {
            pi1[i] = names.len();
            pi2[i] = names.len();
            names.push(base.names()[i].clone());
            roles.push(base.roles()[i]);
        }
        let mut ctx = RingContext::from_parts(names, roles)?;
        let total = ctx.nvars();
        let mut rels = Vec::new();
        for r in base.relations() {
            rels.push(r.remap(&pi1, total));
        }
        for r in base.relations() {
            let r2 = r.remap(&pi2, total);
            if !rels.contains(&r2) {
                rels.push(r2);
            }
        }
        ctx.set_relations(rels)?;
        ctx.set_irreducible(base.irreducible());
        Ok(ProductRingContext { base: base.clone(), ctx, mode, pi1, pi2, doubled })
    }

    pub fn base(&self) -> &RingContext {
        &self.base
    }

    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn mode(&self) -> DoubleMode {
        self.mode
    }

    /// Base variables that get two copies.
    pub fn doubled_vars(&self) -> &[usize] {
        &self.doubled
    }

    pub fn pi1(&self, p: &Poly) -> Poly {
        p.remap(&self.pi1, self.ctx.nvars())
    }

    pub fn pi2(&self, p: &Poly) -> Poly {
        p.remap(&self.pi2, self.ctx.nvars())
    }

    /// `v∘π1 - v∘π2` for base variable `v`.
    pub fn difference(&self, v: usize) -> Poly {
        self.ctx.var(self.pi1[v]) - self.ctx.var(self.pi2[v])
    }

    /// The point `(x, x')` of the product; in relative mode shared
    /// coordinates must agree.
    pub fn point(&self, x: &[Rational], x2: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.base.nvars();
        if x.len() != n || x2.len() != n {
            return Err(Error::Dimension(format!("base points need {n} coordinates")));
        }
        let mut out = vec![Rational::from_integer(0.into()); self.ctx.nvars()];
        for i in 0..n {
            if !self.doubled.contains(&i) && x[i] != x2[i] {
                return Err(Error::InvalidArgument(format!(
                    "shared coordinate `{}` differs between the two points",
                    self.base.names()[i]
                )));
            }
            out[self.pi1[i]] = x[i].clone();
            out[self.pi2[i]] = x2[i].clone();
        }
        Ok(out)
    }

    /// Inverse of [`Self::point`]: the base points `(x, x')`.
    pub fn split_point(&self, pt: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
        if pt.len() != self.ctx.nvars() {
            return Err(Error::Dimension(format!("product points need {} coordinates", self.ctx.nvars())));
        }
        let x = self.pi1.iter().map(|&i| pt[i].clone()).collect();
        let x2 = self.pi2.iter().map(|&i| pt[i].clone()).collect();
        Ok((x, x2))
    }

    /// Telescoping decomposition `a∘π1 - a∘π2 = sum_i (v_i' - v_i'') q_i`
    /// over the doubled variables, in the order of [`Self::doubled_vars`].
    pub fn split_difference(&self, a: &Poly) -> Vec<Poly> {
        let mut cur = self.pi1(a);
        let mut out = Vec::with_capacity(self.doubled.len());
        for &v in &self.doubled {
            let (i1, i2) = (self.pi1[v], self.pi2[v]);
            out.push(cur.divided_difference(i1, i2));
            let mut assign: Vec<Option<Poly>> = vec![None; self.ctx.nvars()];
            assign[i1] = Some(self.ctx.var(i2));
            cur = cur.substitute(&assign);
        }
        out
    }
}

pub fn double_element(h: &[Poly], pctx: &ProductRingContext) -> ModVec {
    let mut out: ModVec = h.iter().map(|x| pctx.pi1(x)).collect();
    out.extend(h.iter().map(|x| pctx.pi2(x)));
    out
}

/// `M_D` with its generator basis recorded.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoublePresentation {
    pub product: ProductRingContext,
    pub module: ModulePresentation,
    pub basis: Basis,
}

impl DoublePresentation {
    pub fn base_generators(&self) -> usize {
        self.module.num_generators() / (1 + self.product.doubled_vars().len())
    }
}

pub fn double_module(m: &ModulePresentation, mode: DoubleMode, basis: Basis) -> Result<DoublePresentation> {
    let product = ProductRingContext::new(m.context(), mode)?;
    double_module_over(m, &product, basis)
}

pub fn double_module_over(m: &ModulePresentation, product: &ProductRingContext, basis: Basis) -> Result<DoublePresentation> {
    if product.base() != m.context() {
        return Err(Error::RingMismatch("module is not over the base of the product".into()));
    }
    let p = m.rank();
    let nv = product.context().nvars();
    let mut gens: Vec<ModVec> = m.generators().iter().map(|h| double_element(h, product)).collect();
    for &v in product.doubled_vars() {
        let d = product.difference(v);
        for h in m.generators() {
            let g: ModVec = match basis {
                Basis::B => {
                    let mut g = vec![Poly::zero(nv); p];
                    g.extend(h.iter().map(|x| &d * &product.pi2(x)));
                    g
                }
                Basis::BPrime => {
                    let mut g: ModVec = h.iter().map(|x| &d * &product.pi1(x)).collect();
                    g.extend(std::iter::repeat(Poly::zero(nv)).take(p));
                    g
                }
                Basis::BDoublePrime => {
                    let vh: Vec<Poly> = h.iter().map(|x| &m.context().var(v) * x).collect();
                    double_element(&vh, product)
                }
            };
            gens.push(g);
        }
    }
    let module = ModulePresentation::new(product.context().clone(), 2 * p, gens)?;
    Ok(DoublePresentation { product: product.clone(), module, basis })
}

pub fn diagonal_ideal(pctx: &ProductRingContext) -> Result<Ideal> {
    let gens = pctx.doubled_vars().iter().map(|&v| pctx.difference(v)).collect();
    Ideal::new(pctx.context().clone(), gens)
}

/// `(rank M(x), rank M(x'), rank M_D(x, x'))`.
pub fn offdiagonal_block_rank(
    m: &ModulePresentation,
    mode: DoubleMode,
    x: &[Rational],
    x2: &[Rational],
) -> Result<(usize, usize, usize)> {
    m.context().check_point(x)?;
    m.context().check_point(x2)?;
    let d = double_module(m, mode, Basis::B)?;
    let pt = d.product.point(x, x2)?;
    let r1 = m.matrix().eval(x).rank();
    let r2 = m.matrix().eval(x2).rank();
    let rd = d.module.matrix().eval(&pt).rank();
    Ok((r1, r2, rd))
}

/// Turns `unit·h = sum a_j g_j` over the base into
/// `(unit∘π1)(unit∘π2)·h_D = sum c_k G_k` for the basis-B generators `G_k`
/// of `M_D`. Returns the product unit and the cofactors `c_k`.
pub fn lift_membership(
    d: &DoublePresentation,
    unit: &Poly,
    cofactors: &[Poly],
) -> Result<(Poly, Vec<Poly>)> {
    if d.basis != Basis::B {
        return Err(Error::Unsupported("certificate lifting is implemented for basis B".into()));
    }
    let pr = &d.product;
    let r = d.base_generators();
    if cofactors.len() != r {
        return Err(Error::Dimension(format!("{} cofactors for {r} generators", cofactors.len())));
    }
    let nv = pr.context().nvars();
    let nd = pr.doubled_vars().len();
    let mut out = vec![Poly::zero(nv); r * (1 + nd)];
    let u1 = pr.pi1(unit);
    let u2 = pr.pi2(unit);
    // (unit h)_D = sum_j (a_j∘π1)(g_j)_D - sum_j sum_i q_ij (0, (v_i'-v_i'') g_j∘π2)
    // S h_D = u2 (unit h)_D + (0, (u1 - u2)(unit h)∘π2)
    for (j, a) in cofactors.iter().enumerate() {
        let a1 = pr.pi1(a);
        out[j] = &u2 * &a1;
        for (i, q) in pr.split_difference(a).into_iter().enumerate() {
            let k = r + i * r + j;
            out[k] = &out[k] - &(&u2 * &q);
        }
    }
    // (unit h)∘π2 = sum_j (a_j∘π2)(g_j∘π2) modulo relations
    for (i, qu) in pr.split_difference(unit).into_iter().enumerate() {
        for (j, a) in cofactors.iter().enumerate() {
            let k = r + i * r + j;
            out[k] = &out[k] + &(&qu * &pr.pi2(a));
        }
    }
    Ok((&u1 * &u2, out))
}
