use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Poly, Rational};
use crate::groebner::{GroebnerBasis, MonomialOrder};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarRole {
    /// Fiber coordinate `z_i`.
    Fiber,
    /// Parameter coordinate `y_l`.
    Param,
    /// Chart coordinate, localization inverse or other helper.
    Aux,
}

/// Polynomial ring with named, role-tagged variables and the generators of
/// `I(X)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingContext {
    names: Vec<String>,
    roles: Vec<VarRole>,
    relations: Vec<Poly>,
    irreducible: bool,
}

impl RingContext {
    pub fn new(z: &[&str], y: &[&str]) -> Result<Self> {
        let mut ctx = RingContext { names: Vec::new(), roles: Vec::new(), relations: Vec::new(), irreducible: true };
        for n in z {
            ctx.push(n, VarRole::Fiber)?;
        }
        for n in y {
            ctx.push(n, VarRole::Param)?;
        }
        Ok(ctx)
    }

    pub fn from_parts(names: Vec<String>, roles: Vec<VarRole>) -> Result<Self> {
        if names.len() != roles.len() {
            return Err(Error::Dimension("one role per variable".into()));
        }
        let mut ctx = RingContext { names: Vec::new(), roles: Vec::new(), relations: Vec::new(), irreducible: true };
        for (n, r) in names.iter().zip(roles) {
            ctx.push(n, r)?;
        }
        Ok(ctx)
    }

    fn push(&mut self, name: &str, role: VarRole) -> Result<()> {
        let ok = !name.is_empty()
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::InvalidArgument(format!("`{name}` is not a valid variable name")));
        }
        if self.names.iter().any(|n| n == name) {
            return Err(Error::DuplicateVariable(name.to_string()));
        }
        self.names.push(name.to_string());
        self.roles.push(role);
        for r in &mut self.relations {
            *r = r.extend(1);
        }
        Ok(())
    }

    /// Adds variables at the end; returns their indices.
    pub fn add_vars(&mut self, names: &[String], role: VarRole) -> Result<Vec<usize>> {
        let start = self.nvars();
        for n in names {
            self.push(n, role)?;
        }
        Ok((start..self.nvars()).collect())
    }

    pub fn with_relations(mut self, relations: Vec<Poly>) -> Result<Self> {
        self.set_relations(relations)?;
        Ok(self)
    }

    pub fn set_relations(&mut self, relations: Vec<Poly>) -> Result<()> {
        if let Some(r) = relations.iter().find(|r| r.nvars() != self.nvars()) {
            return Err(Error::RingMismatch(format!(
                "relation over {} variables in a ring with {}",
                r.nvars(),
                self.nvars()
            )));
        }
        self.relations = relations.into_iter().filter(|r| !r.is_zero()).collect();
        Ok(())
    }

    pub fn add_relation(&mut self, r: Poly) -> Result<()> {
        let mut rels = self.relations.clone();
        rels.push(r);
        self.set_relations(rels)
    }

    pub fn set_irreducible(&mut self, asserted: bool) {
        self.irreducible = asserted;
    }

    /// Whether the user asserted that the relations cut out an irreducible variety.
    pub fn irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn roles(&self) -> &[VarRole] {
        &self.roles
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn indices(&self, role: VarRole) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.roles[i] == role).collect()
    }

    pub fn fiber(&self) -> Vec<usize> {
        self.indices(VarRole::Fiber)
    }

    pub fn params(&self) -> Vec<usize> {
        self.indices(VarRole::Param)
    }

    pub fn parse(&self, src: &str) -> Result<Poly> {
        Poly::parse(src, &self.names)
    }

    pub fn render(&self, p: &Poly) -> String {
        p.to_string_with(&self.names)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.nvars(), i)
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.nvars())
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.nvars())
    }

    pub fn origin(&self) -> Vec<Rational> {
        vec![Rational::from_integer(0.into()); self.nvars()]
    }

    /// Checks that every relation vanishes at `pt`.
    pub fn check_point(&self, pt: &[Rational]) -> Result<()> {
        if pt.len() != self.nvars() {
            return Err(Error::Dimension(format!(
                "point has {} coordinates, ring has {}",
                pt.len(),
                self.nvars()
            )));
        }
        for r in &self.relations {
            let v = r.eval(pt);
            if v != Rational::from_integer(0.into()) {
                return Err(Error::PointOffVariety(format!("{} = {v} at the point", self.render(r))));
            }
        }
        Ok(())
    }

    pub fn relation_basis(&self) -> Result<GroebnerBasis> {
        GroebnerBasis::ideal(self.nvars(), &self.relations, MonomialOrder::DegRevLex)
    }

    /// Normal form modulo the relations.
    pub fn reduce(&self, p: &Poly) -> Result<Poly> {
        if self.relations.is_empty() {
            return Ok(p.clone());
        }
        self.relation_basis()?.normal_form_poly(p)
    }

    /// Variables that occur in some relation.
    pub fn relation_vars(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for r in &self.relations {
            for (i, u) in r.vars_used().into_iter().enumerate() {
                if u {
                    s.insert(i);
                }
            }
        }
        s
    }
}
