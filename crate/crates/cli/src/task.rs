//! Task file schema.

use serde::{Deserialize, Serialize};

use lipdouble::closure::{ClosureKind, Strategy};
use lipdouble::double::{Basis, DoubleMode};
use lipdouble::equising::{IlmyVariant, WeightVector};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskKind {
    Double,
    Rank,
    Cosupport,
    Rho,
    ClosureTest,
    CheckW,
    CheckIla,
    CheckIlmy,
    WhFastpath,
    Grassmann,
    CurveNormalForm,
    CurveBilip,
}

/// A rational written either as a JSON integer or as a string like `"-3/4"`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDecl {
    pub z: Vec<String>,
    #[serde(default)]
    pub y: Vec<String>,
    /// Defining equations of `X`, added to the family equations if any.
    #[serde(default)]
    pub relations: Vec<String>,
    /// Whether the relations cut out an irreducible variety. Unasserted
    /// ranks over a variety with relations carry a caveat.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducible: Option<bool>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDecl {
    pub rank: usize,
    /// Columns of the generator matrix.
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDecl {
    /// One term list per coordinate after `t`; `[coeff, i, j]` is `coeff·t^i·s^j`.
    pub components: Vec<Vec<(Num, u32, u32)>>,
    pub truncation: Option<usize>,
    #[serde(default)]
    pub polynomial: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum BasisName {
    B,
    #[serde(rename = "B'")]
    BPrime,
    #[serde(rename = "B''")]
    BDoublePrime,
}

impl From<BasisName> for Basis {
    fn from(b: BasisName) -> Basis {
        match b {
            BasisName::B => Basis::B,
            BasisName::BPrime => Basis::BPrime,
            BasisName::BDoublePrime => Basis::BDoublePrime,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskOptions {
    pub truncation: Option<usize>,
    pub max_m: Option<u32>,
    pub max_deg: Option<u32>,
    pub max_unknowns: Option<usize>,
    pub arc_count: Option<usize>,
    pub degree_budget: Option<u32>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureKind>,
    /// Chart index for `rho`.
    pub chart: Option<usize>,
    /// Base point; for doubled tasks the first factor's point.
    pub point: Option<Vec<Num>>,
    /// Second factor's point for doubled tasks (default: same as `point`).
    pub second_point: Option<Vec<Num>>,
    pub variant: Option<IlmyVariant>,
    pub basis: Option<BasisName>,
    pub mode: Option<DoubleMode>,
    pub strategy: Option<Strategy>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskFile {
    pub task: TaskKind,
    #[serde(default)]
    pub ring: RingDecl,
    /// Defining map of a family, or `f` for the hyperplane-section task.
    pub family: Option<Vec<String>>,
    pub module: Option<ModuleDecl>,
    pub ideal: Option<Vec<String>>,
    /// Closure-test target: one entry for an ideal, `rank` entries for a module.
    pub target: Option<Vec<String>>,
    pub parametrization: Option<ParamDecl>,
    pub weights: Option<WeightVector>,
    #[serde(default)]
    pub options: TaskOptions,
}
