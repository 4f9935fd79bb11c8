use serde::{Deserialize, Serialize};

use super::fastpath::EulerCertificate;
use crate::closure::{verify_verdict, ClosureOptions, ClosureVerdict, Status};
use crate::error::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Condition {
    W,
    #[serde(rename = "iL_mY")]
    IlMy,
    #[serde(rename = "iL_mY_alt")]
    IlMyAlt,
    #[serde(rename = "iL_A")]
    IlA,
    #[serde(rename = "WH_fastpath")]
    WhFastpath,
    #[serde(rename = "grassmann_criterion")]
    GrassmannCriterion,
    #[serde(rename = "bilipschitz")]
    Bilip,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Evidence {
    Closure(ClosureVerdict),
    Euler(EulerCertificate),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub name: String,
    pub verdict: Status,
    pub certificate: Evidence,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReportBounds {
    pub max_m: u32,
    pub max_deg: Option<u32>,
    pub max_unknowns: usize,
    pub arc_count: usize,
    pub degree_budget: u32,
    pub truncation: usize,
    pub seed: u64,
}

impl From<&ClosureOptions> for ReportBounds {
    fn from(o: &ClosureOptions) -> Self {
        ReportBounds {
            max_m: o.max_m,
            max_deg: o.max_deg,
            max_unknowns: o.max_unknowns,
            arc_count: o.arc_count,
            degree_budget: o.degree_budget,
            truncation: o.truncation,
            seed: o.seed,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    /// `name=value` for every coordinate of the ring the tests run in.
    pub point: Vec<String>,
    pub generators: Vec<GeneratorReport>,
    pub aggregate: Status,
    pub bounds: ReportBounds,
    pub model: String,
    pub notes: Vec<String>,
}

/// Holds iff every entry holds; Fails iff some entry fails.
pub fn aggregate(statuses: impl IntoIterator<Item = Status>) -> Status {
    let mut all = true;
    for s in statuses {
        match s {
            Status::Fails => return Status::Fails,
            Status::Inconclusive => all = false,
            Status::Holds => {}
        }
    }
    if all {
        Status::Holds
    } else {
        Status::Inconclusive
    }
}

impl ConditionReport {
    pub(crate) fn new(
        condition: Condition,
        point: Vec<String>,
        generators: Vec<GeneratorReport>,
        bounds: ReportBounds,
        notes: Vec<String>,
    ) -> Self {
        let aggregate = aggregate(generators.iter().map(|g| g.verdict));
        ConditionReport { condition, point, generators, aggregate, bounds, model: "polynomial-proxy".into(), notes }
    }

    /// Re-verifies every Holds/Fails certificate of the report.
    pub fn verify(&self) -> Result<bool> {
        for g in &self.generators {
            let ok = match &g.certificate {
                Evidence::Closure(v) => v.status == g.verdict && verify_verdict(v)?,
                Evidence::Euler(c) => g.verdict == Status::Holds && c.verify()?,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(self.aggregate == aggregate(self.generators.iter().map(|g| g.verdict)))
    }
}
