//! Report schema, text rendering and certificate re-verification.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use lipdouble::closure::{verify_verdict, Certificate, ClosureVerdict, Status};
use lipdouble::curvefam::{AuditEntry, ChainRuleReport};
use lipdouble::equising::{ConditionReport, Evidence, IdentityCheck};
use lipdouble::modulealg::{RingContext, VarRole};

use crate::task::TaskFile;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DoubleResult {
    pub mode: String,
    pub basis: String,
    pub product_vars: Vec<String>,
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RankResult {
    pub mode: String,
    pub generic_rank: usize,
    pub doubled_generic_rank: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CosupportResult {
    pub generic_rank: usize,
    pub ideal: Vec<String>,
    pub mode: String,
    pub product_vars: Vec<String>,
    pub doubled_generic_rank: usize,
    pub doubled_ideal: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RhoResult {
    pub chart: usize,
    pub vars: Vec<String>,
    pub ideal: Vec<String>,
    pub target: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FastpathResult {
    Certified { report: ConditionReport },
    Inapplicable { reason: String },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GrassmannResult {
    pub vars: Vec<String>,
    pub params: Vec<String>,
    pub family: Vec<String>,
    pub identities: Vec<IdentityCheck>,
    pub criterion: ConditionReport,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub multiplicity: u32,
    pub pivot: usize,
    pub v: Vec<String>,
    pub linear_identity: bool,
    pub reparam_unit: String,
    pub reparam_identity: bool,
    pub inverse_reparam: String,
    pub truncation: usize,
    pub family: Vec<String>,
    pub s_orders: Vec<Option<u32>>,
    pub recomposes: bool,
    pub audit: Vec<AuditEntry>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BilipResult {
    pub vars: Vec<String>,
    pub implicitization: Vec<String>,
    pub chain_rule: ChainRuleReport,
    pub report: ConditionReport,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "task", content = "result", rename_all = "kebab-case")]
pub enum TaskResult {
    Double(DoubleResult),
    Rank(RankResult),
    Cosupport(CosupportResult),
    Rho(RhoResult),
    ClosureTest(ClosureVerdict),
    CheckW(ConditionReport),
    CheckIla(ConditionReport),
    CheckIlmy(Vec<ConditionReport>),
    WhFastpath(FastpathResult),
    Grassmann(GrassmannResult),
    CurveNormalForm(NormalFormReport),
    CurveBilip(BilipResult),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub input: TaskFile,
    pub outcome: TaskResult,
}

/// One checked certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub what: String,
    pub ok: bool,
}

fn check_verdict(what: String, v: &ClosureVerdict, out: &mut Vec<Check>) {
    if v.status == Status::Inconclusive {
        return;
    }
    let ok = verify_verdict(v).unwrap_or(false);
    out.push(Check { what, ok });
}

fn check_condition(r: &ConditionReport, out: &mut Vec<Check>) {
    let cond = serde_json::to_value(r.condition).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    for g in &r.generators {
        let what = format!("{cond} {}: {}", g.name, g.verdict);
        match &g.certificate {
            Evidence::Closure(v) => {
                if g.verdict != Status::Inconclusive {
                    let ok = v.status == g.verdict && verify_verdict(v).unwrap_or(false);
                    out.push(Check { what, ok });
                }
            }
            Evidence::Euler(c) => out.push(Check { what, ok: g.verdict == Status::Holds && c.verify().unwrap_or(false) }),
        }
    }
    let agg = lipdouble::equising::aggregate(r.generators.iter().map(|g| g.verdict));
    if agg != r.aggregate {
        out.push(Check { what: format!("{cond} aggregate"), ok: false });
    }
}

fn check_identities(vars: &[String], ids: &[IdentityCheck], out: &mut Vec<Check>) {
    let ctx = match RingContext::from_parts(vars.to_vec(), vec![VarRole::Fiber; vars.len()]) {
        Ok(c) => c,
        Err(_) => {
            out.push(Check { what: "identity ring".into(), ok: false });
            return;
        }
    };
    for id in ids {
        let ok = match (ctx.parse(&id.lhs), ctx.parse(&id.rhs)) {
            (Ok(l), Ok(r)) => id.holds && l == r,
            _ => false,
        };
        out.push(Check { what: id.identity.clone(), ok });
    }
}

impl TaskResult {
    /// Re-validates every Holds/Fails certificate and every recorded identity.
    pub fn verify(&self) -> Vec<Check> {
        let mut out = Vec::new();
        match self {
            TaskResult::ClosureTest(v) => check_verdict(format!("closure: {}", v.status), v, &mut out),
            TaskResult::CheckW(r) | TaskResult::CheckIla(r) => check_condition(r, &mut out),
            TaskResult::CheckIlmy(rs) => {
                for r in rs {
                    check_condition(r, &mut out);
                }
            }
            TaskResult::WhFastpath(FastpathResult::Certified { report }) => check_condition(report, &mut out),
            TaskResult::Grassmann(g) => {
                let mut vars = g.vars.clone();
                vars.extend(g.params.iter().cloned());
                check_identities(&vars, &g.identities, &mut out);
                check_condition(&g.criterion, &mut out);
            }
            TaskResult::CurveBilip(b) => check_condition(&b.report, &mut out),
            _ => {}
        }
        out
    }
}

fn status_line(r: &ConditionReport) -> String {
    let cond = serde_json::to_value(r.condition).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    format!("{cond} at ({}): {}", r.point.join(", "), r.aggregate)
}

fn write_certificate(s: &mut String, v: &ClosureVerdict) {
    let _ = match &v.certificate {
        Certificate::Exhausted { reasons } => {
            let _ = writeln!(s, "    exhausted:");
            for r in reasons {
                let _ = writeln!(s, "      - {r}");
            }
            Ok(())
        }
        c => writeln!(s, "    certificate: {} ({})", c.kind(), v.model),
    };
}

fn write_condition(s: &mut String, r: &ConditionReport) {
    let _ = writeln!(s, "{}", status_line(r));
    for g in &r.generators {
        let _ = writeln!(s, "  {}: {}", g.name, g.verdict);
        match &g.certificate {
            Evidence::Closure(v) => write_certificate(s, v),
            Evidence::Euler(c) => {
                let _ = writeln!(
                    s,
                    "    {}*d/d{} = sum A_i z_i d/dz_i + sum C_c F_c with A = [{}], C = [{}]",
                    c.denominator,
                    c.parameter,
                    c.z_coefficients.join(", "),
                    c.relation_coefficients.join(", ")
                );
            }
        }
    }
    for n in &r.notes {
        let _ = writeln!(s, "  note: {n}");
    }
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let task = serde_json::to_value(self.input.task).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        let _ = writeln!(s, "task: {task}");
        match &self.outcome {
            TaskResult::Double(d) => {
                let _ = writeln!(s, "basis {} ({} mode) over {}", d.basis, d.mode, d.product_vars.join(", "));
                for g in &d.generators {
                    let _ = writeln!(s, "  ({})", g.join(", "));
                }
            }
            TaskResult::Rank(r) => {
                let _ = writeln!(s, "generic rank {}; doubled ({}) generic rank {}", r.generic_rank, r.mode, r.doubled_generic_rank);
                for n in &r.notes {
                    let _ = writeln!(s, "  note: {n}");
                }
            }
            TaskResult::Cosupport(c) => {
                let _ = writeln!(s, "J_{}(M) = ({})", c.generic_rank, c.ideal.join(", "));
                let _ = writeln!(s, "J_{}(M_D) = ({})", c.doubled_generic_rank, c.doubled_ideal.join(", "));
                for n in &c.notes {
                    let _ = writeln!(s, "  note: {n}");
                }
            }
            TaskResult::Rho(r) => {
                let _ = writeln!(s, "rho(M) in chart {} over {}: ({})", r.chart, r.vars.join(", "), r.ideal.join(", "));
                if let Some(t) = &r.target {
                    let _ = writeln!(s, "rho(h) = {t}");
                }
            }
            TaskResult::ClosureTest(v) => {
                let _ = writeln!(s, "{} via {}", v.status, v.engine);
                write_certificate(&mut s, v);
            }
            TaskResult::CheckW(r) | TaskResult::CheckIla(r) => write_condition(&mut s, r),
            TaskResult::CheckIlmy(rs) => {
                for r in rs {
                    write_condition(&mut s, r);
                }
            }
            TaskResult::WhFastpath(FastpathResult::Certified { report }) => write_condition(&mut s, report),
            TaskResult::WhFastpath(FastpathResult::Inapplicable { reason }) => {
                let _ = writeln!(s, "fast path inapplicable: {reason}");
            }
            TaskResult::Grassmann(g) => {
                let _ = writeln!(s, "F = {}", g.family.join(", "));
                for id in &g.identities {
                    let _ = writeln!(s, "  {}: {}", id.identity, if id.holds { "ok" } else { "FAILED" });
                }
                write_condition(&mut s, &g.criterion);
            }
            TaskResult::CurveNormalForm(n) => {
                let _ = writeln!(s, "multiplicity {}, pivot coordinate {}", n.multiplicity, n.pivot + 1);
                let _ = writeln!(s, "L identity: {}, R identity: {}", n.linear_identity, n.reparam_identity);
                for (i, (f, o)) in n.family.iter().zip(&n.s_orders).enumerate() {
                    let o = o.map_or("-".to_string(), |o| o.to_string());
                    let _ = writeln!(s, "  F~_{} = {f}  (ord_s {o})", i + 1);
                }
                let _ = writeln!(s, "recomposes to the input: {}", n.recomposes);
            }
            TaskResult::CurveBilip(b) => {
                let _ = writeln!(s, "G = {}", b.implicitization.join(", "));
                let c = &b.chain_rule;
                let _ = writeln!(s, "chain rule: G∘F = 0 {}, identities ok {}", c.vanishes, c.ok);
                for id in c.velocity.iter().chain(&c.reduction) {
                    let _ = writeln!(s, "  {}: {}", id.identity, if id.holds { "ok" } else { "FAILED" });
                }
                write_condition(&mut s, &b.report);
            }
        }
        s
    }
}
