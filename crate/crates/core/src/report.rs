//! Sweep reports: JSON schema and text rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::catalog::IngestFailure;
use crate::matcher::DivisibilityMatching;
use crate::numtheory::FactoredInteger;
use crate::scalar::ExactScalar;
use crate::verify::{ClaimId, TheoremVerdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub r: ExactScalar,
    pub s: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridValue {
    pub r: ExactScalar,
    pub s: ExactScalar,
    /// `R_G(r,s)` at `n = |G|`.
    pub r_value: Option<ExactScalar>,
    /// `T_G(r,s)` at `n = |G|`.
    pub t_value: Option<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    pub cyclic_subgroups: u64,
    pub product_of_orders: Option<FactoredInteger>,
    pub t_values: Vec<GridValue>,
}

/// How one requested claim fared on one group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub checked: usize,
    pub consistent: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub errors: usize,
    /// Errors where two independent evaluations of the same condition differ.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub disagreements: usize,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub label: String,
    pub family: String,
    pub order: u64,
    pub cyclic: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub profile: BTreeMap<u64, u64>,
    pub invariants: Invariants,
    pub coverage: BTreeMap<ClaimId, Coverage>,
    pub verdicts: Vec<TheoremVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matching: Option<DivisibilityMatching>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub groups: usize,
    pub order_cap: usize,
    pub max_order: u64,
    pub families: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ingest_failures: Vec<IngestFailure>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimTally {
    pub verdicts: usize,
    pub consistent: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub verdicts: usize,
    pub consistent: usize,
    /// Inconsistent verdicts computed with exact arithmetic.
    pub inconsistent_exact: usize,
    pub inconsistent_approximate: usize,
    pub errors: usize,
    pub by_claim: BTreeMap<ClaimId, ClaimTally>,
    pub matchings_found: usize,
    pub matching_violations_solvable: usize,
    pub matching_violations_nonsolvable: usize,
    pub anomalies: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub catalog: CatalogSummary,
    pub claims: Vec<ClaimId>,
    pub grid: Vec<GridPoint>,
    pub groups: Vec<GroupRecord>,
    pub summary: Summary,
}

impl Report {
    /// 0 when everything is consistent, 1 on an exact inconsistency or a
    /// matching violation on a solvable group.
    pub fn exit_code(&self) -> i32 {
        let s = &self.summary;
        if s.inconsistent_exact > 0 || s.matching_violations_solvable > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_table(&self) -> String {
        let header = ["group", "order", "cyclic", "nilpotent", "solvable", "verdicts", "consistent", "matching"];
        let yn = |b: bool| if b { "yes" } else { "no" }.to_string();
        let mut rows: Vec<[String; 8]> = vec![header.map(String::from)];
        for g in &self.groups {
            let checked: usize = g.coverage.values().map(|c| c.checked).sum();
            let consistent: usize = g.coverage.values().map(|c| c.consistent).sum();
            let matching = match &g.matching {
                Some(m) => format!("{:?}", m.status).to_lowercase(),
                None => "-".into(),
            };
            rows.push([
                g.label.clone(),
                g.order.to_string(),
                yn(g.cyclic),
                yn(g.nilpotent),
                yn(g.solvable),
                checked.to_string(),
                consistent.to_string(),
                matching,
            ]);
        }
        let mut widths = [0usize; 8];
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &rows {
            let mut line = format!("{:<w$}", row[0], w = widths[0]);
            for (cell, w) in row.iter().zip(widths).skip(1) {
                let _ = write!(line, "  {cell:>w$}");
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "groups {}  verdicts {}  consistent {}  inconsistent {} exact / {} approximate  errors {}",
            self.groups.len(),
            s.verdicts,
            s.consistent,
            s.inconsistent_exact,
            s.inconsistent_approximate,
            s.errors
        );
        let _ = writeln!(
            out,
            "matchings found {}  violations on solvable groups {}  on non-solvable groups {}",
            s.matchings_found, s.matching_violations_solvable, s.matching_violations_nonsolvable
        );
        for (claim, t) in &s.by_claim {
            let _ = writeln!(
                out,
                "  {:<26} {:>7} verdicts {:>7} consistent {:>4} errors",
                claim.as_str(),
                t.verdicts,
                t.consistent,
                t.errors
            );
        }
        if !s.anomalies.is_empty() {
            let _ = writeln!(out, "anomalies:");
            for a in &s.anomalies {
                let _ = writeln!(out, "  {a}");
            }
        }
        out
    }
}
