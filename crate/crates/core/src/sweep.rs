//! Catalog sweeps: every requested claim on every group, in parallel, merged
//! into one deterministic report.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::catalog::{Catalog, CatalogEntry};
use crate::matcher::MatchStatus;
use crate::numtheory::divisors;
use crate::report::{
    CatalogSummary, ClaimTally, Coverage, GridPoint, GridValue, GroupRecord, Invariants, Report, Summary,
    SCHEMA_VERSION,
};
use crate::scalar::{ExactScalar, Mode, Sign};
use crate::stats;
use crate::structure::DEFAULT_SUBGROUP_CAP;
use crate::verify::{check_semidirect_group, integer_grid, ClaimId, Subject, TheoremVerdict, VerifyError};

/// Groups up to this order are checked at every divisor `n`, not only at
/// `n = |G|`.
pub const DIVISOR_SWEEP_MAX_ORDER: u64 = 48;

pub const WORKERS_ENV: &str = "ORDERINV_WORKERS";

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub claims: Vec<ClaimId>,
    pub grid: Vec<(ExactScalar, ExactScalar)>,
    /// `None` reads `ORDERINV_WORKERS`, then falls back to rayon's default.
    pub workers: Option<usize>,
    pub divisor_sweep_max_order: u64,
    pub subgroup_cap: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            claims: ClaimId::ALL.to_vec(),
            grid: integer_grid(-3, 3),
            workers: None,
            divisor_sweep_max_order: DIVISOR_SWEEP_MAX_ORDER,
            subgroup_cap: DEFAULT_SUBGROUP_CAP,
        }
    }
}

fn workers(opts: &SweepOptions) -> Option<usize> {
    opts.workers.or_else(|| std::env::var(WORKERS_ENV).ok()?.trim().parse().ok()).filter(|&w| w > 0)
}

pub fn run_sweep(catalog: &Catalog, opts: &SweepOptions) -> Report {
    let mut claims = opts.claims.clone();
    claims.sort();
    claims.dedup();
    let opts = SweepOptions { claims, ..opts.clone() };
    let evaluate = || catalog.entries.par_iter().map(|e| evaluate_entry(e, &opts)).collect::<Vec<_>>();
    let mut records = match workers(&opts) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(evaluate),
            Err(_) => evaluate(),
        },
        None => evaluate(),
    };
    records.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.label.cmp(&b.label)));

    let mut families = BTreeMap::new();
    for e in &catalog.entries {
        *families.entry(e.family.clone()).or_insert(0) += 1;
    }
    let summary = summarize(&records, catalog);
    Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        catalog: CatalogSummary {
            groups: catalog.len(),
            order_cap: catalog.order_cap,
            max_order: records.iter().map(|r| r.order).max().unwrap_or(0),
            families,
            ingest_failures: catalog.failures.clone(),
        },
        claims: opts.claims.clone(),
        grid: opts.grid.iter().map(|(r, s)| GridPoint { r: r.clone(), s: s.clone() }).collect(),
        groups: records,
        summary,
    }
}

fn is_int_grid_point(r: &ExactScalar, s: &ExactScalar) -> bool {
    r.as_integer().is_some() && s.as_integer().is_some()
}

struct Collector {
    coverage: BTreeMap<ClaimId, Coverage>,
    verdicts: Vec<TheoremVerdict>,
    errors: Vec<String>,
}

impl Collector {
    fn add(&mut self, claim: ClaimId, r: Result<TheoremVerdict, VerifyError>) {
        let c = self.coverage.entry(claim).or_default();
        match r {
            Ok(v) => {
                c.checked += 1;
                if v.consistent {
                    c.consistent += 1;
                }
                self.verdicts.push(v);
            }
            Err(e) => {
                c.errors += 1;
                if matches!(e, VerifyError::RoutesDisagree { .. }) {
                    c.disagreements += 1;
                }
                self.errors.push(format!("{claim}: {e}"));
            }
        }
    }

    fn skip(&mut self, claim: ClaimId, reason: &str) {
        self.coverage.entry(claim).or_default().skipped = Some(reason.to_string());
    }
}

pub fn evaluate_entry(entry: &CatalogEntry, opts: &SweepOptions) -> GroupRecord {
    let g = &entry.group;
    let subject = Subject::with_subgroup_cap(g, opts.subgroup_cap);
    let order = subject.order();
    let profile = subject.profile();
    let ns: Vec<u64> = if order <= opts.divisor_sweep_max_order {
        divisors(order).expect("positive order")
    } else {
        vec![order]
    };
    let zero = ExactScalar::zero();
    let one = ExactScalar::one();
    let mut out = Collector { coverage: BTreeMap::new(), verdicts: Vec::new(), errors: Vec::new() };
    let mut matching = None;

    for &claim in &opts.claims {
        match claim {
            ClaimId::FrobeniusDivisibility => out.add(claim, Ok(subject.frobenius_divisibility())),
            ClaimId::MinCyclicSubgroups => out.add(claim, subject.check_min_cyclic_subgroups()),
            ClaimId::ProductOfOrders => out.add(claim, subject.check_product_theorem()),
            ClaimId::UniqueCyclic => {
                for (r, s) in &opts.grid {
                    if s.compare(r).is_lt() && !s.compare(&zero).is_gt() {
                        for &n in &ns {
                            out.add(claim, subject.check_case1(n, r, s));
                        }
                    }
                }
            }
            ClaimId::NilpotentDiagonal => {
                for (r, s) in &opts.grid {
                    if r == s && r.compare(&zero).is_lt() {
                        for &n in &ns {
                            out.add(claim, subject.check_case2(n, r));
                        }
                    }
                }
            }
            ClaimId::CyclicUpper => {
                for (r, s) in &opts.grid {
                    if !r.compare(&(s - &one)).is_gt() && !s.compare(&one).is_lt() {
                        out.add(claim, subject.check_case3(r, s));
                    }
                }
            }
            ClaimId::NilpotentSign => {
                if subject.is_nilpotent() && !subject.is_cyclic() {
                    for (r, s) in &opts.grid {
                        out.add(claim, subject.check_case4(r, s));
                    }
                } else {
                    out.skip(claim, if subject.is_cyclic() { "cyclic" } else { "not nilpotent" });
                }
            }
            ClaimId::CyclicCountEquivalence => {
                for &n in &ns {
                    out.add(claim, subject.check_corollary31(n));
                }
            }
            ClaimId::SemidirectCount => match entry.semidirect {
                Some(params) => {
                    let grid: Vec<_> = opts.grid.iter().filter(|(r, s)| is_int_grid_point(r, s)).cloned().collect();
                    out.add(claim, check_semidirect_group(g, params, &grid));
                }
                None => out.skip(claim, "not an inversion semidirect product"),
            },
            ClaimId::NilpotentT11 => out.add(claim, subject.check_nilpotent_t11()),
            ClaimId::GExpansion => {
                let grid: Vec<_> = opts
                    .grid
                    .iter()
                    .filter(|(r, s)| {
                        let m = if r.compare(&zero).is_lt() { r } else { &zero };
                        !s.compare(m).is_gt()
                    })
                    .cloned()
                    .collect();
                out.add(claim, subject.check_g_expansion(&grid));
            }
            ClaimId::DivisibilityMatching => {
                let (v, m) = subject.check_divisibility_matching();
                out.add(claim, Ok(v));
                matching = Some(m);
            }
        }
    }

    let t_values = opts
        .grid
        .iter()
        .map(|(r, s)| GridValue {
            r: r.clone(),
            s: s.clone(),
            r_value: stats::r_functional(profile, order, r, s).ok(),
            t_value: subject.t_value(order, r, s).ok(),
        })
        .collect();
    let invariants = Invariants {
        cyclic_subgroups: stats::cyclic_subgroup_count(profile, order).unwrap_or(0),
        product_of_orders: stats::product_of_orders(profile).ok(),
        t_values,
    };
    GroupRecord {
        label: g.label().to_string(),
        family: entry.family.clone(),
        order,
        cyclic: subject.is_cyclic(),
        nilpotent: subject.is_nilpotent(),
        solvable: subject.is_solvable(),
        profile: profile.counts().clone(),
        invariants,
        coverage: out.coverage,
        verdicts: out.verdicts,
        matching,
        errors: out.errors,
    }
}

fn describe(v: &TheoremVerdict) -> String {
    let params = match (&v.r, &v.s) {
        (Some(r), Some(s)) => format!(" (r,s)=({r},{s})"),
        _ => String::new(),
    };
    format!("{} {} n={}{}: sign {}", v.claim_id, v.group, v.n, params, v.sign_of_t)
}

fn summarize(records: &[GroupRecord], catalog: &Catalog) -> Summary {
    let mut s = Summary::default();
    for rec in records {
        for (claim, c) in &rec.coverage {
            let t: &mut ClaimTally = s.by_claim.entry(*claim).or_default();
            t.verdicts += c.checked;
            t.consistent += c.consistent;
            t.errors += c.errors;
            s.inconsistent_exact += c.disagreements;
        }
        s.errors += rec.errors.len();
        for e in &rec.errors {
            s.anomalies.push(format!("error on {}: {e}", rec.label));
        }
        for v in &rec.verdicts {
            s.verdicts += 1;
            if v.consistent {
                s.consistent += 1;
            } else if v.mode == Mode::Exact {
                s.inconsistent_exact += 1;
                s.anomalies.push(format!("inconsistent: {}", describe(v)));
            } else {
                s.inconsistent_approximate += 1;
                s.anomalies.push(format!("inconsistent (approximate): {}", describe(v)));
            }
            if v.claim_id == ClaimId::NilpotentT11 && !rec.nilpotent && v.sign_of_t == Sign::Zero {
                s.anomalies.push(format!("T(1,1) = 0 on non-nilpotent {}", rec.label));
            }
        }
        if let Some(m) = &rec.matching {
            match (m.status, rec.solvable) {
                (MatchStatus::Found, _) => s.matchings_found += 1,
                (MatchStatus::Violated, true) => {
                    s.matching_violations_solvable += 1;
                    s.anomalies.push(format!("matching violated on solvable {}", rec.label));
                }
                (MatchStatus::Violated, false) => {
                    s.matching_violations_nonsolvable += 1;
                    s.anomalies.push(format!("matching violated on non-solvable {}", rec.label));
                }
            }
        }
    }
    for f in &catalog.failures {
        s.anomalies.push(format!("ingest failure {}: {}", f.source, f.error));
    }
    s
}
