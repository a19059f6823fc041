//! Group catalogs: named families, label parsing and file ingestion.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::group::{
    alternating_capped, cyclic_capped, dihedral_capped, direct_product_capped, inversion_semidirect_capped,
    quaternion_generalized, symmetric_capped, FiniteGroup, GroupError, InversionSemidirect, PermutationGenSet,
    DEFAULT_ORDER_CAP,
};
use crate::numtheory::{gcd, is_prime, is_prime_power};

/// Largest order in the default catalog, apart from the symmetric and
/// alternating groups of degree 5.
pub const DEFAULT_CATALOG_MAX_ORDER: u64 = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family {family}: missing or malformed parameter {param:?}")]
    BadParameter { family: String, param: String },
    #[error("{label}: order {order} exceeds cap {cap}")]
    OrderCapExceeded { label: String, order: u64, cap: usize },
    #[error("cannot parse group label {0:?}")]
    BadLabel(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{source_name}: {error}")]
    Invalid { source_name: String, error: GroupError },
}

/// One family with inclusive `[lo, hi]` ranges per parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, [u64; 2]>,
}

impl FamilySpec {
    pub fn new(family: &str, params: &[(&str, u64, u64)]) -> Self {
        FamilySpec {
            family: family.to_string(),
            params: params.iter().map(|&(k, lo, hi)| (k.to_string(), [lo, hi])).collect(),
        }
    }

    fn range(&self, name: &str) -> Result<std::ops::RangeInclusive<u64>, CatalogError> {
        match self.params.get(name) {
            Some(&[lo, hi]) if lo <= hi => Ok(lo..=hi),
            _ => Err(CatalogError::BadParameter { family: self.family.clone(), param: name.to_string() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogSpec {
    #[serde(default)]
    pub families: Vec<FamilySpec>,
    /// Groups given by label, e.g. `"S4"` or `"Q8xC3"`.
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default)]
    pub ingested: Vec<PathBuf>,
    #[serde(default = "default_cap")]
    pub order_cap: usize,
    /// Re-run the associativity check on constructed families.
    #[serde(default)]
    pub paranoid: bool,
}

fn default_cap() -> usize {
    DEFAULT_ORDER_CAP
}

impl Default for CatalogSpec {
    fn default() -> Self {
        CatalogSpec {
            families: vec![FamilySpec::new("default", &[])],
            labels: Vec::new(),
            ingested: Vec::new(),
            order_cap: DEFAULT_ORDER_CAP,
            paranoid: false,
        }
    }
}

impl CatalogSpec {
    pub fn from_labels(labels: impl IntoIterator<Item = impl Into<String>>) -> Self {
        CatalogSpec { families: Vec::new(), labels: labels.into_iter().map(Into::into).collect(), ..Default::default() }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub group: FiniteGroup,
    pub family: String,
    pub semidirect: Option<InversionSemidirect>,
}

impl CatalogEntry {
    fn new(group: FiniteGroup, family: &str) -> Self {
        CatalogEntry { group, family: family.to_string(), semidirect: None }
    }
}

/// An input that could not be turned into a group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestFailure {
    pub source: String,
    pub error: String,
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub failures: Vec<IngestFailure>,
    pub order_cap: usize,
}

impl Catalog {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.group.label()).collect()
    }

    pub fn get(&self, label: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.group.label() == label)
    }

    fn push(&mut self, entry: CatalogEntry, seen: &mut BTreeSet<String>) {
        if seen.insert(entry.group.label().to_string()) {
            self.entries.push(entry);
        }
    }
}

fn cap_error(label: String, order: u64, cap: usize) -> CatalogError {
    CatalogError::OrderCapExceeded { label, order, cap }
}

fn lift(label: &str, cap: usize, r: Result<FiniteGroup, GroupError>) -> Result<FiniteGroup, CatalogError> {
    r.map_err(|e| match e {
        GroupError::OrderCapExceeded { cap } => cap_error(label.to_string(), 0, cap),
        error => CatalogError::Invalid { source_name: label.to_string(), error },
    })
    .and_then(|g| {
        if g.order() > cap {
            Err(cap_error(label.to_string(), g.order() as u64, cap))
        } else {
            Ok(g)
        }
    })
}

fn factorial(k: u64) -> u64 {
    (1..=k).product()
}

/// Builds a group from a label: `C12`, `D6` (order 6), `Q8`, `S4`, `A5`,
/// `E2^3`, `C3:C10`, and direct products joined by `x`.
pub fn parse_label(label: &str, cap: usize) -> Result<CatalogEntry, CatalogError> {
    let bad = || CatalogError::BadLabel(label.to_string());
    let label = label.trim();
    if label.contains('x') {
        let mut parts = label.split('x');
        let first = parse_label(parts.next().ok_or_else(bad)?, cap)?;
        let mut group = first.group;
        for part in parts {
            let next = parse_label(part, cap)?;
            let order = group.order() as u64 * next.group.order() as u64;
            if order > cap as u64 {
                return Err(cap_error(label.to_string(), order, cap));
            }
            group = lift(label, cap, direct_product_capped(&group, &next.group, cap))?;
        }
        return Ok(CatalogEntry::new(group, "product"));
    }
    if let Some(params) = InversionSemidirect::parse_label(label) {
        if params.order() > cap as u64 {
            return Err(cap_error(label.to_string(), params.order(), cap));
        }
        let group = lift(label, cap, inversion_semidirect_capped(params, cap))?;
        return Ok(CatalogEntry { group, family: "semidirect".into(), semidirect: Some(params) });
    }
    if let Some(rest) = label.strip_prefix('E') {
        let (p, k) = rest.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        return elementary_abelian_entry(p, k, cap);
    }
    let (head, digits) = label.split_at(label.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?);
    let n: u64 = digits.parse().map_err(|_| bad())?;
    let check = |order: u64| if order > cap as u64 { Err(cap_error(label.to_string(), order, cap)) } else { Ok(()) };
    let (group, family) = match head {
        "C" => {
            check(n)?;
            (lift(label, cap, cyclic_capped(n as usize, cap))?, "cyclic")
        }
        "D" => {
            if n < 4 || n % 2 != 0 {
                return Err(bad());
            }
            check(n)?;
            (lift(label, cap, dihedral_capped(n as usize / 2, cap))?, "dihedral")
        }
        "Q" => {
            check(n)?;
            (lift(label, cap, quaternion_generalized(n as usize))?, "quaternion")
        }
        "S" => {
            check(factorial(n.min(21)))?;
            (lift(label, cap, symmetric_capped(n as usize, cap))?, "symmetric")
        }
        "A" => {
            check(factorial(n.min(21)) / 2)?;
            (lift(label, cap, alternating_capped(n as usize, cap))?, "alternating")
        }
        _ => return Err(bad()),
    };
    Ok(CatalogEntry::new(group, family))
}

fn elementary_abelian_entry(p: u64, k: u32, cap: usize) -> Result<CatalogEntry, CatalogError> {
    let label = format!("E{p}^{k}");
    let order = p.checked_pow(k).unwrap_or(u64::MAX);
    if order > cap as u64 {
        return Err(cap_error(label, order, cap));
    }
    let g = lift(&label, cap, crate::group::elementary_abelian(p as usize, k))?;
    Ok(CatalogEntry::new(g, "elementary_abelian"))
}

/// Ingestion file formats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupFile {
    Cayley { label: String, order: usize, table: Vec<Vec<usize>> },
    Permutations { label: String, degree: usize, generators: Vec<Vec<usize>> },
}

/// Parses and fully validates a group file. Cayley tables are always checked
/// for associativity.
pub fn ingest_str(text: &str, source: &str, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let file: GroupFile = serde_json::from_str(text)
        .map_err(|e| CatalogError::Parse { path: source.to_string(), message: e.to_string() })?;
    let invalid = |error| CatalogError::Invalid { source_name: source.to_string(), error };
    match file {
        GroupFile::Cayley { label, order, table } => {
            if order != table.len() {
                return Err(CatalogError::Parse {
                    path: source.to_string(),
                    message: format!("declared order {order} but table has {} rows", table.len()),
                });
            }
            if order > cap {
                return Err(cap_error(label, order as u64, cap));
            }
            FiniteGroup::from_cayley_table(&table, label).map_err(invalid)
        }
        GroupFile::Permutations { label, degree, generators } => {
            let gens = PermutationGenSet { degree, generators };
            FiniteGroup::from_permutations(&gens, label, cap).map_err(invalid)
        }
    }
}

pub fn ingest_file(path: &Path, cap: usize) -> Result<FiniteGroup, CatalogError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CatalogError::Io { path: name.clone(), message: e.to_string() })?;
    ingest_str(&text, &name, cap)
}

fn family_members(spec: &FamilySpec, cap: usize) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    match spec.family.as_str() {
        "default" => return default_entries(cap),
        "cyclic" => {
            for n in spec.range("n")? {
                out.push(parse_label(&format!("C{n}"), cap)?);
            }
        }
        "dihedral" => {
            for n in spec.range("n")? {
                out.push(parse_label(&format!("D{}", 2 * n), cap)?);
            }
        }
        "quaternion" => {
            for order in spec.range("order")? {
                if order >= 8 && order.is_power_of_two() {
                    out.push(parse_label(&format!("Q{order}"), cap)?);
                }
            }
        }
        "elementary_abelian" => {
            for p in spec.range("p")?.filter(|&p| is_prime(p)) {
                for k in spec.range("k")? {
                    out.push(elementary_abelian_entry(p, k as u32, cap)?);
                }
            }
        }
        "symmetric" => {
            for k in spec.range("k")? {
                out.push(parse_label(&format!("S{k}"), cap)?);
            }
        }
        "alternating" => {
            for k in spec.range("k")? {
                out.push(parse_label(&format!("A{k}"), cap)?);
            }
        }
        "semidirect" => {
            for m in spec.range("m")? {
                for beta in spec.range("beta")? {
                    for u in spec.range("u")? {
                        let params = InversionSemidirect { m, beta, u: u as u32 };
                        if params.validate().is_ok() {
                            out.push(parse_label(&params.label(), cap)?);
                        }
                    }
                }
            }
        }
        other => return Err(CatalogError::UnknownFamily(other.to_string())),
    }
    Ok(out)
}

/// Labels of prime-power-order groups of the default families with order at
/// most `max`: building blocks for coprime direct products.
fn prime_power_labels(max: u64) -> Vec<String> {
    let mut out = Vec::new();
    for n in 2..=max {
        if is_prime_power(n) {
            out.push(format!("C{n}"));
        }
    }
    for n in (8..=max).filter(|n| n.is_power_of_two()) {
        out.push(format!("D{n}"));
        out.push(format!("Q{n}"));
    }
    for (p, k) in elementary_abelian_params(max) {
        out.push(format!("E{p}^{k}"));
    }
    out
}

fn elementary_abelian_params(max: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in (2..=max).filter(|&p| is_prime(p)) {
        let mut k = 2;
        while p.pow(k) <= max {
            out.push((p, k));
            k += 1;
        }
    }
    out
}

fn label_order(label: &str) -> u64 {
    parse_label(label, DEFAULT_ORDER_CAP).map(|e| e.group.order() as u64).unwrap_or(u64::MAX)
}

/// Labels of the default catalog, in catalog order.
pub fn default_labels() -> Vec<String> {
    let max = DEFAULT_CATALOG_MAX_ORDER;
    let mut labels: Vec<String> = (1..=max).map(|n| format!("C{n}")).collect();
    labels.extend((2..=max / 2).map(|n| format!("D{}", 2 * n)));
    labels.extend((3..=6).map(|k| format!("Q{}", 1u64 << k)));
    labels.extend(elementary_abelian_params(max).into_iter().map(|(p, k)| format!("E{p}^{k}")));
    labels.extend(["S3", "S4", "S5", "A4", "A5"].map(String::from));
    for m in (3..=max).step_by(2) {
        for beta in (1..=max).step_by(2) {
            for u in 1..=6 {
                let params = InversionSemidirect { m, beta, u };
                if params.order() <= max && params.validate().is_ok() {
                    labels.push(params.label());
                }
            }
        }
    }
    // Coprime products with at least one non-cyclic factor; products of
    // cyclic factors are cyclic and already present.
    let blocks = prime_power_labels(max);
    let orders: Vec<u64> = blocks.iter().map(|l| label_order(l)).collect();
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            let (oa, ob) = (orders[i], orders[j]);
            if oa < ob && gcd(oa, ob) == 1 && oa * ob <= max && !(a.starts_with('C') && b.starts_with('C')) {
                labels.push(format!("{a}x{b}"));
            }
        }
    }
    labels
}

fn default_entries(cap: usize) -> Result<Vec<CatalogEntry>, CatalogError> {
    default_labels().iter().map(|l| parse_label(l, cap)).collect()
}

/// Resolves a catalog spec. Family and label errors abort; each ingested
/// file that fails is recorded and skipped.
pub fn build_catalog(spec: &CatalogSpec) -> Result<Catalog, CatalogError> {
    let cap = spec.order_cap;
    let mut catalog = Catalog { order_cap: cap, ..Default::default() };
    let mut seen = BTreeSet::new();
    let mut constructed = Vec::new();
    for family in &spec.families {
        constructed.extend(family_members(family, cap)?);
    }
    for label in &spec.labels {
        constructed.push(parse_label(label, cap)?);
    }
    for entry in constructed {
        if spec.paranoid {
            entry
                .group
                .check_associative()
                .map_err(|error| CatalogError::Invalid { source_name: entry.group.label().to_string(), error })?;
        }
        catalog.push(entry, &mut seen);
    }
    for path in &spec.ingested {
        match ingest_file(path, cap) {
            Ok(g) => catalog.push(CatalogEntry::new(g, "ingested"), &mut seen),
            Err(e) => catalog.failures.push(IngestFailure { source: path.display().to_string(), error: e.to_string() }),
        }
    }
    Ok(catalog)
}
