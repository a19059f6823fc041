//! Fixtures shared by the benchmarks.

use orderinv_core::catalog::{build_catalog, parse_label, Catalog, CatalogSpec};
use orderinv_core::group::DEFAULT_ORDER_CAP;
use orderinv_core::FiniteGroup;

/// Groups of increasing order used across benchmarks.
pub const LABELS: [&str; 6] = ["S3", "Q16", "A4", "C3xQ8", "C9:C8", "S5"];

pub fn group(label: &str) -> FiniteGroup {
    parse_label(label, DEFAULT_ORDER_CAP).expect("fixture label").group
}

/// A small mixed catalog for end-to-end sweeps.
pub fn small_catalog() -> Catalog {
    build_catalog(&CatalogSpec::from_labels(["S3", "D8", "Q8", "A4", "C3:C4", "E2^3", "C3xE2^2", "D12"]))
        .expect("fixture catalog")
}
