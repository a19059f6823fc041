//! Order-based invariants of finite groups.
//!
//! The crate computes element-order statistics of explicit finite groups
//! (cyclic-subgroup counts, solution counts of `x^m = 1`, the weighted
//! order sums `R_{G,n}(r,s)` and their cyclic differences `T_{G,n}(r,s)`,
//! the product of element orders) with exact rational arithmetic, and
//! checks each known inequality about them together with its equality
//! condition on whole catalogs of small groups.

pub mod numtheory;
pub mod scalar;
pub mod group;
pub mod stats;
pub mod structure;
pub mod matcher;
pub mod verify;
pub mod catalog;
pub mod report;
pub mod sweep;

pub use group::{FiniteGroup, GroupError, PermutationGenSet};
pub use numtheory::{FactoredInteger, NumError};
pub use scalar::{ExactScalar, Mode, Sign};
pub use stats::{FrobeniusTable, OrderProfile, StatsError};
