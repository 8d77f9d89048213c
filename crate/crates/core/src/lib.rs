//! Correlation clustering with Pivot and Pruned Pivot.
//!
//! The crate covers the static algorithms ([`pivot`]), the trace-level
//! analysis objects used to validate them ([`analysis`]), a fully dynamic
//! engine that maintains Pruned Pivot under edge updates ([`dynamic`]), and
//! a probe-counted local query engine driven by hashed ranks ([`lca`]).

pub mod analysis;
pub mod clustering;
pub mod dynamic;
pub mod error;
pub mod graph;
pub mod lca;
pub mod pivot;
pub mod ranking;
pub mod seed;

pub use clustering::Clustering;
pub use error::{Error, Result};
pub use graph::Graph;
pub use pivot::{NodeResult, Outcome, PivotTrace};
pub use ranking::{RankKey, RankMode, Ranking};
pub use seed::Seed;
