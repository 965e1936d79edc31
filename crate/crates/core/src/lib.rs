#![forbid(unsafe_code)]

//! Exact-arithmetic lines in finite metric spaces and pseudometric
//! betweennesses.
//!
//! The crate computes the lines generated by point pairs (via the additive
//! betweenness relation), deduplicates them, replays constructive
//! lower-bound arguments as certified witness extractors, and verifies
//! Chen–Chvátal-type line-count bounds over desk-scale corpora. All
//! distance arithmetic is exact; floating point appears only in the
//! log-log scaling fit.

pub mod betweenness;
pub mod exact;
pub mod graph;
pub mod lines;
pub mod metric;
pub mod poset;
pub mod relations;
pub mod space;
pub mod verify;
pub mod witness;

pub use betweenness::BetweennessRelation;
pub use graph::Graph;
pub use lines::{Line, LineSet, PointSet};
pub use metric::{Dist, MetricSpace, PointId};
pub use space::Betweenness;
pub use witness::WitnessReport;
