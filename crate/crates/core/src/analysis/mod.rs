//! Exact analysis of small instances and the closed-form bounds.
//!
//! The transition diagram has one node per connected configuration and an arc
//! per legal move. Deterministic algorithms trace configuration-disjoint
//! paths through it, so the channel capacity `mu` is a node-disjoint maxflow.

pub mod bounds;
pub mod enumerate;
pub mod flow;

pub use bounds::{bounds_report, strip_count, BoundsReport};
pub use enumerate::{enumerate_all, enumerate_initial, DEFAULT_GUARD};
pub use flow::{max_mu, FlowResult, TransitionDiagram};
