//! Fog-cloud load balancing with fuzzy multi-criteria device selection.
//!
//! Criteria weights come from fuzzy AHP over pairwise judgments, devices
//! are ranked with fuzzy TOPSIS on their current availability, and each
//! task goes to the device with the best blend of rank and processing
//! speed. A deterministic event-driven simulator compares this policy
//! against round robin, weighted round robin, random and least-loaded
//! placement.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cost;
pub mod error;
pub mod experiment;
pub mod fuzzy;
pub mod scheduler;
pub mod sim;

pub use cost::{CostBreakdown, DeviceSpec, Resources, TaskSpec};
pub use error::{Error, Result};
pub use fuzzy::{
    CriteriaWeights, DecisionMatrix, Direction, PairwiseComparisonMatrix, RankingResult,
    TriangularFuzzyNumber,
};
pub use scheduler::{
    AssignmentRecord, DeviceState, Placement, PolicyKind, Scheduler, SchedulerConfig,
    SchedulerPolicy,
};
pub use sim::{MetricsReport, SimConfig, Topology, TopologySpec, WorkloadMode, WorkloadSpec};
