//! Shared fixtures for the criterion benchmarks.

use fogbal_core::fuzzy::{DecisionMatrix, PairwiseComparisonMatrix, TriangularFuzzyNumber};
use fogbal_core::scheduler::device_criteria_weights;
use fogbal_core::sim::generate_workload;
use fogbal_core::{CriteriaWeights, TaskSpec, Topology, TopologySpec, WorkloadSpec};

pub fn reference_weights() -> CriteriaWeights {
    device_criteria_weights(&PairwiseComparisonMatrix::fog_device_criteria())
        .expect("reference matrix")
}

/// `n` devices rated on six criteria with deterministic, distinct values.
pub fn decision_matrix(n: usize) -> DecisionMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..6)
                .map(|j| {
                    let m = 1.0 + ((i * 7 + j * 13) % 29) as f64;
                    TriangularFuzzyNumber::new(m * 0.9, m, m * 1.1).expect("ordered")
                })
                .collect()
        })
        .collect();
    DecisionMatrix::new(rows).expect("rectangular")
}

pub fn instance(tasks: usize, devices: usize, seed: u64) -> (Topology, Vec<TaskSpec>) {
    let topo = TopologySpec::default()
        .generate(devices, seed)
        .expect("topology");
    let work =
        generate_workload(&WorkloadSpec::default().with_count(tasks), seed).expect("workload");
    (topo, work)
}
