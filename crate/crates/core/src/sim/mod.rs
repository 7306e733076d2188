//! Workload and topology generation, the event-driven run loop and the
//! per-run metrics.

mod engine;
mod metrics;
mod range;
mod topology;
mod workload;

pub use engine::{run_simulation, run_simulation_observed, SimConfig, SimEvent, SimOutcome};
pub use metrics::{collect_metrics, lb_variance, AvailableTime, MetricsReport};
pub use range::{ResourceRanges, UniformRange};
pub use topology::{CloudSpec, DeviceRanges, FogNode, Topology, TopologySpec};
pub use workload::{generate_workload, WorkloadMode, WorkloadSpec};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{processing_time, DeviceSpec, Resources, TaskSpec};
    use crate::fuzzy::PairwiseComparisonMatrix;
    use crate::scheduler::{device_criteria_weights, Placement, SchedulerPolicy};

    fn weights() -> crate::fuzzy::CriteriaWeights {
        device_criteria_weights(&PairwiseComparisonMatrix::fog_device_criteria()).unwrap()
    }

    #[test]
    fn empty_workload() {
        let topo = TopologySpec::default().generate(5, 1).unwrap();
        let out = run_simulation(
            &topo,
            &[],
            &SchedulerPolicy::amclbt(0.5, 0.5).unwrap(),
            &weights(),
            1,
            &SimConfig::default(),
        )
        .unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.report.devices_used, 0.0);
        assert_eq!(out.report.lb_variance, 0.0);
        assert_eq!(out.report.avg_utilization, 0.0);
        assert_eq!(out.report.avg_turnaround, 0.0);
        assert_eq!(out.report.offload_count, 0);
    }

    #[test]
    fn single_task_turnaround_is_response_time() {
        let dev = DeviceSpec {
            id: 0,
            node_id: 0,
            capacity: Resources::splat(1000.0),
            energy_budget: 1.0,
            data_speed: 50.0,
            mips: 500.0,
            cpu_frequency: 2.0,
            energy_beta: 0.1,
            available_time: 10.0,
        };
        let cloud = DeviceSpec {
            id: 1,
            node_id: 99,
            ..dev.clone()
        };
        let topo = Topology {
            nodes: vec![FogNode {
                id: 0,
                devices: vec![dev.clone()],
                server: 0,
            }],
            cloud,
        };
        let task = TaskSpec {
            id: 0,
            data_size: 100.0,
            instruction_length: 1000.0,
            demand: Resources::splat(10.0),
            deadline: 30.0,
            arrival: 0.0,
        };
        let cfg = SimConfig::default();
        let out = run_simulation(
            &topo,
            std::slice::from_ref(&task),
            &SchedulerPolicy::amclbt(0.5, 0.5).unwrap(),
            &weights(),
            7,
            &cfg,
        )
        .unwrap();
        // proc = 2 + 2 = 4 s; deploy = 0.05 + 0.001 * 1.
        let expected =
            processing_time(&task, &dev).unwrap().proc_time + cfg.scheduler.deploy_time(1);
        assert!((expected - 4.051).abs() < 1e-12);
        assert!((out.report.avg_turnaround - expected).abs() < 1e-12);
        assert_eq!(out.records[0].device, Placement::Fog(0));
        assert_eq!(out.report.devices_used, 1.0);
        // The only task spans the whole horizon.
        assert!((out.report.avg_utilization - 4.0 / 4.051).abs() < 1e-12);
    }

    #[test]
    fn runs_are_deterministic() {
        let topo = TopologySpec {
            nodes: 2,
            ..Default::default()
        }
        .generate(6, 3)
        .unwrap();
        let tasks = generate_workload(
            &WorkloadSpec {
                count: 120,
                arrival_rate: 5.0,
                ..Default::default()
            },
            3,
        )
        .unwrap();
        for policy in crate::scheduler::PolicyKind::ALL {
            let p = SchedulerPolicy::from(policy);
            let a =
                run_simulation(&topo, &tasks, &p, &weights(), 3, &SimConfig::default()).unwrap();
            let b =
                run_simulation(&topo, &tasks, &p, &weights(), 3, &SimConfig::default()).unwrap();
            assert_eq!(a.records, b.records);
            assert_eq!(a.report, b.report);
            assert_eq!(a.records.len(), tasks.len());
        }
    }

    #[test]
    fn completions_precede_simultaneous_arrivals() {
        // One device that fits exactly one task at a time; the second task
        // arrives exactly when the first finishes and must land on the fog.
        let dev = DeviceSpec {
            id: 0,
            node_id: 0,
            capacity: Resources::splat(10.0),
            energy_budget: 1.0,
            data_speed: 1.0,
            mips: 1.0,
            cpu_frequency: 1.0,
            energy_beta: 1.0,
            available_time: 10.0,
        };
        let topo = Topology {
            nodes: vec![FogNode {
                id: 0,
                devices: vec![dev.clone()],
                server: 0,
            }],
            cloud: DeviceSpec {
                id: 1,
                node_id: 9,
                ..dev
            },
        };
        let cfg = SimConfig {
            scheduler: crate::scheduler::SchedulerConfig {
                uplink_latency: 0.0,
                overhead_per_candidate: 0.0,
                ..Default::default()
            },
            ..Default::default()
        };
        let mk = |id, arrival| TaskSpec {
            id,
            data_size: 0.0,
            instruction_length: 2.0,
            demand: Resources::splat(10.0),
            deadline: 5.0,
            arrival,
        };
        let out = run_simulation(
            &topo,
            &[mk(0, 0.0), mk(1, 2.0)],
            &SchedulerPolicy::RoundRobin,
            &weights(),
            0,
            &cfg,
        )
        .unwrap();
        assert!(out.records.iter().all(|r| !r.offloaded));
        assert_eq!(out.records[1].start_time, 2.0);
    }
}
