//! Task placement: the fuzzy multi-criteria policy, classical baselines,
//! cloud offload and an exhaustive oracle for small instances.

mod assign;
mod oracle;
mod policy;
mod state;

pub use assign::{
    amclbt_assign, baseline_assign, cloud_offload, feasible_set, BaselineState, Scheduler,
    SchedulerConfig, DEVICE_CRITERIA, DEVICE_DIRECTIONS,
};
pub use oracle::{
    brute_force_assign, brute_force_assign_with, CostTable, OracleOutcome, UsageRule,
    MAX_ORACLE_DEVICES, MAX_ORACLE_TASKS,
};
pub use policy::{PolicyKind, SchedulerPolicy};
pub use state::{AssignmentRecord, DeviceState, LiveAllocation, Placement, TaskShare};

use crate::error::Result;
use crate::fuzzy::{fahp_weights, CriteriaWeights, PairwiseComparisonMatrix};

/// Fuzzy AHP weights of the six device criteria with their directions attached.
pub fn device_criteria_weights(matrix: &PairwiseComparisonMatrix) -> Result<CriteriaWeights> {
    fahp_weights(matrix)?.with_directions(DEVICE_DIRECTIONS.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{DeviceSpec, Resources, TaskSpec};

    fn dev(id: usize, mips: f64, mem: f64) -> DeviceSpec {
        DeviceSpec {
            id,
            node_id: 0,
            capacity: Resources::new(1000.0, 256.0, mem, 100.0, 1000.0),
            energy_budget: 1e6,
            data_speed: 50.0,
            mips,
            cpu_frequency: 2.0,
            energy_beta: 0.1,
            available_time: 100.0,
        }
    }

    fn cloud() -> DeviceSpec {
        DeviceSpec {
            id: usize::MAX,
            node_id: usize::MAX,
            capacity: Resources::splat(1e12),
            energy_budget: 0.0,
            data_speed: 100.0,
            mips: 10_000.0,
            cpu_frequency: 3.0,
            energy_beta: 0.1,
            available_time: 1e9,
        }
    }

    fn task(id: usize, deadline: f64) -> TaskSpec {
        TaskSpec {
            id,
            data_size: 100.0,
            instruction_length: 1000.0,
            demand: Resources::new(100.0, 10.0, 100.0, 10.0, 10.0),
            deadline,
            arrival: 0.0,
        }
    }

    fn weights() -> CriteriaWeights {
        device_criteria_weights(&PairwiseComparisonMatrix::fog_device_criteria()).unwrap()
    }

    fn states(specs: &[DeviceSpec]) -> Vec<DeviceState> {
        specs.iter().cloned().map(DeviceState::new).collect()
    }

    #[test]
    fn feasible_examples() {
        let cfg = SchedulerConfig::default();
        let one = states(&[dev(0, 500.0, 1000.0)]);
        assert_eq!(feasible_set(&task(0, 100.0), &one, 0.0, &cfg), vec![0]);

        let mut big = task(0, 100.0);
        big.demand.0[2] = 5000.0;
        assert!(feasible_set(
            &big,
            &states(&[dev(0, 500.0, 1000.0), dev(1, 900.0, 2000.0)]),
            0.0,
            &cfg
        )
        .is_empty());

        // proc = 100/50 + 1000/mips; deploy = 0.05 + 0.002. Slow: 4.052 s, fast: 3.052 s.
        let two = states(&[dev(0, 500.0, 1000.0), dev(1, 1000.0, 1000.0)]);
        assert_eq!(feasible_set(&task(0, 3.5), &two, 0.0, &cfg), vec![1]);
        assert_eq!(feasible_set(&task(0, 4.06), &two, 0.0, &cfg), vec![0, 1]);
    }

    #[test]
    fn feasible_accounts_for_queueing() {
        let cfg = SchedulerConfig::default();
        let mut devs = states(&[dev(0, 1000.0, 1000.0)]);
        let w = weights();
        amclbt_assign(
            &task(0, 100.0),
            &mut devs,
            &w,
            0.5,
            0.5,
            0.0,
            &cloud(),
            &cfg,
        )
        .unwrap();
        // Device is busy until 3.051 s; another 3.051 s task misses a 5 s deadline.
        assert!(feasible_set(&task(1, 5.0), &devs, 0.0, &cfg).is_empty());
        assert_eq!(feasible_set(&task(1, 5.0), &devs, 3.0, &cfg), vec![0]);
    }

    #[test]
    fn amclbt_single_and_tie() {
        let cfg = SchedulerConfig::default();
        let w = weights();
        let mut one = states(&[dev(3, 500.0, 1000.0)]);
        let r =
            amclbt_assign(&task(0, 100.0), &mut one, &w, 0.5, 0.5, 0.0, &cloud(), &cfg).unwrap();
        assert_eq!(r.device, Placement::Fog(3));

        let mut twins = states(&[dev(0, 500.0, 1000.0), dev(1, 500.0, 1000.0)]);
        let r = amclbt_assign(
            &task(0, 100.0),
            &mut twins,
            &w,
            0.5,
            0.5,
            0.0,
            &cloud(),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.device, Placement::Fog(0));
        // The next identical task goes to the now less loaded twin.
        let r = amclbt_assign(
            &task(1, 100.0),
            &mut twins,
            &w,
            0.5,
            0.5,
            0.0,
            &cloud(),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.device, Placement::Fog(1));
    }

    #[test]
    fn amclbt_prefers_dominant_device() {
        let cfg = SchedulerConfig::default();
        let w = weights();
        let mut small = dev(0, 500.0, 1000.0);
        small.capacity = Resources::new(800.0, 128.0, 1000.0, 80.0, 800.0);
        let mut large = dev(1, 900.0, 4000.0);
        large.capacity = Resources::new(1600.0, 512.0, 4000.0, 200.0, 3000.0);
        // Same power draw, so the faster device also uses less energy.
        let mut devs = states(&[small, large]);
        let r = amclbt_assign(
            &task(0, 100.0),
            &mut devs,
            &w,
            0.5,
            0.5,
            0.0,
            &cloud(),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.device, Placement::Fog(1));
    }

    #[test]
    fn amclbt_updates_state() {
        let cfg = SchedulerConfig::default();
        let w = weights();
        let mut devs = states(&[dev(0, 500.0, 1000.0)]);
        let t = task(7, 100.0);
        let r = amclbt_assign(&t, &mut devs, &w, 0.5, 0.5, 1.0, &cloud(), &cfg).unwrap();
        let d = &devs[0];
        assert_eq!(d.remaining(), d.spec.capacity - t.demand);
        // alpha = 0.1 + 10/256 + 0.1 + 0.1 + 0.01
        let alpha = 0.1 + 10.0 / 256.0 + 0.1 + 0.1 + 0.01;
        assert!((d.load_factor() - 100.0 * alpha).abs() < 1e-12);
        assert_eq!(d.busy_until(), r.finish_time);
        assert!((r.proc_time - 4.0).abs() < 1e-12);
        assert!((d.energy_used() - 0.8 * 4.0).abs() < 1e-12);
        assert!((r.response_time - 4.051).abs() < 1e-12);
        assert_eq!(r.exec_cost, 2.0);
        assert!(!r.offloaded);
    }

    #[test]
    fn offload_when_nothing_fits() {
        let cfg = SchedulerConfig::default();
        let w = weights();
        let mut devs = states(&[dev(0, 500.0, 1000.0)]);
        let before = devs.clone();
        let r = amclbt_assign(&task(0, 1.0), &mut devs, &w, 0.5, 0.5, 0.0, &cloud(), &cfg).unwrap();
        assert!(r.offloaded);
        assert_eq!(r.device, Placement::Cloud);
        assert_eq!(devs, before);
        // proc = 100/100 + 1000/10000; deploy = 0.05 + 0.001 + 0.5
        assert!((r.response_time - (1.1 + 0.551)).abs() < 1e-12);

        let mut none: Vec<DeviceState> = vec![];
        let r = amclbt_assign(&task(0, 1.0), &mut none, &w, 0.5, 0.5, 0.0, &cloud(), &cfg).unwrap();
        assert!(r.offloaded);
    }

    #[test]
    fn fast_cloud_trades_processing_for_deployment() {
        let cfg = SchedulerConfig::default();
        let fog = dev(0, 1000.0, 1000.0);
        let mut c = cloud();
        c.data_speed = fog.data_speed;
        c.mips = 10.0 * fog.mips;
        let t = task(0, 100.0);
        let fog_rec =
            amclbt_assign(&t, &mut states(&[fog]), &weights(), 0.5, 0.5, 0.0, &c, &cfg).unwrap();
        let cloud_rec = cloud_offload(&t, &c, 0.0, 1, &cfg).unwrap();
        assert!(cloud_rec.proc_time < fog_rec.proc_time);
        assert!(
            cloud_rec.start_time - cloud_rec.assign_time > fog_rec.start_time - fog_rec.assign_time
        );
    }

    fn run_baseline(
        policy: SchedulerPolicy,
        devs: &mut [DeviceState],
        n: usize,
        seed: u64,
    ) -> Vec<Placement> {
        let cfg = SchedulerConfig::default();
        let mut st = BaselineState::new(devs.len(), seed);
        (0..n)
            .map(|i| {
                baseline_assign(&policy, &task(i, 1e6), devs, 0.0, &mut st, &cloud(), &cfg)
                    .unwrap()
                    .device
            })
            .collect()
    }

    #[test]
    fn round_robin_cycles() {
        let mut devs = states(&[dev(0, 500.0, 1e5), dev(1, 500.0, 1e5), dev(2, 500.0, 1e5)]);
        for d in devs.iter_mut() {
            d.spec.capacity = Resources::splat(1e6);
            *d = DeviceState::new(d.spec.clone());
        }
        let seq = run_baseline(SchedulerPolicy::RoundRobin, &mut devs, 6, 0);
        let ids: Vec<usize> = seq.iter().map(|p| p.fog_device().unwrap()).collect();
        assert_eq!(ids, vec![0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn weighted_round_robin_is_proportional() {
        let mut devs: Vec<DeviceState> = [(0, 3.0), (1, 1.0)]
            .iter()
            .map(|&(id, _)| {
                let mut d = dev(id, 500.0, 1e5);
                d.capacity = Resources::splat(1e6);
                DeviceState::new(d)
            })
            .collect();
        let seq = run_baseline(
            SchedulerPolicy::WeightedRoundRobin {
                weights: Some(vec![3.0, 1.0]),
            },
            &mut devs,
            8,
            0,
        );
        let ids: Vec<usize> = seq.iter().map(|p| p.fog_device().unwrap()).collect();
        assert_eq!(ids.iter().filter(|&&i| i == 0).count(), 6);
        assert_eq!(ids, vec![0, 0, 1, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn least_loaded_picks_argmin() {
        let cfg = SchedulerConfig::default();
        let mut devs = states(&[dev(0, 500.0, 1e5), dev(1, 500.0, 1e5), dev(2, 500.0, 1e5)]);
        // Preload to load factors 50, 10 and 30 via synthetic allocations.
        for (d, lf) in devs.iter_mut().zip([50.0, 10.0, 30.0]) {
            d.allocate(
                1000 + d.id(),
                Resources::default(),
                lf / 100.0,
                0.0,
                0.0,
                0.0,
            );
        }
        let mut st = BaselineState::new(3, 0);
        let r = baseline_assign(
            &SchedulerPolicy::LeastLoaded,
            &task(0, 1e6),
            &mut devs,
            0.0,
            &mut st,
            &cloud(),
            &cfg,
        )
        .unwrap();
        assert_eq!(r.device, Placement::Fog(1));
    }

    #[test]
    fn random_is_reproducible() {
        let mk = || {
            let mut devs: Vec<DeviceState> = (0..4)
                .map(|i| {
                    let mut d = dev(i, 500.0, 1e5);
                    d.capacity = Resources::splat(1e6);
                    DeviceState::new(d)
                })
                .collect();
            run_baseline(SchedulerPolicy::Random, &mut devs, 40, 99)
        };
        let a = mk();
        assert_eq!(a, mk());
        assert!(a.iter().collect::<std::collections::BTreeSet<_>>().len() > 1);
    }

    #[test]
    fn release_restores_capacity() {
        let cfg = SchedulerConfig::default();
        let mut s = Scheduler::new(
            vec![dev(0, 500.0, 1000.0)],
            cloud(),
            SchedulerPolicy::amclbt(0.5, 0.5).unwrap(),
            weights(),
            cfg,
            1,
        )
        .unwrap();
        s.assign(&task(0, 100.0), 0.0).unwrap();
        s.assign(&task(1, 100.0), 0.0).unwrap();
        assert!(s.release(0, 0));
        assert!(!s.release(0, 0));
        let d = &s.devices()[0];
        assert!(d.conservation_error() < 1e-9);
        assert!((d.load_factor() - d.recomputed_load_factor()).abs() < 1e-9);
        assert!(s.release(0, 1));
        assert_eq!(s.devices()[0].remaining(), s.devices()[0].spec.capacity);
        assert_eq!(s.devices()[0].assigned().len(), 2);
    }

    #[test]
    fn scheduler_rejects_bad_setup() {
        let cfg = SchedulerConfig::default();
        let bad_pair = SchedulerPolicy::Amclbt { wq: 0.7, we: 0.2 };
        assert!(Scheduler::new(
            vec![dev(0, 1.0, 1.0)],
            cloud(),
            bad_pair,
            weights(),
            cfg.clone(),
            0
        )
        .is_err());
        let unsorted = vec![dev(1, 1.0, 1.0), dev(0, 1.0, 1.0)];
        assert!(Scheduler::new(
            unsorted,
            cloud(),
            SchedulerPolicy::Random,
            weights(),
            cfg,
            0
        )
        .is_err());
    }

    #[test]
    fn oracle_small_cases() {
        let cfg = SchedulerConfig::default();
        let out = brute_force_assign(&[task(0, 100.0)], &[dev(0, 500.0, 1000.0)], &cfg).unwrap();
        assert_eq!(
            out,
            OracleOutcome::Optimal {
                assignment: vec![0],
                cost: 2.0
            }
        );

        let twins = [dev(0, 500.0, 1000.0), dev(1, 500.0, 1000.0)];
        let out = brute_force_assign(&[task(0, 100.0), task(1, 100.0)], &twins, &cfg).unwrap();
        assert_eq!(
            out,
            OracleOutcome::Optimal {
                assignment: vec![0, 1],
                cost: 4.0
            }
        );
        let waived = brute_force_assign_with(
            &[task(0, 100.0), task(1, 100.0)],
            &twins,
            &cfg,
            UsageRule::Waived,
        )
        .unwrap();
        assert_eq!(waived.cost(), Some(4.0));
        assert_eq!(
            waived,
            OracleOutcome::Optimal {
                assignment: vec![0, 0],
                cost: 4.0
            }
        );
    }

    #[test]
    fn oracle_limits_and_infeasibility() {
        let cfg = SchedulerConfig::default();
        let tasks: Vec<TaskSpec> = (0..9).map(|i| task(i, 100.0)).collect();
        assert!(matches!(
            brute_force_assign(&tasks, &[dev(0, 500.0, 1000.0)], &cfg),
            Err(crate::Error::InstanceTooLarge { .. })
        ));
        let out = brute_force_assign(&[task(0, 0.5)], &[dev(0, 500.0, 1000.0)], &cfg).unwrap();
        assert_eq!(out, OracleOutcome::Infeasible);
        // Joint memory: two tasks of 600 MB cannot share a 1000 MB device.
        let mut t0 = task(0, 100.0);
        t0.demand.0[2] = 600.0;
        let mut t1 = t0.clone();
        t1.id = 1;
        let out = brute_force_assign(&[t0, t1], &[dev(0, 500.0, 1000.0)], &cfg).unwrap();
        assert_eq!(out, OracleOutcome::Infeasible);
    }
}
