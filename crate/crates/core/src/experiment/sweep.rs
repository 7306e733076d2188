use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentPlan;
use crate::error::{Error, Result};
use crate::scheduler::SchedulerPolicy;
use crate::sim::{generate_workload, run_simulation, MetricsReport, WorkloadMode};

/// One simulation run, or one per-cell mean when `seed` is `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportRow {
    pub run_id: String,
    pub policy: String,
    pub workload: String,
    pub task_count: usize,
    pub device_count: usize,
    pub seed: Option<u64>,
    pub devices_used: f64,
    pub lb_variance: f64,
    pub avg_utilization: f64,
    pub avg_turnaround: f64,
    pub offload_count: f64,
    pub constraint16_violations: f64,
    pub wall_clock_ms: f64,
}

impl ReportRow {
    pub fn is_summary(&self) -> bool {
        self.seed.is_none()
    }

    /// The metric columns in report order.
    pub fn metrics(&self) -> [f64; 6] {
        [
            self.devices_used,
            self.lb_variance,
            self.avg_utilization,
            self.avg_turnaround,
            self.offload_count,
            self.constraint16_violations,
        ]
    }
}

pub const METRIC_NAMES: [&str; 6] = [
    "devicesUsed",
    "lbVariance",
    "avgUtilization",
    "avgTurnaround",
    "offloadCount",
    "constraint16Violations",
];

/// Mean and sample standard deviation of each metric over a cell's
/// replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CellSummary {
    pub policy: String,
    pub workload: String,
    pub task_count: usize,
    pub device_count: usize,
    pub replications: usize,
    pub mean: [f64; 6],
    pub std: [f64; 6],
}

impl CellSummary {
    pub fn metric(&self, name: &str) -> Option<(f64, f64)> {
        METRIC_NAMES
            .iter()
            .position(|m| *m == name)
            .map(|i| (self.mean[i], self.std[i]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Runs of each cell followed by that cell's mean row.
    pub rows: Vec<ReportRow>,
    pub summaries: Vec<CellSummary>,
}

impl SweepResult {
    pub fn runs(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| !r.is_summary())
    }

    pub fn summary(
        &self,
        policy: &str,
        workload: WorkloadMode,
        tasks: usize,
        devices: usize,
    ) -> Option<&CellSummary> {
        self.summaries.iter().find(|s| {
            s.policy == policy
                && s.workload == workload.name()
                && s.task_count == tasks
                && s.device_count == devices
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Instance {
    workload: usize,
    tasks: usize,
    devices: usize,
    replication: usize,
    seed: u64,
}

/// Seeds depend on the instance, not the policy, so every policy sees the
/// same topologies and task lists.
fn instances(plan: &ExperimentPlan) -> Vec<Instance> {
    let mut out = Vec::new();
    for w in 0..plan.workloads.len() {
        for &tasks in &plan.task_counts {
            for &devices in &plan.device_counts {
                for replication in 0..plan.replications {
                    let seed = plan.base_seed.wrapping_add(out.len() as u64);
                    out.push(Instance {
                        workload: w,
                        tasks,
                        devices,
                        replication,
                        seed,
                    });
                }
            }
        }
    }
    out
}

fn run_one(
    plan: &ExperimentPlan,
    policy: &SchedulerPolicy,
    inst: &Instance,
) -> Result<(MetricsReport, f64)> {
    let start = Instant::now();
    let topology = plan.topology.generate(inst.devices, inst.seed)?;
    let spec = plan.workloads[inst.workload].with_count(inst.tasks);
    let tasks = generate_workload(&spec, inst.seed)?;
    let outcome = run_simulation(
        &topology,
        &tasks,
        policy,
        &plan.weights,
        inst.seed,
        &plan.sim,
    )?;
    let ms = if plan.record_wall_clock {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    Ok((outcome.report, ms))
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs every (workload, policy, task count, device count, replication)
/// combination. Runs execute in parallel but the output order is fixed.
pub fn run_sweep(plan: &ExperimentPlan) -> Result<SweepResult> {
    let insts = instances(plan);
    let jobs: Vec<(usize, &SchedulerPolicy, &Instance)> = (0..plan.workloads.len())
        .flat_map(|w| {
            let insts = &insts;
            plan.policies
                .iter()
                .enumerate()
                .flat_map(move |(p, policy)| {
                    insts
                        .iter()
                        .filter(move |i| i.workload == w)
                        .map(move |i| (p, policy, i))
                })
        })
        .collect();

    let results: Vec<(MetricsReport, f64)> = jobs
        .par_iter()
        .map(|(_, policy, inst)| {
            run_one(plan, policy, inst).map_err(|e| Error::Cell {
                cell: format!(
                    "{} {} tasks={} devices={} seed={}",
                    plan.workloads[inst.workload].mode,
                    policy.kind().name(),
                    inst.tasks,
                    inst.devices,
                    inst.seed
                ),
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(jobs.len() + jobs.len() / plan.replications);
    let mut summaries = Vec::new();
    for (chunk_jobs, chunk_results) in jobs
        .chunks(plan.replications)
        .zip(results.chunks(plan.replications))
    {
        let (_, policy, first) = chunk_jobs[0];
        let policy_name = policy.kind().name().to_string();
        let workload = plan.workloads[first.workload].mode.name().to_string();
        let cell_id = format!(
            "{workload}-{policy_name}-t{}-d{}",
            first.tasks, first.devices
        );
        let mut per_metric: [Vec<f64>; 6] = Default::default();
        let mut clocks = Vec::with_capacity(plan.replications);
        for ((_, _, inst), (report, ms)) in chunk_jobs.iter().zip(chunk_results) {
            let row = ReportRow {
                run_id: format!("{cell_id}-r{}", inst.replication),
                policy: policy_name.clone(),
                workload: workload.clone(),
                task_count: inst.tasks,
                device_count: inst.devices,
                seed: Some(inst.seed),
                devices_used: report.devices_used,
                lb_variance: report.lb_variance,
                avg_utilization: report.avg_utilization,
                avg_turnaround: report.avg_turnaround,
                offload_count: report.offload_count as f64,
                constraint16_violations: report.constraint16_violations as f64,
                wall_clock_ms: *ms,
            };
            for (acc, v) in per_metric.iter_mut().zip(row.metrics()) {
                acc.push(v);
            }
            clocks.push(*ms);
            rows.push(row);
        }
        let stats: Vec<(f64, f64)> = per_metric.iter().map(|v| mean_std(v)).collect();
        let mean: [f64; 6] = std::array::from_fn(|i| stats[i].0);
        let std: [f64; 6] = std::array::from_fn(|i| stats[i].1);
        rows.push(ReportRow {
            run_id: format!("{cell_id}-mean"),
            policy: policy_name.clone(),
            workload: workload.clone(),
            task_count: first.tasks,
            device_count: first.devices,
            seed: None,
            devices_used: mean[0],
            lb_variance: mean[1],
            avg_utilization: mean[2],
            avg_turnaround: mean[3],
            offload_count: mean[4],
            constraint16_violations: mean[5],
            wall_clock_ms: mean_std(&clocks).0,
        });
        summaries.push(CellSummary {
            policy: policy_name,
            workload,
            task_count: first.tasks,
            device_count: first.devices,
            replications: plan.replications,
            mean,
            std,
        });
    }
    Ok(SweepResult { rows, summaries })
}
