use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::metrics::{collect_metrics, AvailableTime, MetricsReport};
use super::topology::Topology;
use crate::cost::TaskSpec;
use crate::error::Result;
use crate::fuzzy::CriteriaWeights;
use crate::scheduler::{
    AssignmentRecord, DeviceState, Placement, Scheduler, SchedulerConfig, SchedulerPolicy,
};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    #[serde(flatten)]
    pub scheduler: SchedulerConfig,
    pub available_time: AvailableTime,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub report: MetricsReport,
    /// In processing order: by arrival, ties by task id.
    pub records: Vec<AssignmentRecord>,
    /// Final device states, ordered by device id.
    pub devices: Vec<DeviceState>,
}

/// What just happened, passed to observers after the state change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimEvent<'a> {
    Arrival {
        time: f64,
        record: &'a AssignmentRecord,
    },
    Completion {
        time: f64,
        device: usize,
        task_id: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Completion {
    time: f64,
    node: usize,
    device: usize,
    task_id: usize,
}

impl Eq for Completion {}

impl Ord for Completion {
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.device.cmp(&other.device))
            .then(self.task_id.cmp(&other.task_id))
    }
}

impl PartialOrd for Completion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Fog node that receives a task.
fn home_node(task: &TaskSpec, nodes: usize) -> usize {
    task.id % nodes
}

fn node_seed(seed: u64, node: usize) -> u64 {
    seed ^ (node as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn run_simulation(
    topology: &Topology,
    tasks: &[TaskSpec],
    policy: &SchedulerPolicy,
    weights: &CriteriaWeights,
    seed: u64,
    cfg: &SimConfig,
) -> Result<SimOutcome> {
    run_simulation_observed(topology, tasks, policy, weights, seed, cfg, |_, _| {})
}

/// Runs one experiment: tasks are handled in arrival order by the fog
/// server of their home node, and completions free device capacity. A
/// completion and an arrival at the same instant are processed completion
/// first. `observer` sees every event together with all fog servers' state.
#[allow(clippy::too_many_arguments)]
pub fn run_simulation_observed<F>(
    topology: &Topology,
    tasks: &[TaskSpec],
    policy: &SchedulerPolicy,
    weights: &CriteriaWeights,
    seed: u64,
    cfg: &SimConfig,
    mut observer: F,
) -> Result<SimOutcome>
where
    F: FnMut(&SimEvent<'_>, &[Scheduler]),
{
    topology.validate()?;
    for t in tasks {
        t.validate()?;
    }
    let mut servers = topology
        .nodes
        .iter()
        .enumerate()
        .map(|(i, node)| {
            Scheduler::new(
                node.devices.clone(),
                topology.cloud.clone(),
                policy.clone(),
                weights.clone(),
                cfg.scheduler.clone(),
                node_seed(seed, i),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let mut order: Vec<&TaskSpec> = tasks.iter().collect();
    order.sort_by(|a, b| a.arrival.total_cmp(&b.arrival).then(a.id.cmp(&b.id)));

    let mut pending: BinaryHeap<Reverse<Completion>> = BinaryHeap::new();
    let mut records = Vec::with_capacity(tasks.len());
    let mut next = order.into_iter().peekable();

    loop {
        let next_arrival = next.peek().map(|t| t.arrival);
        let next_completion = pending.peek().map(|Reverse(c)| c.time);
        let completion_first = match (next_completion, next_arrival) {
            (Some(c), Some(a)) => c <= a,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if completion_first {
            let Reverse(c) = pending.pop().expect("peeked");
            servers[c.node].release(c.device, c.task_id);
            observer(
                &SimEvent::Completion {
                    time: c.time,
                    device: c.device,
                    task_id: c.task_id,
                },
                &servers,
            );
        } else {
            let task = next.next().expect("peeked");
            let node = home_node(task, servers.len());
            let record = servers[node].assign(task, task.arrival)?;
            if let Placement::Fog(device) = record.device {
                pending.push(Reverse(Completion {
                    time: record.finish_time,
                    node,
                    device,
                    task_id: task.id,
                }));
            }
            observer(
                &SimEvent::Arrival {
                    time: task.arrival,
                    record: &record,
                },
                &servers,
            );
            records.push(record);
        }
    }

    let mut devices: Vec<DeviceState> = servers
        .into_iter()
        .flat_map(Scheduler::into_devices)
        .collect();
    devices.sort_by_key(DeviceState::id);
    let horizon = records.iter().map(|r| r.finish_time).fold(0.0, f64::max);
    let report = collect_metrics(&records, &devices, horizon, cfg.available_time)?;
    Ok(SimOutcome {
        report,
        records,
        devices,
    })
}
