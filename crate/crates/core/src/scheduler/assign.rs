use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::policy::SchedulerPolicy;
use super::state::{AssignmentRecord, DeviceState, Placement};
use crate::cost::{
    allocation_ratio_of, check_weight_pair, device_weight, energy_cost, execution_cost,
    processing_time, DeviceSpec, TaskSpec,
};
use crate::error::{Error, Result};
use crate::fuzzy::{ftopsis_rank, CriteriaWeights, DecisionMatrix, Direction};

/// Number of device criteria ranked by the multi-criteria policy: five
/// resources plus energy.
pub const DEVICE_CRITERIA: usize = 6;

/// Directions of the six device criteria: available resources are
/// benefits, energy consumption is a cost.
pub const DEVICE_DIRECTIONS: [Direction; DEVICE_CRITERIA] = [
    Direction::Benefit,
    Direction::Benefit,
    Direction::Benefit,
    Direction::Benefit,
    Direction::Benefit,
    Direction::Cost,
];

/// Timing constants of the placement pipeline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchedulerConfig {
    /// Seconds to ship instructions and data to a fog device.
    pub uplink_latency: f64,
    /// Seconds of fog-server work per candidate device evaluated.
    pub overhead_per_candidate: f64,
    /// Extra seconds added to the deployment time of cloud-offloaded tasks.
    pub wan_penalty: f64,
    /// Min-max normalize `1 / proc_time` over the candidates before
    /// combining it with the rank.
    pub normalize_inverse_proc_time: bool,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            uplink_latency: 0.05,
            overhead_per_candidate: 0.001,
            wan_penalty: 0.5,
            normalize_inverse_proc_time: false,
        }
    }
}

impl SchedulerConfig {
    /// Deployment time on a fog device when `candidates` devices are evaluated.
    pub fn deploy_time(&self, candidates: usize) -> f64 {
        self.uplink_latency + self.overhead_per_candidate * candidates as f64
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("uplink_latency", self.uplink_latency),
            ("overhead_per_candidate", self.overhead_per_candidate),
            ("wan_penalty", self.wan_penalty),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::config(key, v, "must be a finite value >= 0"));
            }
        }
        Ok(())
    }
}

/// Predicted placement of a task on one candidate device.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    index: usize,
    queue: f64,
    deploy: f64,
    proc_time: f64,
    energy: f64,
}

impl Candidate {
    fn response_time(&self) -> f64 {
        self.queue + self.deploy + self.proc_time
    }
}

fn evaluate(
    task: &TaskSpec,
    devices: &[DeviceState],
    index: usize,
    now: f64,
    cfg: &SchedulerConfig,
) -> Result<Candidate> {
    let dev = &devices[index];
    let proc_time = processing_time(task, &dev.spec)?.proc_time;
    Ok(Candidate {
        index,
        queue: dev.queue_delay(now),
        deploy: cfg.deploy_time(devices.len()),
        proc_time,
        energy: energy_cost(&dev.spec) * proc_time,
    })
}

/// Positions (in `devices`, which is ordered by id) of the devices whose
/// remaining capacity covers the task and whose predicted response time,
/// queueing included, meets the deadline.
pub fn feasible_set(
    task: &TaskSpec,
    devices: &[DeviceState],
    now: f64,
    cfg: &SchedulerConfig,
) -> Vec<usize> {
    candidates(task, devices, now, cfg)
        .map(|cs| cs.into_iter().map(|c| c.index).collect())
        .unwrap_or_default()
}

fn candidates(
    task: &TaskSpec,
    devices: &[DeviceState],
    now: f64,
    cfg: &SchedulerConfig,
) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    for (i, dev) in devices.iter().enumerate() {
        if !dev.remaining().covers(&task.demand) {
            continue;
        }
        let c = evaluate(task, devices, i, now, cfg)?;
        if c.response_time() <= task.deadline {
            out.push(c);
        }
    }
    Ok(out)
}

/// Places `task` on the chosen candidate and returns the record.
fn commit(
    task: &TaskSpec,
    devices: &mut [DeviceState],
    chosen: &Candidate,
    all: &[Candidate],
    now: f64,
) -> Result<AssignmentRecord> {
    let max_rt = all.iter().map(Candidate::response_time).fold(0.0, f64::max);
    let max_ec = all.iter().map(|c| c.energy).fold(0.0, f64::max);
    let exec_cost = execution_cost(chosen.response_time(), max_rt, chosen.energy, max_ec)?;

    let dev = &mut devices[chosen.index];
    let alpha = allocation_ratio_of(&task.demand, &dev.spec.capacity)?;
    let start = now + chosen.queue + chosen.deploy;
    let finish = start + chosen.proc_time;
    dev.allocate(
        task.id,
        task.demand,
        alpha,
        chosen.proc_time,
        chosen.energy,
        finish,
    );
    Ok(AssignmentRecord {
        task_id: task.id,
        device: Placement::Fog(dev.id()),
        assign_time: now,
        start_time: start,
        finish_time: finish,
        response_time: finish - now,
        proc_time: chosen.proc_time,
        energy: chosen.energy,
        exec_cost,
        offloaded: false,
    })
}

/// Sends a task to the cloud sink. `candidates` is the number of fog devices
/// the fog server evaluated before giving up; fog state is untouched.
pub fn cloud_offload(
    task: &TaskSpec,
    cloud: &DeviceSpec,
    now: f64,
    candidates: usize,
    cfg: &SchedulerConfig,
) -> Result<AssignmentRecord> {
    let proc_time = processing_time(task, cloud)?.proc_time;
    let deploy = cfg.deploy_time(candidates) + cfg.wan_penalty;
    let energy = energy_cost(cloud) * proc_time;
    let response = proc_time + deploy;
    Ok(AssignmentRecord {
        task_id: task.id,
        device: Placement::Cloud,
        assign_time: now,
        start_time: now + deploy,
        finish_time: now + response,
        response_time: response,
        proc_time,
        energy,
        // Normalized against itself as the only candidate.
        exec_cost: execution_cost(response, response, energy, energy)?,
        offloaded: true,
    })
}

/// Builds the device decision matrix for the feasible candidates: remaining
/// processing, cache, memory, bandwidth and storage, then the energy the
/// device will have consumed after running the task.
fn device_matrix(devices: &[DeviceState], cands: &[Candidate]) -> Result<DecisionMatrix> {
    let mut rows: Vec<Vec<f64>> = cands
        .iter()
        .map(|c| {
            let dev = &devices[c.index];
            let mut row: Vec<f64> = dev.remaining().iter().collect();
            row.push(dev.energy_used() + c.energy);
            row
        })
        .collect();
    // A resource exhausted everywhere carries no information; rank on the rest.
    for j in 0..DEVICE_CRITERIA - 1 {
        if rows.iter().all(|r| r[j] <= 0.0) {
            rows.iter_mut().for_each(|r| r[j] = 1.0);
        }
    }
    DecisionMatrix::from_crisp(&rows)
}

/// One placement decision of the fuzzy multi-criteria policy.
///
/// Ranks feasible devices by closeness on their current availability,
/// combines the rank with the task's inverse processing time and picks the
/// highest weight (lowest id on ties). Falls back to the cloud when nothing
/// is feasible.
#[allow(clippy::too_many_arguments)]
pub fn amclbt_assign(
    task: &TaskSpec,
    devices: &mut [DeviceState],
    weights: &CriteriaWeights,
    wq: f64,
    we: f64,
    now: f64,
    cloud: &DeviceSpec,
    cfg: &SchedulerConfig,
) -> Result<AssignmentRecord> {
    check_weight_pair(wq, we)?;
    if weights.len() != DEVICE_CRITERIA {
        return Err(Error::DimensionMismatch {
            expected: DEVICE_CRITERIA,
            actual: weights.len(),
        });
    }
    let cands = candidates(task, devices, now, cfg)?;
    if cands.is_empty() {
        return cloud_offload(task, cloud, now, devices.len(), cfg);
    }

    let ranking = ftopsis_rank(&device_matrix(devices, &cands)?, weights)?;

    let speed: Vec<f64> = cands.iter().map(|c| 1.0 / c.proc_time).collect();
    let mut best = 0;
    let mut best_weight = f64::NEG_INFINITY;
    if cfg.normalize_inverse_proc_time {
        let lo = speed.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = speed.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (k, s) in speed.iter().enumerate() {
            let norm = if hi > lo { (s - lo) / (hi - lo) } else { 1.0 };
            let w = ranking.closeness[k] * wq + norm * we;
            if w > best_weight {
                best = k;
                best_weight = w;
            }
        }
    } else {
        for (k, c) in cands.iter().enumerate() {
            let w = device_weight(ranking.closeness[k], c.proc_time, wq, we)?;
            if w > best_weight {
                best = k;
                best_weight = w;
            }
        }
    }
    let chosen = cands[best];
    commit(task, devices, &chosen, &cands, now)
}

/// Rotation state of the classical baselines.
#[derive(Debug, Clone)]
pub struct BaselineState {
    cursor: usize,
    wrr_current: Vec<f64>,
    rng: ChaCha8Rng,
}

impl BaselineState {
    pub fn new(device_count: usize, seed: u64) -> Self {
        Self {
            cursor: 0,
            wrr_current: vec![0.0; device_count],
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

/// One placement decision of a classical baseline policy.
pub fn baseline_assign(
    policy: &SchedulerPolicy,
    task: &TaskSpec,
    devices: &mut [DeviceState],
    now: f64,
    state: &mut BaselineState,
    cloud: &DeviceSpec,
    cfg: &SchedulerConfig,
) -> Result<AssignmentRecord> {
    let cands = candidates(task, devices, now, cfg)?;
    if cands.is_empty() {
        return cloud_offload(task, cloud, now, devices.len(), cfg);
    }
    let pick = match policy {
        SchedulerPolicy::RoundRobin => {
            let k = cands
                .iter()
                .position(|c| c.index >= state.cursor)
                .unwrap_or(0);
            state.cursor = (cands[k].index + 1) % devices.len();
            k
        }
        SchedulerPolicy::WeightedRoundRobin { weights } => {
            let weight_of = |i: usize| match weights {
                Some(w) => w.get(i).copied().unwrap_or(1.0),
                None => devices[i].spec.mips,
            };
            if state.wrr_current.len() != devices.len() {
                state.wrr_current = vec![0.0; devices.len()];
            }
            let mut total = 0.0;
            let mut k_best = 0;
            for (k, c) in cands.iter().enumerate() {
                let w = weight_of(c.index);
                total += w;
                state.wrr_current[c.index] += w;
                if state.wrr_current[c.index] > state.wrr_current[cands[k_best].index] {
                    k_best = k;
                }
            }
            state.wrr_current[cands[k_best].index] -= total;
            k_best
        }
        SchedulerPolicy::Random => state.rng.random_range(0..cands.len()),
        SchedulerPolicy::LeastLoaded => {
            let mut k_best = 0;
            for (k, c) in cands.iter().enumerate() {
                if devices[c.index].load_factor() < devices[cands[k_best].index].load_factor() {
                    k_best = k;
                }
            }
            k_best
        }
        SchedulerPolicy::Amclbt { .. } => {
            return Err(Error::config("policy", "amclbt", "not a baseline policy"));
        }
    };
    let chosen = cands[pick];
    commit(task, devices, &chosen, &cands, now)
}

/// A fog server's scheduling state: its devices, the policy and the
/// policy's rotation state. Drive one instance from a single thread.
#[derive(Debug, Clone)]
pub struct Scheduler {
    devices: Vec<DeviceState>,
    cloud: DeviceSpec,
    policy: SchedulerPolicy,
    weights: CriteriaWeights,
    config: SchedulerConfig,
    baseline: BaselineState,
}

impl Scheduler {
    /// `devices` must be sorted by id. `weights` must carry the six device
    /// criteria.
    pub fn new(
        devices: Vec<DeviceSpec>,
        cloud: DeviceSpec,
        policy: SchedulerPolicy,
        weights: CriteriaWeights,
        config: SchedulerConfig,
        seed: u64,
    ) -> Result<Self> {
        policy.validate()?;
        config.validate()?;
        if weights.len() != DEVICE_CRITERIA {
            return Err(Error::DimensionMismatch {
                expected: DEVICE_CRITERIA,
                actual: weights.len(),
            });
        }
        for d in &devices {
            d.validate()?;
        }
        cloud.validate()?;
        if devices.windows(2).any(|w| w[0].id >= w[1].id) {
            return Err(Error::InvalidTopology(
                "devices must be sorted by strictly increasing id".into(),
            ));
        }
        let n = devices.len();
        Ok(Self {
            devices: devices.into_iter().map(DeviceState::new).collect(),
            cloud,
            policy,
            weights,
            config,
            baseline: BaselineState::new(n, seed),
        })
    }

    pub fn devices(&self) -> &[DeviceState] {
        &self.devices
    }

    pub fn into_devices(self) -> Vec<DeviceState> {
        self.devices
    }

    pub fn policy(&self) -> &SchedulerPolicy {
        &self.policy
    }

    pub fn feasible_set(&self, task: &TaskSpec, now: f64) -> Vec<usize> {
        feasible_set(task, &self.devices, now, &self.config)
    }

    pub fn assign(&mut self, task: &TaskSpec, now: f64) -> Result<AssignmentRecord> {
        task.validate()?;
        match &self.policy {
            SchedulerPolicy::Amclbt { wq, we } => amclbt_assign(
                task,
                &mut self.devices,
                &self.weights,
                *wq,
                *we,
                now,
                &self.cloud,
                &self.config,
            ),
            other => baseline_assign(
                other,
                task,
                &mut self.devices,
                now,
                &mut self.baseline,
                &self.cloud,
                &self.config,
            ),
        }
    }

    /// Frees the resources of a completed task on the device with `device_id`.
    pub fn release(&mut self, device_id: usize, task_id: usize) -> bool {
        self.devices
            .iter_mut()
            .find(|d| d.id() == device_id)
            .is_some_and(|d| d.release(task_id))
    }
}
