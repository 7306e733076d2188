//! Exhaustive search over task-to-device assignments for small batch
//! instances. Serves as the exact reference for the total execution cost
//! that greedy policies are measured against.

use serde::{Deserialize, Serialize};

use super::assign::SchedulerConfig;
use crate::cost::{
    energy_cost, execution_cost, processing_time, response_time, DeviceSpec, Resources, TaskSpec,
};
use crate::error::{Error, Result};

pub const MAX_ORACLE_TASKS: usize = 8;
pub const MAX_ORACLE_DEVICES: usize = 5;

/// Handling of the "every device runs at least one task" constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UsageRule {
    /// Enforced when there are at least as many tasks as devices.
    #[default]
    Auto,
    Waived,
}

impl UsageRule {
    fn enforced(&self, tasks: usize, devices: usize) -> bool {
        matches!(self, UsageRule::Auto) && tasks >= devices
    }
}

/// Static per-pair costs of a batch instance: all tasks arrive together and
/// response time excludes queueing.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    /// `allowed[i][j]`: device `j` covers task `i` alone and meets its deadline.
    pub allowed: Vec<Vec<bool>>,
    /// Normalized execution cost of task `i` on device `j`; meaningful
    /// only where allowed.
    pub cost: Vec<Vec<f64>>,
    demands: Vec<Resources>,
    capacities: Vec<Resources>,
}

impl CostTable {
    pub fn new(tasks: &[TaskSpec], devices: &[DeviceSpec], cfg: &SchedulerConfig) -> Result<Self> {
        let deploy = cfg.deploy_time(devices.len());
        let mut allowed = Vec::with_capacity(tasks.len());
        let mut cost = Vec::with_capacity(tasks.len());
        for task in tasks {
            task.validate()?;
            let mut rt = Vec::with_capacity(devices.len());
            let mut ec = Vec::with_capacity(devices.len());
            let mut ok = Vec::with_capacity(devices.len());
            for dev in devices {
                let p = processing_time(task, dev)?.proc_time;
                let r = response_time(p, deploy);
                rt.push(r);
                ec.push(energy_cost(dev) * p);
                ok.push(dev.capacity.covers(&task.demand) && r <= task.deadline);
            }
            let max_rt = rt
                .iter()
                .zip(&ok)
                .filter(|(_, o)| **o)
                .map(|(r, _)| *r)
                .fold(0.0, f64::max);
            let max_ec = ec
                .iter()
                .zip(&ok)
                .filter(|(_, o)| **o)
                .map(|(e, _)| *e)
                .fold(0.0, f64::max);
            let row = (0..devices.len())
                .map(|j| {
                    if ok[j] {
                        execution_cost(rt[j], max_rt, ec[j], max_ec)
                    } else {
                        Ok(f64::INFINITY)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            allowed.push(ok);
            cost.push(row);
        }
        Ok(Self {
            allowed,
            cost,
            demands: tasks.iter().map(|t| t.demand).collect(),
            capacities: devices.iter().map(|d| d.capacity).collect(),
        })
    }

    /// Total cost of `assignment` (device position per task), or `None` if
    /// it breaks a deadline, the joint capacity of a device, or the usage
    /// rule.
    pub fn evaluate(&self, assignment: &[usize], rule: UsageRule) -> Option<f64> {
        let devices = self.capacities.len();
        let mut used = vec![Resources::default(); devices];
        let mut total = 0.0;
        for (i, &j) in assignment.iter().enumerate() {
            if j >= devices || !self.allowed[i][j] {
                return None;
            }
            used[j] = used[j] + self.demands[i];
            total += self.cost[i][j];
        }
        if used.iter().zip(&self.capacities).any(|(u, c)| !c.covers(u)) {
            return None;
        }
        if rule.enforced(assignment.len(), devices) {
            let mut seen = vec![false; devices];
            assignment.iter().for_each(|&j| seen[j] = true);
            if seen.iter().any(|s| !s) {
                return None;
            }
        }
        Some(total)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OracleOutcome {
    Optimal { assignment: Vec<usize>, cost: f64 },
    Infeasible,
}

impl OracleOutcome {
    pub fn cost(&self) -> Option<f64> {
        match self {
            OracleOutcome::Optimal { cost, .. } => Some(*cost),
            OracleOutcome::Infeasible => None,
        }
    }
}

pub fn brute_force_assign(
    tasks: &[TaskSpec],
    devices: &[DeviceSpec],
    cfg: &SchedulerConfig,
) -> Result<OracleOutcome> {
    brute_force_assign_with(tasks, devices, cfg, UsageRule::Auto)
}

/// Minimum total execution cost over every assignment satisfying the
/// constraints; ties go to the lexicographically smallest assignment.
pub fn brute_force_assign_with(
    tasks: &[TaskSpec],
    devices: &[DeviceSpec],
    cfg: &SchedulerConfig,
    rule: UsageRule,
) -> Result<OracleOutcome> {
    if tasks.len() > MAX_ORACLE_TASKS || devices.len() > MAX_ORACLE_DEVICES {
        return Err(Error::InstanceTooLarge {
            tasks: tasks.len(),
            devices: devices.len(),
        });
    }
    if devices.is_empty() {
        return Ok(if tasks.is_empty() {
            OracleOutcome::Optimal {
                assignment: vec![],
                cost: 0.0,
            }
        } else {
            OracleOutcome::Infeasible
        });
    }
    let table = CostTable::new(tasks, devices, cfg)?;
    let k = tasks.len();
    let l = devices.len();
    let mut current = vec![0usize; k];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        if let Some(c) = table.evaluate(&current, rule) {
            // Relative slack so mathematically equal sums stay tied.
            let better = match &best {
                None => true,
                Some((_, b)) => c < b - 1e-12 * b.abs().max(1.0),
            };
            if better {
                best = Some((current.clone(), c));
            }
        }
        // Odometer increment, last position fastest: lexicographic order.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(match best {
                    Some((assignment, cost)) => OracleOutcome::Optimal { assignment, cost },
                    None => OracleOutcome::Infeasible,
                });
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < l {
                break;
            }
            current[pos] = 0;
        }
    }
}
