//! Scalar cost formulas: processing and response time, utilization,
//! energy, allocation ratio, load factor, normalized execution cost and the
//! device weight used to pick a target.

use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Five resource dimensions: processing (MIPS), cache (MB), memory (MB),
/// bandwidth (Mbps) and storage (MB), in that order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Resources(pub [f64; 5]);

impl Resources {
    pub const NAMES: [&'static str; 5] = ["processing", "cache", "memory", "bandwidth", "storage"];

    pub const fn new(
        processing: f64,
        cache: f64,
        memory: f64,
        bandwidth: f64,
        storage: f64,
    ) -> Self {
        Self([processing, cache, memory, bandwidth, storage])
    }

    pub const fn splat(v: f64) -> Self {
        Self([v; 5])
    }

    /// Component-wise `self >= other`.
    pub fn covers(&self, other: &Resources) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn min(&self, other: &Resources) -> Resources {
        Resources(std::array::from_fn(|i| self.0[i].min(other.0[i])))
    }

    pub fn max(&self, other: &Resources) -> Resources {
        Resources(std::array::from_fn(|i| self.0[i].max(other.0[i])))
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }
}

impl Index<usize> for Resources {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Resources {
    type Output = Resources;

    fn add(self, rhs: Resources) -> Resources {
        Resources(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Resources {
    type Output = Resources;

    fn sub(self, rhs: Resources) -> Resources {
        Resources(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskSpec {
    pub id: usize,
    /// Megabytes of input data.
    pub data_size: f64,
    /// Million instructions.
    pub instruction_length: f64,
    pub demand: Resources,
    /// Relative deadline on the response time, seconds.
    pub deadline: f64,
    /// Submission time, seconds.
    pub arrival: f64,
}

impl TaskSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| {
            Err(Error::InvalidTask {
                id: self.id,
                reason: reason.to_string(),
            })
        };
        if !(self.data_size >= 0.0) || !self.data_size.is_finite() {
            return bad("data size must be >= 0");
        }
        if !(self.instruction_length > 0.0) || !self.instruction_length.is_finite() {
            return bad("instruction length must be > 0");
        }
        if !(self.deadline > 0.0) {
            return bad("deadline must be > 0");
        }
        if !(self.arrival >= 0.0) || !self.arrival.is_finite() {
            return bad("arrival must be >= 0");
        }
        if self.demand.iter().any(|d| !(d >= 0.0) || !d.is_finite()) {
            return bad("demands must be >= 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeviceSpec {
    pub id: usize,
    pub node_id: usize,
    pub capacity: Resources,
    /// Joules.
    pub energy_budget: f64,
    /// MB/s.
    pub data_speed: f64,
    pub mips: f64,
    /// GHz.
    pub cpu_frequency: f64,
    /// Joules per GHz^3.
    pub energy_beta: f64,
    /// Length of the scheduling window, seconds.
    pub available_time: f64,
}

impl DeviceSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::InvalidDevice {
                id: self.id,
                reason,
            })
        };
        for (name, v) in Resources::NAMES.iter().zip(self.capacity.iter()) {
            if !(v > 0.0) {
                return bad(format!("{name} capacity must be > 0, got {v}"));
            }
        }
        for (name, v) in [
            ("data speed", self.data_speed),
            ("mips", self.mips),
            ("cpu frequency", self.cpu_frequency),
            ("energy beta", self.energy_beta),
            ("available time", self.available_time),
        ] {
            if !(v > 0.0) {
                return bad(format!("{name} must be > 0, got {v}"));
            }
        }
        if !(self.energy_budget >= 0.0) {
            return bad(format!(
                "energy budget must be >= 0, got {}",
                self.energy_budget
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CostBreakdown {
    pub data_time: f64,
    pub instr_time: f64,
    pub proc_time: f64,
    pub deploy_time: f64,
    pub response_time: f64,
    pub energy: f64,
    pub exec_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessingTime {
    pub data_time: f64,
    pub instr_time: f64,
    pub proc_time: f64,
}

pub fn processing_time(task: &TaskSpec, dev: &DeviceSpec) -> Result<ProcessingTime> {
    if !(dev.data_speed > 0.0) {
        return Err(Error::NonPositive {
            name: "data speed",
            value: dev.data_speed,
        });
    }
    if !(dev.mips > 0.0) {
        return Err(Error::NonPositive {
            name: "mips",
            value: dev.mips,
        });
    }
    let data_time = task.data_size / dev.data_speed;
    let instr_time = task.instruction_length / dev.mips;
    Ok(ProcessingTime {
        data_time,
        instr_time,
        proc_time: data_time + instr_time,
    })
}

pub fn response_time(proc_time: f64, deploy_time: f64) -> f64 {
    proc_time + deploy_time
}

/// Share of the device's available time spent on one task.
pub fn utilization_ratio(proc_time: f64, available_time: f64) -> Result<f64> {
    if !(available_time > 0.0) {
        return Err(Error::NonPositive {
            name: "available time",
            value: available_time,
        });
    }
    Ok(proc_time / available_time)
}

/// Mean of per-task utilization ratios; 0 for an unused device.
pub fn total_utilization(ratios: &[f64]) -> f64 {
    if ratios.is_empty() {
        0.0
    } else {
        ratios.iter().sum::<f64>() / ratios.len() as f64
    }
}

/// CPU power draw `beta * f^3`.
pub fn energy_cost(dev: &DeviceSpec) -> f64 {
    dev.energy_beta * dev.cpu_frequency.powi(3)
}

/// Sum of the five demand/capacity ratios of a task on a device.
pub fn allocation_ratio(task: &TaskSpec, dev: &DeviceSpec) -> Result<f64> {
    allocation_ratio_of(&task.demand, &dev.capacity)
}

pub fn allocation_ratio_of(demand: &Resources, capacity: &Resources) -> Result<f64> {
    let mut total = 0.0;
    for (i, (d, c)) in demand.iter().zip(capacity.iter()).enumerate() {
        if !(c > 0.0) {
            return Err(Error::NonPositive {
                name: Resources::NAMES[i],
                value: c,
            });
        }
        total += d / c;
    }
    Ok(total)
}

/// `100 * sum` of the allocation ratios of the tasks on a device. Not
/// capped: five fully used resources read as 500.
pub fn load_factor(assigned_ratios: &[f64]) -> f64 {
    assigned_ratios.iter().sum::<f64>() * 100.0
}

pub fn execution_cost(rt: f64, max_rt: f64, ec: f64, max_ec: f64) -> Result<f64> {
    if !(max_rt > 0.0) {
        return Err(Error::NonPositive {
            name: "maximum response time",
            value: max_rt,
        });
    }
    if !(max_ec > 0.0) {
        return Err(Error::NonPositive {
            name: "maximum energy",
            value: max_ec,
        });
    }
    Ok(rt / max_rt + ec / max_ec)
}

pub const WEIGHT_PAIR_TOLERANCE: f64 = 1e-9;

pub fn check_weight_pair(wq: f64, we: f64) -> Result<()> {
    if !(wq >= 0.0) || !(we >= 0.0) || (wq + we - 1.0).abs() > WEIGHT_PAIR_TOLERANCE {
        return Err(Error::WeightPair { wq, we });
    }
    Ok(())
}

/// `rank * wq + (1 / proc_time) * we`.
pub fn device_weight(rank: f64, proc_time: f64, wq: f64, we: f64) -> Result<f64> {
    if !(proc_time > 0.0) {
        return Err(Error::NonPositive {
            name: "processing time",
            value: proc_time,
        });
    }
    check_weight_pair(wq, we)?;
    Ok(rank * wq + we / proc_time)
}
