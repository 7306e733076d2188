use serde::{Deserialize, Serialize};

use crate::cost::{total_utilization, utilization_ratio};
use crate::error::{Error, Result};
use crate::scheduler::{AssignmentRecord, DeviceState};

/// Which time window a device's utilization ratios are measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AvailableTime {
    /// The run's makespan (latest finish time).
    #[default]
    Horizon,
    /// Each device's configured `available_time`.
    Device,
}

/// Outcome metrics of one simulation run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsReport {
    /// Fog devices that ran at least one task.
    pub devices_used: f64,
    /// Population variance of the per-device load factors accumulated over
    /// the run.
    pub lb_variance: f64,
    /// Same variance with load factors divided by 5, i.e. on a 0..=100 scale
    /// per device.
    pub lb_variance_normalized: f64,
    pub avg_utilization: f64,
    pub avg_turnaround: f64,
    pub offload_count: usize,
    /// Devices left without any task.
    pub constraint16_violations: usize,
    pub horizon: f64,
}

/// Population variance.
pub fn lb_variance(load_factors: &[f64]) -> Result<f64> {
    if load_factors.is_empty() {
        return Err(Error::EmptyLoadSet);
    }
    let n = load_factors.len() as f64;
    let mean = load_factors.iter().sum::<f64>() / n;
    Ok(load_factors
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / n)
}

pub fn collect_metrics(
    records: &[AssignmentRecord],
    devices: &[DeviceState],
    horizon: f64,
    available: AvailableTime,
) -> Result<MetricsReport> {
    let loads: Vec<f64> = devices.iter().map(DeviceState::cumulative_load).collect();
    let (lb_var, lb_norm) = if loads.is_empty() {
        (0.0, 0.0)
    } else {
        let scaled: Vec<f64> = loads.iter().map(|l| l / 5.0).collect();
        (lb_variance(&loads)?, lb_variance(&scaled)?)
    };

    let mut used = 0usize;
    let mut utilization = Vec::with_capacity(devices.len());
    for dev in devices {
        if !dev.assigned().is_empty() {
            used += 1;
        }
        let window = match available {
            AvailableTime::Horizon => horizon,
            AvailableTime::Device => dev.spec.available_time,
        };
        let ratios = if dev.assigned().is_empty() {
            Vec::new()
        } else {
            dev.assigned()
                .iter()
                .map(|s| utilization_ratio(s.proc_time, window).map(|r| r.min(1.0)))
                .collect::<Result<Vec<_>>>()?
        };
        utilization.push(total_utilization(&ratios));
    }

    let avg_utilization = if utilization.is_empty() {
        0.0
    } else {
        utilization.iter().sum::<f64>() / utilization.len() as f64
    };
    let avg_turnaround = if records.is_empty() {
        0.0
    } else {
        records
            .iter()
            .map(|r| r.finish_time - r.assign_time)
            .sum::<f64>()
            / records.len() as f64
    };

    Ok(MetricsReport {
        devices_used: used as f64,
        lb_variance: lb_var,
        lb_variance_normalized: lb_norm,
        avg_utilization,
        avg_turnaround,
        offload_count: records.iter().filter(|r| r.offloaded).count(),
        constraint16_violations: utilization.iter().filter(|u| **u == 0.0).count(),
        horizon,
    })
}
