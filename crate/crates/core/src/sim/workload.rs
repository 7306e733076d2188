use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use super::range::{ResourceRanges, UniformRange};
use crate::cost::{Resources, TaskSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WorkloadMode {
    /// Every task sits at the midpoint of every range.
    Homogeneous,
    /// Every field drawn uniformly from its range.
    Heterogeneous,
}

impl WorkloadMode {
    pub fn name(&self) -> &'static str {
        match self {
            WorkloadMode::Homogeneous => "homogeneous",
            WorkloadMode::Heterogeneous => "heterogeneous",
        }
    }
}

impl fmt::Display for WorkloadMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WorkloadMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "homogeneous" => Ok(WorkloadMode::Homogeneous),
            "heterogeneous" => Ok(WorkloadMode::Heterogeneous),
            _ => Err(Error::config(
                "workload.mode",
                s,
                "expected homogeneous or heterogeneous",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadSpec {
    pub count: usize,
    pub mode: WorkloadMode,
    /// MB.
    pub data_size: UniformRange,
    /// Million instructions.
    pub instruction_length: UniformRange,
    pub demand: ResourceRanges,
    /// Seconds.
    pub deadline: UniformRange,
    /// Poisson arrival rate in tasks per second; 0 submits the whole batch
    /// at time zero.
    pub arrival_rate: f64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        Self {
            count: 0,
            mode: WorkloadMode::Heterogeneous,
            data_size: UniformRange::new(1.0, 10.0),
            instruction_length: UniformRange::new(100.0, 1000.0),
            // Small next to device capacity, so a device hosts dozens of
            // tasks at once and offloading stays the exception.
            demand: ResourceRanges {
                processing: UniformRange::new(5.0, 50.0),
                cache: UniformRange::new(0.5, 4.0),
                memory: UniformRange::new(8.0, 64.0),
                bandwidth: UniformRange::new(0.5, 5.0),
                storage: UniformRange::new(10.0, 100.0),
            },
            deadline: UniformRange::new(20.0, 60.0),
            arrival_rate: 0.0,
        }
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<()> {
        self.data_size.validate_non_negative("workload.data_size")?;
        self.instruction_length
            .validate_positive("workload.instruction_length")?;
        self.demand.validate("workload.demand", false)?;
        self.deadline.validate_positive("workload.deadline")?;
        if !(self.arrival_rate >= 0.0) || !self.arrival_rate.is_finite() {
            return Err(Error::config(
                "workload.arrival_rate",
                self.arrival_rate,
                "must be >= 0",
            ));
        }
        Ok(())
    }

    pub fn with_count(&self, count: usize) -> Self {
        Self {
            count,
            ..self.clone()
        }
    }
}

/// Draws the task list; identical `(spec, seed)` always yields the same tasks.
pub fn generate_workload(spec: &WorkloadSpec, seed: u64) -> Result<Vec<TaskSpec>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Separate stream so arrivals do not shift task attributes.
    let mut arrivals_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let inter = if spec.arrival_rate > 0.0 {
        Some(Exp::new(spec.arrival_rate).map_err(|e| Error::InvalidWorkload(e.to_string()))?)
    } else {
        None
    };
    let mut clock = 0.0;
    let mut tasks = Vec::with_capacity(spec.count);
    for id in 0..spec.count {
        let mut draw = |r: UniformRange| match spec.mode {
            WorkloadMode::Homogeneous => r.midpoint(),
            WorkloadMode::Heterogeneous => r.sample(&mut rng),
        };
        let data_size = draw(spec.data_size);
        let instruction_length = draw(spec.instruction_length);
        let demand = Resources(spec.demand.as_array().map(&mut draw));
        let deadline = draw(spec.deadline);
        if let Some(exp) = &inter {
            clock += exp.sample(&mut arrivals_rng);
        }
        tasks.push(TaskSpec {
            id,
            data_size,
            instruction_length,
            demand,
            deadline,
            arrival: clock,
        });
    }
    Ok(tasks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_tasks_are_identical() {
        let spec = WorkloadSpec {
            count: 3,
            mode: WorkloadMode::Homogeneous,
            ..Default::default()
        };
        let tasks = generate_workload(&spec, 1).unwrap();
        assert_eq!(tasks.len(), 3);
        for t in &tasks[1..] {
            assert_eq!(TaskSpec { id: 0, ..t.clone() }, tasks[0],);
        }
        assert_eq!(tasks[0].data_size, spec.data_size.midpoint());
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = WorkloadSpec {
            count: 50,
            arrival_rate: 2.0,
            ..Default::default()
        };
        let a = generate_workload(&spec, 9).unwrap();
        assert_eq!(a, generate_workload(&spec, 9).unwrap());
        assert_ne!(a, generate_workload(&spec, 10).unwrap());
        assert!(a.windows(2).all(|w| w[0].arrival <= w[1].arrival));
        assert!(a.last().unwrap().arrival > 0.0);
        for t in &a {
            assert!(t.validate().is_ok());
            assert!(spec.deadline.min <= t.deadline && t.deadline <= spec.deadline.max);
        }
    }

    #[test]
    fn empty_and_invalid() {
        assert!(generate_workload(&WorkloadSpec::default(), 0)
            .unwrap()
            .is_empty());
        let bad = WorkloadSpec {
            deadline: UniformRange::new(10.0, 1.0),
            ..WorkloadSpec::default()
        };
        assert!(generate_workload(&bad, 0).is_err());
        let bad = WorkloadSpec {
            instruction_length: UniformRange::new(0.0, 1.0),
            ..WorkloadSpec::default()
        };
        assert!(generate_workload(&bad, 0).is_err());
    }

    #[test]
    fn batch_arrivals_at_zero() {
        let spec = WorkloadSpec {
            count: 10,
            ..Default::default()
        };
        assert!(generate_workload(&spec, 3)
            .unwrap()
            .iter()
            .all(|t| t.arrival == 0.0));
    }
}
