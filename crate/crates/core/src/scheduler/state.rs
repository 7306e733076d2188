use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cost::{DeviceSpec, Resources};

/// Where a task ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Fog(usize),
    Cloud,
}

impl Placement {
    pub fn fog_device(&self) -> Option<usize> {
        match self {
            Placement::Fog(id) => Some(*id),
            Placement::Cloud => None,
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Placement::Fog(id) => write!(f, "fd{id}"),
            Placement::Cloud => f.write_str("cloud"),
        }
    }
}

/// One realized placement decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AssignmentRecord {
    pub task_id: usize,
    pub device: Placement,
    pub assign_time: f64,
    pub start_time: f64,
    pub finish_time: f64,
    /// Queueing + deployment + processing, measured from `assign_time`.
    pub response_time: f64,
    pub proc_time: f64,
    pub energy: f64,
    pub exec_cost: f64,
    pub offloaded: bool,
}

/// A task currently holding resources on a device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiveAllocation {
    pub task_id: usize,
    pub demand: Resources,
    pub alpha: f64,
    pub finish_time: f64,
}

/// Per-task bookkeeping kept for the whole run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskShare {
    pub task_id: usize,
    pub alpha: f64,
    pub proc_time: f64,
}

/// Mutable view of a fog device maintained by its fog server.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceState {
    pub spec: DeviceSpec,
    remaining: Resources,
    live: Vec<LiveAllocation>,
    assigned: Vec<TaskShare>,
    busy_until: f64,
    load_factor: f64,
    cumulative_load: f64,
    energy_used: f64,
}

impl DeviceState {
    pub fn new(spec: DeviceSpec) -> Self {
        Self {
            remaining: spec.capacity,
            spec,
            live: Vec::new(),
            assigned: Vec::new(),
            busy_until: 0.0,
            load_factor: 0.0,
            cumulative_load: 0.0,
            energy_used: 0.0,
        }
    }

    pub fn id(&self) -> usize {
        self.spec.id
    }

    pub fn remaining(&self) -> Resources {
        self.remaining
    }

    pub fn live(&self) -> &[LiveAllocation] {
        &self.live
    }

    pub fn assigned(&self) -> &[TaskShare] {
        &self.assigned
    }

    pub fn busy_until(&self) -> f64 {
        self.busy_until
    }

    /// Load factor of the tasks currently holding resources.
    pub fn load_factor(&self) -> f64 {
        self.load_factor
    }

    /// Load factor summed over every task ever placed here.
    pub fn cumulative_load(&self) -> f64 {
        self.cumulative_load
    }

    pub fn energy_used(&self) -> f64 {
        self.energy_used
    }

    pub fn queue_delay(&self, now: f64) -> f64 {
        (self.busy_until - now).max(0.0)
    }

    pub fn recomputed_load_factor(&self) -> f64 {
        100.0 * self.live.iter().map(|a| a.alpha).sum::<f64>()
    }

    /// Largest component-wise gap between `remaining + live` and capacity.
    pub fn conservation_error(&self) -> f64 {
        let held = self
            .live
            .iter()
            .fold(Resources::default(), |acc, a| acc + a.demand);
        let total = self.remaining + held;
        total
            .iter()
            .zip(self.spec.capacity.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn allocate(
        &mut self,
        task_id: usize,
        demand: Resources,
        alpha: f64,
        proc_time: f64,
        energy: f64,
        finish_time: f64,
    ) {
        self.remaining = (self.remaining - demand).max(&Resources::default());
        self.live.push(LiveAllocation {
            task_id,
            demand,
            alpha,
            finish_time,
        });
        self.assigned.push(TaskShare {
            task_id,
            alpha,
            proc_time,
        });
        self.load_factor += 100.0 * alpha;
        self.cumulative_load += 100.0 * alpha;
        self.busy_until = self.busy_until.max(finish_time);
        self.energy_used += energy;
    }

    /// Frees the resources held by `task_id`. Returns false if the task was
    /// not live here.
    pub(crate) fn release(&mut self, task_id: usize) -> bool {
        let Some(pos) = self.live.iter().position(|a| a.task_id == task_id) else {
            return false;
        };
        let a = self.live.swap_remove(pos);
        if self.live.is_empty() {
            // Drop accumulated rounding once the device is idle.
            self.remaining = self.spec.capacity;
            self.load_factor = 0.0;
        } else {
            self.remaining = (self.remaining + a.demand).min(&self.spec.capacity);
            self.load_factor -= 100.0 * a.alpha;
        }
        true
    }
}
