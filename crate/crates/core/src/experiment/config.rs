//! TOML experiment plans. Every key has a default, so a file naming only the
//! sweep axes is a complete plan.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{consistency_ratio, PairwiseComparisonMatrix};
use crate::scheduler::{device_criteria_weights, PolicyKind, SchedulerPolicy, DEVICE_CRITERIA};
use crate::sim::{SimConfig, TopologySpec, WorkloadMode, WorkloadSpec};
use crate::CriteriaWeights;

pub const DESK_TASK_COUNTS: [usize; 3] = [100, 200, 500];
pub const DESK_DEVICE_COUNTS: [usize; 3] = [5, 10, 15];
pub const FULL_TASK_COUNTS: [usize; 5] = [1000, 2000, 3000, 4000, 5000];
pub const FULL_DEVICE_COUNTS: [usize; 5] = [5, 10, 15, 20, 25];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::config("output.format", s, "expected csv or json")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub task_counts: Vec<usize>,
    pub device_counts: Vec<usize>,
    pub replications: usize,
    pub base_seed: u64,
    /// Replace the axes with the 1000..=5000 tasks x 5..=25 devices grid.
    pub full_grid: bool,
    /// Fill the wall-clock column; off keeps reports byte-stable.
    pub record_wall_clock: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            task_counts: DESK_TASK_COUNTS.to_vec(),
            device_counts: DESK_DEVICE_COUNTS.to_vec(),
            replications: 10,
            base_seed: 42,
            full_grid: false,
            record_wall_clock: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmclbtConfig {
    pub wq: f64,
    pub we: f64,
}

impl Default for AmclbtConfig {
    fn default() -> Self {
        Self { wq: 0.5, we: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("results"),
            format: OutputFormat::Csv,
        }
    }
}

/// Workload section: the shared task ranges plus the modes to sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorkloadConfig {
    pub modes: Vec<WorkloadMode>,
    #[serde(flatten)]
    pub ranges: WorkloadRanges,
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        Self {
            modes: vec![WorkloadMode::Heterogeneous, WorkloadMode::Homogeneous],
            ranges: WorkloadRanges::default(),
        }
    }
}

/// The fields of [`WorkloadSpec`] other than count and mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorkloadRanges {
    pub data_size: crate::sim::UniformRange,
    pub instruction_length: crate::sim::UniformRange,
    pub demand: crate::sim::ResourceRanges,
    pub deadline: crate::sim::UniformRange,
    pub arrival_rate: f64,
}

impl Default for WorkloadRanges {
    fn default() -> Self {
        let w = WorkloadSpec::default();
        Self {
            data_size: w.data_size,
            instruction_length: w.instruction_length,
            demand: w.demand,
            deadline: w.deadline,
            arrival_rate: w.arrival_rate,
        }
    }
}

/// Raw file layout, before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanFile {
    pub policies: Vec<String>,
    pub comparison_matrix: Option<Vec<Vec<f64>>>,
    pub wrr_weights: Option<Vec<f64>>,
    pub sweep: SweepConfig,
    pub amclbt: AmclbtConfig,
    pub workload: WorkloadConfig,
    pub topology: TopologySpec,
    pub sim: SimConfig,
    pub output: OutputConfig,
}

impl Default for PlanFile {
    fn default() -> Self {
        Self {
            policies: PolicyKind::ALL
                .iter()
                .map(|p| p.name().to_string())
                .collect(),
            comparison_matrix: None,
            wrr_weights: None,
            sweep: SweepConfig::default(),
            amclbt: AmclbtConfig::default(),
            workload: WorkloadConfig::default(),
            topology: TopologySpec::default(),
            sim: SimConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// A validated experiment plan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentPlan {
    pub topology: TopologySpec,
    pub workloads: Vec<WorkloadSpec>,
    pub policies: Vec<SchedulerPolicy>,
    pub comparison_matrix: PairwiseComparisonMatrix,
    pub consistency_ratio: f64,
    pub weights: CriteriaWeights,
    pub task_counts: Vec<usize>,
    pub device_counts: Vec<usize>,
    pub replications: usize,
    pub base_seed: u64,
    pub record_wall_clock: bool,
    pub sim: SimConfig,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
}

impl ExperimentPlan {
    pub fn from_file(file: PlanFile) -> Result<Self> {
        if file.policies.is_empty() {
            return Err(Error::config(
                "policies",
                "[]",
                "at least one policy is required",
            ));
        }
        let mut policies = Vec::with_capacity(file.policies.len());
        for name in &file.policies {
            let kind: PolicyKind = name.parse()?;
            let policy = match kind {
                PolicyKind::Amclbt => {
                    let (wq, we) = (file.amclbt.wq, file.amclbt.we);
                    if !(wq >= 0.0 && we >= 0.0)
                        || (wq + we - 1.0).abs() > crate::cost::WEIGHT_PAIR_TOLERANCE
                    {
                        return Err(Error::config(
                            "amclbt.wq/amclbt.we",
                            format!("{wq}/{we}"),
                            "wq + we must equal 1",
                        ));
                    }
                    SchedulerPolicy::Amclbt { wq, we }
                }
                PolicyKind::WeightedRoundRobin => SchedulerPolicy::WeightedRoundRobin {
                    weights: file.wrr_weights.clone(),
                },
                other => SchedulerPolicy::from(other),
            };
            policy.validate()?;
            if policies.iter().any(|p: &SchedulerPolicy| p.kind() == kind) {
                return Err(Error::config("policies", name, "policy listed twice"));
            }
            policies.push(policy);
        }

        let comparison_matrix = match &file.comparison_matrix {
            None => PairwiseComparisonMatrix::fog_device_criteria(),
            Some(rows) => PairwiseComparisonMatrix::from_rounded(rows.clone()).map_err(|e| {
                Error::config("comparison_matrix", format!("{rows:?}"), e.to_string())
            })?,
        };
        if comparison_matrix.len() != DEVICE_CRITERIA {
            return Err(Error::config(
                "comparison_matrix",
                format!("{} criteria", comparison_matrix.len()),
                "device ranking uses exactly 6 criteria",
            ));
        }
        let weights = device_criteria_weights(&comparison_matrix)?;
        let cr = consistency_ratio(&comparison_matrix)?;

        let (task_counts, device_counts) = if file.sweep.full_grid {
            (FULL_TASK_COUNTS.to_vec(), FULL_DEVICE_COUNTS.to_vec())
        } else {
            (
                file.sweep.task_counts.clone(),
                file.sweep.device_counts.clone(),
            )
        };
        if task_counts.is_empty() {
            return Err(Error::config(
                "sweep.task_counts",
                "[]",
                "sweep axis must not be empty",
            ));
        }
        if device_counts.is_empty() {
            return Err(Error::config(
                "sweep.device_counts",
                "[]",
                "sweep axis must not be empty",
            ));
        }
        if let Some(d) = device_counts.iter().find(|&&d| d < file.topology.nodes) {
            return Err(Error::config(
                "sweep.device_counts",
                d,
                "fewer devices than fog nodes",
            ));
        }
        if file.sweep.replications == 0 {
            return Err(Error::config("sweep.replications", 0, "must be at least 1"));
        }
        if file.workload.modes.is_empty() {
            return Err(Error::config(
                "workload.modes",
                "[]",
                "at least one workload mode is required",
            ));
        }
        file.topology.validate()?;
        file.sim.scheduler.validate()?;

        let r = &file.workload.ranges;
        let workloads: Vec<WorkloadSpec> = file
            .workload
            .modes
            .iter()
            .map(|&mode| WorkloadSpec {
                count: 0,
                mode,
                data_size: r.data_size,
                instruction_length: r.instruction_length,
                demand: r.demand,
                deadline: r.deadline,
                arrival_rate: r.arrival_rate,
            })
            .collect();
        for w in &workloads {
            w.validate()?;
        }

        Ok(Self {
            topology: file.topology,
            workloads,
            policies,
            comparison_matrix,
            consistency_ratio: cr,
            weights,
            task_counts,
            device_counts,
            replications: file.sweep.replications,
            base_seed: file.sweep.base_seed,
            record_wall_clock: file.sweep.record_wall_clock,
            sim: file.sim,
            output_dir: file.output.dir,
            format: file.output.format,
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: PlanFile = toml::from_str(text).map_err(|e| {
            let key = e.span().map(|s| text[s].to_string()).unwrap_or_default();
            Error::config(key.trim(), "", e.message().to_string())
        })?;
        Self::from_file(file)
    }

    /// Keeps only the named policies, in the given order.
    pub fn restrict_policies(&mut self, names: &[String]) -> Result<()> {
        let mut kept = Vec::new();
        for name in names {
            let kind: PolicyKind = name.parse()?;
            let p = self
                .policies
                .iter()
                .find(|p| p.kind() == kind)
                .cloned()
                .unwrap_or_else(|| SchedulerPolicy::from(kind));
            kept.push(p);
        }
        if kept.is_empty() {
            return Err(Error::config(
                "policy",
                "[]",
                "at least one policy is required",
            ));
        }
        self.policies = kept;
        Ok(())
    }

    pub fn use_full_grid(&mut self) {
        self.task_counts = FULL_TASK_COUNTS.to_vec();
        self.device_counts = FULL_DEVICE_COUNTS.to_vec();
    }

    /// Human-readable dump of the resolved plan.
    pub fn dump(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes")
    }
}

/// Reads and validates a plan file.
pub fn parse_config(path: &Path) -> Result<ExperimentPlan> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::config("config", path.display(), format!("cannot read file: {e}")))?;
    ExperimentPlan::from_toml_str(&text)
}
