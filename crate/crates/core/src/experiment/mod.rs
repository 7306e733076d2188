//! Parameter sweeps over policies, workloads and system sizes, and their
//! reports.

mod config;
mod files;
mod report;
mod sweep;

pub use config::{
    parse_config, AmclbtConfig, ExperimentPlan, OutputConfig, OutputFormat, PlanFile, SweepConfig,
    WorkloadConfig, WorkloadRanges, DESK_DEVICE_COUNTS, DESK_TASK_COUNTS, FULL_DEVICE_COUNTS,
    FULL_TASK_COUNTS,
};
pub use files::{load_comparison_matrix, load_decision_matrix, load_weights};
pub use report::{
    plot_series, read_rows_json, write_outputs, write_rows_csv, write_rows_json, write_summary_csv,
    Axis, SeriesPoint,
};
pub use sweep::{run_sweep, CellSummary, ReportRow, SweepResult, METRIC_NAMES};
