use std::fs;

use fogbal_core::experiment::{
    parse_config, read_rows_json, run_sweep, write_outputs, ExperimentPlan, OutputFormat,
};

fn small_plan() -> ExperimentPlan {
    ExperimentPlan::from_toml_str(
        r#"
        policies = ["amclbt", "round_robin", "least_loaded"]
        [sweep]
        task_counts = [20, 40]
        device_counts = [3, 4]
        replications = 2
        base_seed = 7
        "#,
    )
    .unwrap()
}

#[test]
fn shipped_config_parses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/desk.toml");
    let plan = parse_config(std::path::Path::new(path)).unwrap();
    assert_eq!(plan.policies.len(), 5);
    assert_eq!(plan.task_counts, vec![100, 200, 500]);
    assert_eq!(plan.device_counts, vec![5, 10, 15]);
    assert_eq!(plan.workloads.len(), 2);
    assert_eq!(plan.replications, 10);
    // The file spells out the built-in defaults.
    let defaults = ExperimentPlan::from_toml_str("").unwrap();
    assert_eq!(plan.dump(), defaults.dump());
}

#[test]
fn outputs_land_on_disk_and_json_round_trips() {
    let plan = small_plan();
    let result = run_sweep(&plan).unwrap();
    // 2 modes x 3 policies x 2 x 2 cells, each with 2 runs and a mean row.
    assert_eq!(result.rows.len(), 2 * 3 * 4 * 3);
    assert_eq!(result.summaries.len(), 2 * 3 * 4);

    let dir = tempfile::tempdir().unwrap();
    let files = write_outputs(&result, dir.path(), OutputFormat::Json).unwrap();
    assert_eq!(files.len(), 2 + 12);
    for f in &files {
        assert!(f.is_file(), "{}", f.display());
    }
    let back = read_rows_json(fs::File::open(dir.path().join("runs.json")).unwrap()).unwrap();
    assert_eq!(back, result.rows);

    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + result.summaries.len());
    let series =
        fs::read_to_string(dir.path().join("series/avgTurnaround_by_taskCount.csv")).unwrap();
    // workload x policy x task count points.
    assert_eq!(series.lines().count(), 1 + 2 * 3 * 2);
}

#[test]
fn csv_output_is_reproducible() {
    let plan = small_plan();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_outputs(&run_sweep(&plan).unwrap(), a.path(), OutputFormat::Csv).unwrap();
    write_outputs(&run_sweep(&plan).unwrap(), b.path(), OutputFormat::Csv).unwrap();
    for name in [
        "runs.csv",
        "summary.csv",
        "series/lbVariance_by_deviceCount.csv",
    ] {
        let x = fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(name)).unwrap(), "{name}");
        assert!(!x.contains(&b'\r'));
    }
}

#[test]
fn policy_order_does_not_change_a_policy_s_runs() {
    let plan = small_plan();
    let mut swapped = small_plan();
    swapped
        .restrict_policies(&["least_loaded".into(), "amclbt".into()])
        .unwrap();
    let a = run_sweep(&plan).unwrap();
    let b = run_sweep(&swapped).unwrap();
    let pick = |r: &fogbal_core::experiment::SweepResult| {
        r.rows
            .iter()
            .filter(|x| x.policy == "amclbt")
            .map(|x| (x.run_id.clone(), x.metrics()))
            .collect::<Vec<_>>()
    };
    assert_eq!(pick(&a), pick(&b));
}

#[test]
fn bad_configs_are_config_errors() {
    for text in [
        "policies = [\"fastest\"]",
        "[amclbt]\nwq = 0.7\nwe = 0.7",
        "[sweep]\nreplications = 0",
        "[sweep]\ntask_counts = []",
        "comparison_matrix = [[1, 2], [0.5, 1]]",
        "unknown_key = 1",
        "[output]\nformat = \"xml\"",
    ] {
        let err = ExperimentPlan::from_toml_str(text).unwrap_err();
        assert!(err.is_config_error(), "{text}: {err}");
    }
}
