use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::config::OutputFormat;
use super::sweep::{CellSummary, ReportRow, SweepResult, METRIC_NAMES};
use crate::error::{Error, Result};

const HEADER: [&str; 13] = [
    "runId",
    "policy",
    "workload",
    "taskCount",
    "deviceCount",
    "seed",
    "devicesUsed",
    "lbVariance",
    "avgUtilization",
    "avgTurnaround",
    "offloadCount",
    "constraint16Violations",
    "wallClockMs",
];

fn num(x: f64) -> String {
    // Avoid "-0.000000" so equal runs print identically.
    let s = format!("{x:.6}");
    if s.trim_start_matches('-')
        .bytes()
        .all(|b| b == b'0' || b == b'.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Run rows as CSV: LF line endings, six decimals for every real number.
pub fn write_rows_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(HEADER).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.run_id.clone(),
            r.policy.clone(),
            r.workload.clone(),
            r.task_count.to_string(),
            r.device_count.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
        ];
        rec.extend(r.metrics().iter().map(|v| num(*v)));
        rec.push(num(r.wall_clock_ms));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows_json<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut out = out;
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn read_rows_json<R: Read>(input: R) -> Result<Vec<ReportRow>> {
    serde_json::from_reader(input).map_err(|e| Error::Io(e.to_string()))
}

pub fn write_summary_csv<W: Write>(summaries: &[CellSummary], out: W) -> Result<()> {
    let mut w = csv_writer(out);
    let mut header: Vec<String> = [
        "policy",
        "workload",
        "taskCount",
        "deviceCount",
        "replications",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for m in METRIC_NAMES {
        header.push(format!("{m}Mean"));
        header.push(format!("{m}Std"));
    }
    w.write_record(&header).map_err(csv_err)?;
    for s in summaries {
        let mut rec = vec![
            s.policy.clone(),
            s.workload.clone(),
            s.task_count.to_string(),
            s.device_count.to_string(),
            s.replications.to_string(),
        ];
        for i in 0..METRIC_NAMES.len() {
            rec.push(num(s.mean[i]));
            rec.push(num(s.std[i]));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// One point of a plot series: a metric against one sweep axis, pooled over
/// the other axis and all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub workload: String,
    pub policy: String,
    pub x: usize,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    TaskCount,
    DeviceCount,
}

impl Axis {
    pub fn name(&self) -> &'static str {
        match self {
            Axis::TaskCount => "taskCount",
            Axis::DeviceCount => "deviceCount",
        }
    }
}

pub fn plot_series(result: &SweepResult, metric: usize, axis: Axis) -> Vec<SeriesPoint> {
    let mut groups: BTreeMap<(String, String, usize), Vec<f64>> = BTreeMap::new();
    for r in result.runs() {
        let x = match axis {
            Axis::TaskCount => r.task_count,
            Axis::DeviceCount => r.device_count,
        };
        groups
            .entry((r.workload.clone(), r.policy.clone(), x))
            .or_default()
            .push(r.metrics()[metric]);
    }
    groups
        .into_iter()
        .map(|((workload, policy, x), v)| {
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let std = if v.len() < 2 {
                0.0
            } else {
                (v.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (n - 1.0)).sqrt()
            };
            SeriesPoint {
                workload,
                policy,
                x,
                mean,
                std,
            }
        })
        .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Writes runs, per-cell summary and plot series into `dir`; returns the
/// files written.
pub fn write_outputs(
    result: &SweepResult,
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();

    let runs = match format {
        OutputFormat::Csv => {
            let p = dir.join("runs.csv");
            write_rows_csv(&result.rows, create(&p)?)?;
            p
        }
        OutputFormat::Json => {
            let p = dir.join("runs.json");
            write_rows_json(&result.rows, create(&p)?)?;
            p
        }
    };
    written.push(runs);

    let p = dir.join("summary.csv");
    write_summary_csv(&result.summaries, create(&p)?)?;
    written.push(p);

    let series_dir = dir.join("series");
    fs::create_dir_all(&series_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", series_dir.display())))?;
    for (i, metric) in METRIC_NAMES.iter().enumerate() {
        for axis in [Axis::TaskCount, Axis::DeviceCount] {
            let p = series_dir.join(format!("{metric}_by_{}.csv", axis.name()));
            let mut w = csv_writer(create(&p)?);
            w.write_record(["workload", "policy", axis.name(), "mean", "std"])
                .map_err(csv_err)?;
            for pt in plot_series(result, i, axis) {
                w.write_record([
                    pt.workload,
                    pt.policy,
                    pt.x.to_string(),
                    num(pt.mean),
                    num(pt.std),
                ])
                .map_err(csv_err)?;
            }
            w.flush()?;
            written.push(p);
        }
    }
    Ok(written)
}
