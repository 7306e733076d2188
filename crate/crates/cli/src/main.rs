use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fogbal_core::experiment::{
    load_comparison_matrix, load_decision_matrix, load_weights, parse_config, run_sweep,
    write_outputs, OutputFormat,
};
use fogbal_core::fuzzy::{consistency_ratio, fahp_weights, ftopsis_rank, CONSISTENCY_THRESHOLD};
use fogbal_core::Error;

#[derive(Parser)]
#[command(name = "fogbal", version, about = "Fog-cloud load balancing simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment sweep described by a TOML plan.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the plan.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = ["csv", "json"])]
        format: Option<String>,
        /// Restrict to these policies (repeatable).
        #[arg(long = "policy")]
        policies: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Use the large task and device grid.
        #[arg(long)]
        full_grid: bool,
    },
    /// Print fuzzy AHP weights and the consistency ratio of a comparison matrix.
    Weights {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Rank devices with fuzzy TOPSIS.
    Rank {
        #[arg(long)]
        devices: PathBuf,
        #[arg(long)]
        weights: PathBuf,
    },
}

/// Exit status: 2 for bad input, 3 for failures during a run.
enum Failure {
    Config(Error),
    Runtime(Error),
}

impl Failure {
    fn classify(e: Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e)
        } else {
            Failure::Runtime(e)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run {
            config,
            out,
            format,
            policies,
            seed,
            full_grid,
        } => {
            let mut plan = parse_config(&config).map_err(Failure::Config)?;
            if let Some(dir) = out {
                plan.output_dir = dir;
            }
            if let Some(f) = format {
                plan.format = f.parse::<OutputFormat>().map_err(Failure::Config)?;
            }
            if !policies.is_empty() {
                plan.restrict_policies(&policies).map_err(Failure::Config)?;
            }
            if let Some(s) = seed {
                plan.base_seed = s;
            }
            if full_grid {
                plan.use_full_grid();
            }
            if plan.consistency_ratio > CONSISTENCY_THRESHOLD {
                eprintln!(
                    "warning: comparison matrix consistency ratio {:.4} exceeds {CONSISTENCY_THRESHOLD}",
                    plan.consistency_ratio
                );
            }
            let result = run_sweep(&plan).map_err(Failure::classify)?;
            let files =
                write_outputs(&result, &plan.output_dir, plan.format).map_err(Failure::Runtime)?;
            println!(
                "{} runs in {} cells",
                result.runs().count(),
                result.summaries.len()
            );
            for f in files {
                println!("{}", f.display());
            }
            Ok(())
        }
        Command::Weights { matrix } => {
            let m = load_comparison_matrix(&matrix).map_err(Failure::Config)?;
            let w = fahp_weights(&m).map_err(Failure::Config)?;
            let cr = consistency_ratio(&m).map_err(Failure::Config)?;
            for (i, x) in w.weights().iter().enumerate() {
                println!("C{}\t{x:.6}", i + 1);
            }
            let note = if cr > CONSISTENCY_THRESHOLD {
                "\t(inconsistent)"
            } else {
                ""
            };
            println!("CR\t{cr:.6}{note}");
            Ok(())
        }
        Command::Rank { devices, weights } => {
            let dm = load_decision_matrix(&devices).map_err(Failure::Config)?;
            let w = load_weights(&weights).map_err(Failure::Config)?;
            // Shape and rating problems come from the input files too.
            let r = ftopsis_rank(&dm, &w).map_err(Failure::Config)?;
            println!("rank\tdevice\tcloseness");
            for (pos, &d) in r.order.iter().enumerate() {
                println!("{}\t{d}\t{:.6}", pos + 1, r.closeness[d]);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
