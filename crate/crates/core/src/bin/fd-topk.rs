use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fd_topk::experiment::{run_experiment, validate_config, ExperimentConfig, RunOptions};
use fd_topk::metrics::{predict_bbw, predict_mfw_basic};

/// Fully distributed top-k query simulator.
#[derive(Parser)]
#[command(name = "fd-topk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write per-query event traces.
        #[arg(long)]
        trace: bool,
    },
    /// Check a config file without running it.
    Validate { config: PathBuf },
    /// Cost-model predictions for basic flooding.
    Predict {
        /// Average degree of the peers reached.
        #[arg(long)]
        dg: f64,
        /// Number of peers reached, the originator included.
        #[arg(long)]
        npq: u64,
        #[arg(long)]
        k: u64,
        /// Bytes per score-list entry.
        #[arg(long, default_value_t = 10)]
        l: u64,
    },
}

const CONFIG_ERROR: u8 = 1;
const RUNTIME_ERROR: u8 = 2;

fn load(path: &PathBuf) -> Result<ExperimentConfig, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(CONFIG_ERROR)
    })?;
    validate_config(&text).map_err(|diags| {
        for d in diags {
            eprintln!("{}: {d}", path.display());
        }
        ExitCode::from(CONFIG_ERROR)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { CONFIG_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                let runs = cfg.sweep_values.len() * cfg.seeds.len() * cfg.algorithms.len();
                println!(
                    "{}: ok ({} sweep over {runs} queries)",
                    config.display(),
                    cfg.sweep_variable.name()
                );
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Run {
            config,
            out,
            jobs,
            trace,
        } => {
            let cfg = match load(&config) {
                Ok(cfg) => cfg,
                Err(code) => return code,
            };
            if jobs == Some(0) {
                eprintln!("--jobs must be at least 1");
                return ExitCode::from(CONFIG_ERROR);
            }
            let opts = RunOptions {
                out_dir: out.unwrap_or_else(|| cfg.output.clone()),
                jobs,
                trace,
            };
            match run_experiment(&cfg, &opts) {
                Ok(res) => {
                    println!("{} rows -> {}", res.rows.len(), res.results_path.display());
                    println!("summary -> {}", res.summary_path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(RUNTIME_ERROR)
                }
            }
        }
        Command::Predict { dg, npq, k, l } => {
            if dg < 1.0 || npq == 0 {
                eprintln!("need --dg >= 1 and --npq >= 1");
                return ExitCode::from(CONFIG_ERROR);
            }
            println!("mFw = {}", predict_mfw_basic(dg, npq as usize));
            println!("bBw = {}", predict_bbw(k, l, npq));
            ExitCode::SUCCESS
        }
    }
}
