use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::metrics::MetricsReport;
use crate::protocol::Algorithm;
use crate::sim::Network;
use crate::topology::{generate_topology, TopologyConfig};
use crate::{Error, Result};

/// One measured query of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_value: f64,
    pub report: MetricsReport,
}

/// Mean and sample standard deviation of every metric, per
/// (sweep value, algorithm).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub sweep_value: f64,
    pub algorithm: Algorithm,
    pub runs: usize,
    /// `(mean, sd)` in [`SUMMARY_METRICS`] order.
    pub stats: Vec<(f64, f64)>,
}

pub const SUMMARY_METRICS: [&str; 9] = [
    "mFw",
    "mBw",
    "mRt",
    "bBw",
    "totalBytes",
    "responseTimeMs",
    "acQ",
    "lostLists",
    "urgentListsSent",
];

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
    pub results_path: PathBuf,
    pub summary_path: PathBuf,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    /// Write one event trace per measured query under `out_dir/traces`.
    pub trace: bool,
}

fn metric_values(r: &MetricsReport) -> [f64; 9] {
    [
        r.m_fw as f64,
        r.m_bw as f64,
        r.m_rt as f64,
        r.b_bw as f64,
        r.total_bytes as f64,
        r.response_time_ms,
        r.ac_q,
        r.lost_lists as f64,
        r.urgent_lists_sent as f64,
    ]
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Groups rows by (sweep value, algorithm), keeping first-appearance order.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut keys: Vec<(f64, Algorithm)> = Vec::new();
    for r in rows {
        let key = (r.sweep_value, r.report.algorithm);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(v, a)| {
            let cell: Vec<[f64; 9]> = rows
                .iter()
                .filter(|r| r.sweep_value == v && r.report.algorithm == a)
                .map(|r| metric_values(&r.report))
                .collect();
            let stats = (0..SUMMARY_METRICS.len())
                .map(|i| mean_sd(&cell.iter().map(|m| m[i]).collect::<Vec<_>>()))
                .collect();
            SummaryRow {
                sweep_value: v,
                algorithm: a,
                runs: cell.len(),
                stats,
            }
        })
        .collect()
}

struct CellResult {
    rows: Vec<ResultRow>,
    traces: Vec<(String, String)>,
}

fn run_cell(cfg: &ExperimentConfig, value: f64, seed: u64, trace: bool) -> Result<CellResult> {
    let first = cfg.cell(value, cfg.algorithms[0], seed);
    let graph = generate_topology(&TopologyConfig::new(
        first.n_peers,
        cfg.attachment_edges,
        seed,
    ))?;
    let mut net = Network::build(graph, &cfg.data_config(seed))?;
    let mut out = CellResult {
        rows: Vec::new(),
        traces: Vec::new(),
    };
    for &algo in &cfg.algorithms {
        let mut sim = cfg.cell(value, algo, seed).sim;
        net.reset_statistics();
        if algo.uses_heuristics() {
            for q in 0..cfg.warmup {
                sim.query_counter = q;
                net.run_query(&sim)?;
            }
            sim.query_counter = cfg.warmup;
        }
        sim.trace = trace;
        let outcome = net.run_query(&sim)?;
        if let Some(t) = outcome.trace {
            out.traces
                .push((format!("{}_{}_{}.tsv", value, algo.name(), seed), t));
        }
        out.rows.push(ResultRow {
            sweep_value: value,
            report: outcome.report,
        });
    }
    Ok(out)
}

/// Runs every (sweep value, seed) cell, each over every algorithm, and
/// writes `results.csv` and `summary.csv` to `opts.out_dir`.
///
/// Row order does not depend on `jobs`. On error, files written so far are
/// removed.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutput> {
    if cfg.algorithms.is_empty() || cfg.seeds.is_empty() || cfg.sweep_values.is_empty() {
        return Err(Error::InvalidSimConfig(
            "empty sweep, algorithm or seed list".into(),
        ));
    }
    let cells: Vec<(f64, u64)> = cfg
        .sweep_values
        .iter()
        .flat_map(|&v| cfg.seeds.iter().map(move |&s| (v, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidSimConfig(format!("thread pool: {e}")))?;
    let results: Vec<CellResult> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(v, s)| run_cell(cfg, v, s, opts.trace))
            .collect::<Result<Vec<_>>>()
    })?;

    let created_dir = !opts.out_dir.exists();
    let written = write_outputs(cfg, opts, &results);
    match written {
        Ok(out) => Ok(out),
        Err(e) => {
            cleanup(&opts.out_dir, created_dir);
            Err(e)
        }
    }
}

fn cleanup(dir: &Path, created_dir: bool) {
    if created_dir {
        let _ = fs::remove_dir_all(dir);
    } else {
        let _ = fs::remove_file(dir.join("results.csv"));
        let _ = fs::remove_file(dir.join("summary.csv"));
        let _ = fs::remove_dir_all(dir.join("traces"));
    }
}

fn write_outputs(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
    results: &[CellResult],
) -> Result<ExperimentOutput> {
    fs::create_dir_all(&opts.out_dir)?;
    let rows: Vec<ResultRow> = results
        .iter()
        .flat_map(|c| c.rows.iter().cloned())
        .collect();
    let summary = summarize(&rows);

    let mut csv = format!("{},sweepValue\n", MetricsReport::csv_header());
    for r in &rows {
        csv.push_str(&format!("{},{}\n", r.report.to_csv_row(), r.sweep_value));
    }
    let results_path = opts.out_dir.join("results.csv");
    fs::write(&results_path, csv)?;

    let mut s = String::from(
        "# totalBytes counts every message kind: forwards, score-lists, urgent and direct lists, retrieval\n",
    );
    s.push_str("sweepVariable,sweepValue,algorithm,runs");
    for m in SUMMARY_METRICS {
        s.push_str(&format!(",{m}Mean,{m}Sd"));
    }
    s.push('\n');
    for row in &summary {
        s.push_str(&format!(
            "{},{},{},{}",
            cfg.sweep_variable.name(),
            row.sweep_value,
            row.algorithm,
            row.runs
        ));
        for (m, sd) in &row.stats {
            s.push_str(&format!(",{m},{sd}"));
        }
        s.push('\n');
    }
    let summary_path = opts.out_dir.join("summary.csv");
    fs::write(&summary_path, s)?;

    if opts.trace {
        let dir = opts.out_dir.join("traces");
        fs::create_dir_all(&dir)?;
        for (name, t) in results.iter().flat_map(|c| c.traces.iter()) {
            fs::write(dir.join(name), t)?;
        }
    }
    Ok(ExperimentOutput {
        rows,
        summary,
        results_path,
        summary_path,
    })
}
