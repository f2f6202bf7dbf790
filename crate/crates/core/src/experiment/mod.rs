//! Parameter sweeps described by small `key = value` files.
//!
//! ```text
//! sweep.variable = bandwidthMean
//! sweep.values   = 28, 56, 112, 224
//! algo.list      = fd-basic, cn, cnstar
//! seed.list      = 1, 2, 3
//! peers          = 1000
//! ```
//!
//! Each (sweep value, seed) pair gets its own overlay and data; every listed
//! algorithm then runs one query on it.

mod config;
mod runner;

pub use config::{validate_config, ChurnKind, Diagnostic, ExperimentConfig, SweepVariable};
pub use runner::{
    run_experiment, summarize, ExperimentOutput, ResultRow, RunOptions, SummaryRow, SUMMARY_METRICS,
};
