use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use crate::datastore::DataGenConfig;
use crate::protocol::{Algorithm, HeuristicConfig};
use crate::sim::{ChurnModel, LinkModel, SimConfig, WaitPolicy};

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    NPeers,
    BandwidthMean,
    LatencyMean,
    ZFactor,
    /// Mean peer lifetime in minutes.
    MeanLifetime,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::NPeers => "nPeers",
            SweepVariable::BandwidthMean => "bandwidthMean",
            SweepVariable::LatencyMean => "latencyMean",
            SweepVariable::ZFactor => "zFactor",
            SweepVariable::MeanLifetime => "meanLifetime",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        use SweepVariable::*;
        [NPeers, BandwidthMean, LatencyMean, ZFactor, MeanLifetime]
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                format!("unknown sweep variable `{s}` (known: nPeers, bandwidthMean, latencyMean, zFactor, meanLifetime)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChurnKind {
    Exponential,
    Fixed,
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub seeds: Vec<u64>,
    pub n_peers: usize,
    pub attachment_edges: usize,
    pub k: u32,
    /// `None` means coverage.
    pub ttl: Option<u32>,
    pub link: LinkModel,
    pub tuple_count_min: u32,
    pub tuple_count_max: u32,
    pub payload_mean_bytes: f64,
    pub payload_variance_bytes: f64,
    pub lambda_max: Duration,
    pub exec_per_row: Duration,
    pub merge_time: Duration,
    pub heuristic: HeuristicConfig,
    /// Executions before the measured one, for heuristic algorithms.
    pub warmup: u32,
    /// Mean lifetime in minutes; `None` for a static network.
    pub churn_lifetime_min: Option<f64>,
    pub churn_kind: ChurnKind,
    pub inaccessibility: f64,
    pub queue_slots: Option<u32>,
    pub output: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            sweep_variable: SweepVariable::NPeers,
            sweep_values: Vec::new(),
            algorithms: vec![Algorithm::FdBasic],
            seeds: vec![1],
            n_peers: 1000,
            attachment_edges: 2,
            k: 20,
            ttl: None,
            link: LinkModel::default(),
            tuple_count_min: 1001,
            tuple_count_max: 19_999,
            payload_mean_bytes: 1024.0,
            payload_variance_bytes: 64.0,
            lambda_max: Duration::from_millis(20),
            exec_per_row: Duration::from_micros(5),
            merge_time: Duration::from_millis(1),
            heuristic: HeuristicConfig::PositionThreshold { z: 0.8 },
            warmup: 3,
            churn_lifetime_min: None,
            churn_kind: ChurnKind::Exponential,
            inaccessibility: 0.0,
            queue_slots: None,
            output: PathBuf::from("results"),
        }
    }
}

/// One problem found in a config file. `line` is 0 for whole-file problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

/// Settings of one cell's simulation, for a given sweep value.
pub(crate) struct CellSettings {
    pub n_peers: usize,
    pub sim: SimConfig,
}

impl ExperimentConfig {
    pub fn data_config(&self, seed: u64) -> DataGenConfig {
        DataGenConfig {
            tuple_count_min: self.tuple_count_min,
            tuple_count_max: self.tuple_count_max,
            payload_mean_bytes: self.payload_mean_bytes,
            payload_variance_bytes: self.payload_variance_bytes,
            seed,
        }
    }

    fn churn(&self, minutes: Option<f64>) -> ChurnModel {
        match (minutes, self.churn_kind) {
            (None, _) => ChurnModel::None,
            (Some(m), ChurnKind::Exponential) => ChurnModel::exponential_minutes(m),
            (Some(m), ChurnKind::Fixed) => ChurnModel::Fixed {
                lifetime: Duration::from_secs_f64(m * 60.0),
            },
        }
    }

    pub(crate) fn cell(&self, value: f64, algorithm: Algorithm, seed: u64) -> CellSettings {
        let mut sim = SimConfig::new(algorithm, seed);
        sim.k = self.k;
        sim.ttl = self.ttl;
        sim.link = self.link;
        sim.lambda_max = self.lambda_max;
        sim.exec_per_row = self.exec_per_row;
        sim.merge_time = self.merge_time;
        sim.heuristic = self.heuristic;
        sim.inaccessibility = self.inaccessibility;
        sim.wait = WaitPolicy::Derived {
            queue_slots: self.queue_slots,
        };
        let mut n_peers = self.n_peers;
        let mut lifetime = self.churn_lifetime_min;
        match self.sweep_variable {
            SweepVariable::NPeers => n_peers = value as usize,
            SweepVariable::BandwidthMean => sim.link.bandwidth_mean_kbps = value,
            SweepVariable::LatencyMean => sim.link.latency_mean_ms = value,
            SweepVariable::ZFactor => {
                sim.heuristic = HeuristicConfig::PositionThreshold { z: value }
            }
            SweepVariable::MeanLifetime => lifetime = Some(value),
        }
        sim.churn = self.churn(lifetime);
        CellSettings { n_peers, sim }
    }
}

fn parse_list<T: FromStr>(v: &str) -> Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| format!("cannot parse `{s}`")))
        .collect()
}

fn parse_num<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse::<T>()
        .map_err(|_| format!("cannot parse `{v}` as a number"))
}

/// Parses a `key = value` experiment description, filling in defaults.
pub fn validate_config(text: &str) -> Result<ExperimentConfig, Vec<Diagnostic>> {
    let mut cfg = ExperimentConfig::default();
    let mut diags = Vec::new();
    let mut sweep_var_seen = false;
    let mut sweep_values_line = 0;
    let mut heuristic_mode = "position".to_string();
    let mut heuristic_x = None;
    let mut heuristic_z = 0.8;
    let mut links = "normal".to_string();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            diags.push(Diagnostic {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        let res: Result<(), String> = (|| {
            match key {
                "sweep.variable" => {
                    cfg.sweep_variable = value.parse()?;
                    sweep_var_seen = true;
                }
                "sweep.values" => {
                    cfg.sweep_values = parse_list(value)?;
                    sweep_values_line = line;
                }
                "algo.list" => cfg.algorithms = parse_list_with(value, |s| s.parse::<Algorithm>())?,
                "seed.list" => cfg.seeds = parse_list(value)?,
                "peers" => cfg.n_peers = parse_num(value)?,
                "attachment" => cfg.attachment_edges = parse_num(value)?,
                "k" => cfg.k = parse_num(value)?,
                "ttl" => {
                    cfg.ttl = if value == "coverage" {
                        None
                    } else {
                        Some(parse_num(value)?)
                    }
                }
                "latency.mean" => cfg.link.latency_mean_ms = parse_num(value)?,
                "latency.variance" => cfg.link.latency_variance = parse_num(value)?,
                "bandwidth.mean" => cfg.link.bandwidth_mean_kbps = parse_num(value)?,
                "bandwidth.variance" => cfg.link.bandwidth_variance = parse_num(value)?,
                "links" => links = value.to_string(),
                "payload.mean" => cfg.payload_mean_bytes = parse_num(value)?,
                "payload.variance" => cfg.payload_variance_bytes = parse_num(value)?,
                "tuples.min" => cfg.tuple_count_min = parse_num(value)?,
                "tuples.max" => cfg.tuple_count_max = parse_num(value)?,
                "lambda.max_ms" => {
                    cfg.lambda_max = Duration::from_secs_f64(parse_num::<f64>(value)? / 1e3)
                }
                "exec.per_row_us" => {
                    cfg.exec_per_row = Duration::from_secs_f64(parse_num::<f64>(value)? / 1e6)
                }
                "merge.ms" => {
                    cfg.merge_time = Duration::from_secs_f64(parse_num::<f64>(value)? / 1e3)
                }
                "heuristic.mode" => heuristic_mode = value.to_string(),
                "heuristic.x" => heuristic_x = Some(parse_num(value)?),
                "heuristic.z" => heuristic_z = parse_num(value)?,
                "warmup" => cfg.warmup = parse_num(value)?,
                "churn.lifetime_min" => {
                    cfg.churn_lifetime_min = if value == "none" {
                        None
                    } else {
                        Some(parse_num(value)?)
                    }
                }
                "churn.distribution" => {
                    cfg.churn_kind = match value {
                        "exponential" => ChurnKind::Exponential,
                        "fixed" => ChurnKind::Fixed,
                        other => return Err(format!("unknown churn distribution `{other}`")),
                    }
                }
                "inaccessibility" => cfg.inaccessibility = parse_num(value)?,
                "wait.queue_slots" => {
                    cfg.queue_slots = if value == "max-degree" {
                        None
                    } else {
                        Some(parse_num(value)?)
                    }
                }
                "output" => cfg.output = PathBuf::from(value),
                other => return Err(format!("unknown key `{other}`")),
            }
            Ok(())
        })();
        if let Err(message) = res {
            diags.push(Diagnostic { line, message });
            continue;
        }
        let range_err = match key {
            "k" if cfg.k == 0 => Some("k must be >= 1".to_string()),
            "peers" if cfg.n_peers == 0 => Some("peers must be >= 1".to_string()),
            "attachment" if cfg.attachment_edges == 0 => {
                Some("attachment must be >= 1".to_string())
            }
            "inaccessibility" if !(0.0..1.0).contains(&cfg.inaccessibility) => Some(format!(
                "inaccessibility P must satisfy 0 <= P < 1 (k is inflated to k / (1 - P)), got {}",
                cfg.inaccessibility
            )),
            "heuristic.z" if !(0.0..=1.0).contains(&heuristic_z) => {
                Some("heuristic.z must lie in [0, 1]".into())
            }
            "heuristic.x" if !heuristic_x.is_some_and(|x: f64| (0.0..=1.0).contains(&x)) => {
                Some("heuristic.x must lie in [0, 1]".into())
            }
            "latency.mean" | "latency.variance" | "bandwidth.variance" | "payload.variance"
                if cfg.link.latency_mean_ms < 0.0
                    || cfg.link.latency_variance < 0.0
                    || cfg.link.bandwidth_variance < 0.0
                    || cfg.payload_variance_bytes < 0.0 =>
            {
                Some(format!("{key} must be >= 0"))
            }
            "bandwidth.mean" if cfg.link.bandwidth_mean_kbps <= 0.0 => {
                Some("bandwidth.mean must be > 0".into())
            }
            "payload.mean" if cfg.payload_mean_bytes <= 0.0 => {
                Some("payload.mean must be > 0".into())
            }
            "churn.lifetime_min" if cfg.churn_lifetime_min.is_some_and(|m| m <= 0.0) => {
                Some("churn.lifetime_min must be > 0".into())
            }
            "algo.list" if cfg.algorithms.is_empty() => Some("algo.list is empty".into()),
            "seed.list" if cfg.seeds.is_empty() => Some("seed.list is empty".into()),
            "sweep.values" if cfg.sweep_values.is_empty() => Some("sweep.values is empty".into()),
            _ => None,
        };
        if let Some(message) = range_err {
            diags.push(Diagnostic { line, message });
        }
    }

    cfg.heuristic = match heuristic_mode.as_str() {
        "position" => HeuristicConfig::PositionThreshold { z: heuristic_z },
        "zero-hit" => HeuristicConfig::ExcludeZeroHit,
        "hit-fraction" => match heuristic_x {
            Some(x) => HeuristicConfig::MinHitFraction { x },
            None => {
                diags.push(Diagnostic {
                    line: 0,
                    message: "heuristic.mode = hit-fraction needs heuristic.x".into(),
                });
                HeuristicConfig::ExcludeZeroHit
            }
        },
        other => {
            diags.push(Diagnostic {
                line: 0,
                message: format!("unknown heuristic.mode `{other}`"),
            });
            HeuristicConfig::ExcludeZeroHit
        }
    };
    match links.as_str() {
        "normal" => {}
        "instant" => cfg.link = LinkModel::instant(),
        other => diags.push(Diagnostic {
            line: 0,
            message: format!("unknown links model `{other}`"),
        }),
    }
    if !sweep_var_seen || sweep_values_line == 0 {
        diags.push(Diagnostic {
            line: 0,
            message: "missing sweep (need sweep.variable and sweep.values)".into(),
        });
    }
    if cfg.tuple_count_min == 0 || cfg.tuple_count_min > cfg.tuple_count_max {
        diags.push(Diagnostic {
            line: 0,
            message: "need 1 <= tuples.min <= tuples.max".into(),
        });
    }
    let peer_counts: Vec<f64> = if cfg.sweep_variable == SweepVariable::NPeers {
        cfg.sweep_values.clone()
    } else {
        vec![cfg.n_peers as f64]
    };
    for n in peer_counts {
        if n.fract() != 0.0 || n < 1.0 || n as usize <= cfg.attachment_edges {
            diags.push(Diagnostic {
                line: sweep_values_line,
                message: format!(
                    "peer count {n} must be an integer above attachment ({})",
                    cfg.attachment_edges
                ),
            });
        }
    }
    let bad_value = |v: &f64| match cfg.sweep_variable {
        SweepVariable::NPeers => false,
        SweepVariable::BandwidthMean | SweepVariable::MeanLifetime => *v <= 0.0,
        SweepVariable::LatencyMean => *v < 0.0,
        SweepVariable::ZFactor => !(0.0..=1.0).contains(v),
    };
    if cfg.sweep_values.iter().any(bad_value) {
        diags.push(Diagnostic {
            line: sweep_values_line,
            message: format!(
                "sweep.values out of range for {}",
                cfg.sweep_variable.name()
            ),
        });
    }
    if diags.is_empty() {
        Ok(cfg)
    } else {
        diags.sort_by_key(|d| d.line);
        Err(diags)
    }
}

fn parse_list_with<T>(v: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(f)
        .collect()
}
