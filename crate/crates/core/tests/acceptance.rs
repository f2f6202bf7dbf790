//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). It exits non-zero when a
//! criterion fails, unless the criterion is listed in `KNOWN_FAILURES`.

use std::process::ExitCode;
use std::time::Instant;

use fd_topk::datastore::DataGenConfig;
use fd_topk::experiment::{run_experiment, validate_config, RunOptions};
use fd_topk::metrics::oracle_top_k;
use fd_topk::protocol::{inflate_k, HeuristicConfig};
use fd_topk::sim::{Algorithm, ChurnModel, LinkModel, Network, SimConfig, SimOutcome};
use fd_topk::topology::{
    average_degree, coverage_ttl, generate_topology, reachable_set, TopologyConfig,
};
use fd_topk::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria expected to fail on this model; their lines still print FAIL.
const KNOWN_FAILURES: &[u32] = &[7];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn network(n: usize, m: usize, seed: u64) -> Result<Network> {
    let graph = generate_topology(&TopologyConfig::new(n, m, seed))?;
    Network::build(
        graph,
        &DataGenConfig {
            seed,
            ..DataGenConfig::default()
        },
    )
}

fn sorted_scores(entries: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = entries.into_iter().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn oracle_scores(net: &Network, out: &SimOutcome, k: usize) -> Result<Vec<f64>> {
    let t = oracle_top_k(net.graph(), out.origin, out.ttl, k, |p| {
        net.scores(p).collect::<Vec<_>>()
    })?;
    Ok(sorted_scores(t.iter().map(|e| e.score)))
}

/// 50 sizes spread evenly over 100..=2000.
fn c1_cells() -> Vec<(u64, usize)> {
    (0..50u64)
        .map(|i| (i + 1, 100 + (i as usize * 1900) / 49))
        .collect()
}

const C1_ALGOS: [Algorithm; 5] = [
    Algorithm::FdBasic,
    Algorithm::FdStr1,
    Algorithm::FdStr12,
    Algorithm::Cn,
    Algorithm::CnStar,
];

/// Criteria 1 and 5 (retrieval bound) over the same runs.
fn criteria_1_and_5() -> Result<(Verdict, Verdict)> {
    let per_cell: Vec<(usize, usize, u64)> = c1_cells()
        .par_iter()
        .map(|&(seed, n)| -> Result<(usize, usize, u64)> {
            let mut net = network(n, 2, seed)?;
            let (mut runs, mut exact, mut worst_rt_excess) = (0, 0, 0u64);
            for k in [1u32, 5, 20] {
                for algo in C1_ALGOS {
                    let out = net.run_query(&SimConfig {
                        k,
                        ..SimConfig::new(algo, seed)
                    })?;
                    runs += 1;
                    let got = sorted_scores(out.result.iter().map(|i| i.score));
                    if got == oracle_scores(&net, &out, k as usize)? {
                        exact += 1;
                    }
                    let excess = out.report.m_rt.saturating_sub(2 * k as u64);
                    worst_rt_excess = worst_rt_excess.max(excess);
                }
            }
            Ok((runs, exact, worst_rt_excess))
        })
        .collect::<Result<_>>()?;
    let runs: usize = per_cell.iter().map(|c| c.0).sum();
    let exact: usize = per_cell.iter().map(|c| c.1).sum();
    let excess = per_cell.iter().map(|c| c.2).max().unwrap_or(0);
    Ok((
        verdict(
            exact == runs,
            format!("{exact}/{runs} runs equal the oracle"),
        ),
        verdict(
            excess == 0,
            format!("mRt <= 2k on all {runs} runs (worst excess {excess})"),
        ),
    ))
}

/// Criteria 2 and 4, at twice the coverage TTL so every reached peer forwards.
fn criteria_2_and_4() -> Result<(Verdict, Verdict)> {
    let cells: Vec<(bool, bool, f64)> = c1_cells()
        .par_iter()
        .map(|&(seed, n)| -> Result<(bool, bool, f64)> {
            let mut net = network(n, 2, seed)?;
            let probe = SimConfig::new(Algorithm::FdBasic, seed);
            let origin = net.origin_for(&probe);
            let ttl = 2 * coverage_ttl(net.graph(), origin)?;
            let out = net.run_query(&SimConfig {
                ttl: Some(ttl),
                ..probe
            })?;
            let g = net.graph();
            let pq = reachable_set(g, origin, ttl)?;
            let sum: u64 = pq
                .iter()
                .map(|&p| g.degree(p) as u64 - u64::from(p != origin))
                .sum();
            let dg = average_degree(g, pq.iter().copied())?;
            let closed = (dg - 1.0) * pq.len() as f64 + 1.0;
            let counted = out.report.m_fw == sum && (closed - sum as f64).abs() < 1e-6;
            let bytes = out.report.b_bw == 200 * (pq.len() as u64 - 1);
            Ok((counted, bytes, (closed - out.report.m_fw as f64).abs()))
        })
        .collect::<Result<_>>()?;
    let counted = cells.iter().filter(|c| c.0).count();
    let bytes = cells.iter().filter(|c| c.1).count();
    let worst = cells.iter().map(|c| c.2).fold(0.0, f64::max);

    let mut big = network(10_000, 2, 4)?;
    let out = big.run_query(&SimConfig::new(Algorithm::FdBasic, 4))?;
    let big_ok = out.reached.len() == 10_000 && out.report.b_bw == 1_999_800;
    Ok((
        verdict(
            counted == cells.len(),
            format!("{counted}/{} runs match, worst gap {worst}", cells.len()),
        ),
        verdict(
            bytes == cells.len() && big_ok,
            format!(
                "{bytes}/{} runs give 200(|P_Q|-1); 10,000 peers: bBw = {}",
                cells.len(),
                out.report.b_bw
            ),
        ),
    ))
}

/// Criterion 3, with instant links and an unbounded TTL.
fn criterion_3() -> Result<Verdict> {
    let rows: Vec<(bool, bool, bool)> = (1..=10u64)
        .into_par_iter()
        .map(|seed| -> Result<(bool, bool, bool)> {
            let n = 100 + (seed as usize * 190);
            let ttl = Some(n as u32);
            let link = LinkModel::instant();
            let mut net = network(n, 2, seed)?;
            let edges = net.graph().edge_count() as u64;
            let s1 = net.run_query(&SimConfig {
                link,
                ttl,
                ..SimConfig::new(Algorithm::FdStr1, seed)
            })?;
            let s12 = net.run_query(&SimConfig {
                link,
                ttl,
                ..SimConfig::new(Algorithm::FdStr12, seed)
            })?;
            let mut tree = network(n, 1, seed)?;
            let t12 = tree.run_query(&SimConfig {
                link,
                ttl,
                ..SimConfig::new(Algorithm::FdStr12, seed)
            })?;
            Ok((
                s1.report.m_fw == edges,
                s12.report.m_fw <= edges,
                t12.report.m_fw == n as u64 - 1,
            ))
        })
        .collect::<Result<_>>()?;
    let a = rows.iter().filter(|r| r.0).count();
    let b = rows.iter().filter(|r| r.1).count();
    let c = rows.iter().filter(|r| r.2).count();
    Ok(verdict(
        a == rows.len() && b == rows.len() && c == rows.len(),
        format!("str1 = |E| {a}/10, str12 <= |E| {b}/10, trees str12 = |P_Q|-1 {c}/10"),
    ))
}

fn criterion_6() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for p in [0.1, 0.3, 0.5] {
        let k = inflate_k(20, p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let trials = 4000;
        let total: u64 = (0..trials)
            .map(|_| (0..k).filter(|_| rng.random::<f64>() >= p).count() as u64)
            .sum();
        let mean = total as f64 / trials as f64;
        worst = worst.max((mean - 20.0).abs() / 20.0);
        parts.push(format!("P={p}: k'={k} mean {mean:.2}"));
    }
    Ok(verdict(worst <= 0.05, parts.join(", ")))
}

fn criterion_7() -> Result<Verdict> {
    let cells: Vec<(usize, u64, f64)> = [2000usize, 5000, 10_000]
        .iter()
        .flat_map(|&n| (1..=3u64).map(move |s| (n, s)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(n, seed)| -> Result<(usize, u64, f64)> {
            let mut net = network(n, 2, seed)?;
            let basic = net.run_query(&SimConfig::new(Algorithm::FdBasic, seed))?;
            let s12 = net.run_query(&SimConfig::new(Algorithm::FdStr12, seed))?;
            let red = 1.0 - s12.report.total_bytes as f64 / basic.report.total_bytes as f64;
            Ok((n, seed, red))
        })
        .collect::<Result<_>>()?;
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2000usize, 5000, 10_000] {
        let reds: Vec<f64> = cells.iter().filter(|c| c.0 == n).map(|c| c.2).collect();
        let mean = reds.iter().sum::<f64>() / reds.len() as f64;
        ok &= (0.20..=0.40).contains(&mean);
        parts.push(format!("{n}: {:+.1}%", -100.0 * mean));
    }
    Ok(verdict(
        ok,
        format!("str12 totalBytes vs basic: {}", parts.join(", ")),
    ))
}

fn criterion_8() -> Result<Verdict> {
    let rows: Vec<(f64, f64)> = (1..=5u64)
        .into_par_iter()
        .map(|seed| -> Result<(f64, f64)> {
            let mut net = network(1000, 2, seed)?;
            let s12 = net.run_query(&SimConfig::new(Algorithm::FdStr12, seed))?;
            let mut cfg = SimConfig::new(Algorithm::FdStr12Heuristic, seed);
            cfg.heuristic = HeuristicConfig::PositionThreshold { z: 0.8 };
            for q in 0..3 {
                cfg.query_counter = q;
                net.run_query(&cfg)?;
            }
            cfg.query_counter = 3;
            let h = net.run_query(&cfg)?;
            Ok((
                h.report.ac_q,
                1.0 - h.report.total_bytes as f64 / s12.report.total_bytes as f64,
            ))
        })
        .collect::<Result<_>>()?;
    let ac = rows.iter().map(|r| r.0).sum::<f64>() / rows.len() as f64;
    let red = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
    Ok(verdict(
        ac >= 0.85 && red >= 0.25,
        format!("mean acQ {ac:.3}, bytes {:.1}% below str12", 100.0 * red),
    ))
}

fn criterion_9() -> Result<Verdict> {
    let lifetimes = [1.0, 2.0, 4.0, 8.0, 16.0, 60.0];
    let cells: Vec<(usize, f64, f64)> = lifetimes
        .iter()
        .enumerate()
        .flat_map(|(i, _)| (1..=10u64).map(move |s| (i, s)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(i, seed)| -> Result<(usize, f64, f64)> {
            let mut net = network(1000, 2, seed)?;
            let churn = ChurnModel::exponential_minutes(lifetimes[i]);
            let b = net.run_query(&SimConfig {
                churn,
                ..SimConfig::new(Algorithm::FdBasic, seed)
            })?;
            let d = net.run_query(&SimConfig {
                churn,
                ..SimConfig::new(Algorithm::FdDynamic, seed)
            })?;
            Ok((i, b.report.ac_q, d.report.ac_q))
        })
        .collect::<Result<_>>()?;
    let dominated = cells.iter().filter(|c| c.2 >= c.1).count();
    let mut band = true;
    let mut parts = Vec::new();
    for (i, m) in lifetimes.iter().enumerate() {
        let dyn_acs: Vec<f64> = cells.iter().filter(|c| c.0 == i).map(|c| c.2).collect();
        let mean = dyn_acs.iter().sum::<f64>() / dyn_acs.len() as f64;
        if *m >= 4.0 {
            band &= mean >= 0.95;
        }
        parts.push(format!("{m}m {mean:.3}"));
    }
    Ok(verdict(
        dominated == cells.len() && band,
        format!(
            "dynamic >= basic {dominated}/{}; dynamic mean acQ {}",
            cells.len(),
            parts.join(", ")
        ),
    ))
}

fn criterion_10() -> Result<Verdict> {
    let algos = [Algorithm::FdBasic, Algorithm::Cn, Algorithm::CnStar];
    let bws = [28.0, 56.0, 112.0, 224.0];
    let runs: Vec<(usize, [f64; 3])> = bws
        .iter()
        .enumerate()
        .flat_map(|(i, _)| (1..=5u64).map(move |s| (i, s)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(i, seed)| -> Result<(usize, [f64; 3])> {
            let mut net = network(1000, 2, seed)?;
            let mut rt = [0.0; 3];
            for (j, algo) in algos.iter().enumerate() {
                let mut cfg = SimConfig::new(*algo, seed);
                cfg.link.bandwidth_mean_kbps = bws[i];
                rt[j] = net.run_query(&cfg)?.report.response_time_ms;
            }
            Ok((i, rt))
        })
        .collect::<Result<_>>()?;
    let ordered = runs
        .iter()
        .filter(|(_, rt)| rt[0] < rt[1] && rt[0] < rt[2])
        .count();
    let means: Vec<[f64; 3]> = (0..bws.len())
        .map(|i| {
            let cell: Vec<&[f64; 3]> = runs.iter().filter(|r| r.0 == i).map(|r| &r.1).collect();
            std::array::from_fn(|j| cell.iter().map(|r| r[j]).sum::<f64>() / cell.len() as f64)
        })
        .collect();
    let monotone = (0..3).all(|j| means.windows(2).all(|w| w[1][j] <= w[0][j]));
    let fmt = |j: usize| {
        means
            .iter()
            .map(|m| format!("{:.1}", m[j] / 1e3))
            .collect::<Vec<_>>()
            .join("/")
    };
    Ok(verdict(
        ordered == runs.len() && monotone,
        format!(
            "fd fastest {ordered}/{}; mean s at 28/56/112/224 kbps: fd {} cn {} cn* {}",
            runs.len(),
            fmt(0),
            fmt(1),
            fmt(2)
        ),
    ))
}

fn criterion_11() -> Result<Verdict> {
    let mut net = network(300, 2, 11)?;
    let mut same = 0;
    for algo in Algorithm::ALL {
        let cfg = SimConfig {
            churn: ChurnModel::exponential_minutes(2.0),
            ..SimConfig::new(algo, 11)
        };
        // Heuristic statistics are part of the network state.
        net.reset_statistics();
        let a = net.run_query(&cfg)?.report.to_csv_row();
        net.reset_statistics();
        let b = net.run_query(&cfg)?.report.to_csv_row();
        same += usize::from(a == b);
    }
    let cfg = validate_config(
        "sweep.variable = meanLifetime\nsweep.values = 2, 8\nseed.list = 1, 2, 3\nalgo.list = fd-basic, fd-dynamic, fd-str12-h\npeers = 150\n",
    )
    .map_err(|d| fd_topk::Error::InvalidSimConfig(format!("{d:?}")))?;
    let base = std::env::temp_dir().join(format!("fd-topk-acceptance-{}", std::process::id()));
    let csv = |jobs: usize| -> Result<String> {
        let dir = base.join(jobs.to_string());
        let out = run_experiment(
            &cfg,
            &RunOptions {
                out_dir: dir,
                jobs: Some(jobs),
                trace: false,
            },
        )?;
        Ok(std::fs::read_to_string(out.results_path)?)
    };
    let (one, four) = (csv(1)?, csv(4)?);
    let _ = std::fs::remove_dir_all(&base);
    Ok(verdict(
        same == Algorithm::ALL.len() && one == four,
        format!(
            "{same}/{} repeated rows identical; sweep csv identical across --jobs 1/4: {}",
            Algorithm::ALL.len(),
            one == four
        ),
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(u32, &str, Result<Verdict>)> = Vec::new();
    match criteria_1_and_5() {
        Ok((c1, c5)) => {
            results.push((1, "oracle exactness", Ok(c1)));
            results.push((5, "retrieval bound", Ok(c5)));
        }
        Err(e) => {
            results.push((1, "oracle exactness", Err(e)));
        }
    }
    match criteria_2_and_4() {
        Ok((c2, c4)) => {
            results.push((2, "basic forward count", Ok(c2)));
            results.push((4, "backward byte formula", Ok(c4)));
        }
        Err(e) => results.push((2, "basic forward count", Err(e))),
    }
    results.push((3, "strategy forward counts", criterion_3()));
    results.push((6, "k inflation", criterion_6()));
    results.push((7, "strategy 1+2 byte savings", criterion_7()));
    results.push((8, "heuristic z = 0.8", criterion_8()));
    results.push((9, "churn recovery", criterion_9()));
    results.push((10, "response time ordering", criterion_10()));
    results.push((11, "determinism", criterion_11()));
    results.sort_by_key(|r| r.0);

    let mut unexpected = 0;
    for (n, name, res) in results {
        let (pass, detail) = match res {
            Ok(v) => (v.pass, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let tag = if pass { "PASS" } else { "FAIL" };
        let known = !pass && KNOWN_FAILURES.contains(&n);
        if !pass && !known {
            unexpected += 1;
        }
        let note = if known { " [known deviation]" } else { "" };
        println!("criterion {n:>2} {name:<26} {tag}{note}  {detail}");
    }
    println!(
        "acceptance finished in {:.1} s",
        start.elapsed().as_secs_f64()
    );
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
