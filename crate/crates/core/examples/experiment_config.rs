//! Parses an inline sweep description and runs it into a temporary directory.

use fd_topk::experiment::{run_experiment, validate_config, RunOptions};

const CONFIG: &str = "\
sweep.variable = nPeers
sweep.values   = 100, 200, 400
algo.list      = fd-basic, fd-str12, cnstar
seed.list      = 1, 2, 3
k              = 10
";

fn main() {
    let cfg = match validate_config(CONFIG) {
        Ok(cfg) => cfg,
        Err(diags) => {
            for d in diags {
                eprintln!("{d}");
            }
            std::process::exit(1);
        }
    };
    let out_dir = std::env::temp_dir().join("fd-topk-example");
    let out = run_experiment(
        &cfg,
        &RunOptions {
            out_dir,
            jobs: None,
            trace: false,
        },
    )
    .unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    for s in &out.summary {
        let (bytes, _) = s.stats[4];
        let (rt, _) = s.stats[5];
        println!(
            "{:>5} peers  {:<9} totalBytes {:>9.0}  response {:>8.1} ms",
            s.sweep_value, s.algorithm, bytes, rt
        );
    }
    println!(
        "wrote {} and {}",
        out.results_path.display(),
        out.summary_path.display()
    );
}
