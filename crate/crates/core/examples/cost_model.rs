//! Closed-form traffic predictions, and k inflation for inaccessible data.

use fd_topk::metrics::{predict_bbw_default, predict_mfw_basic};
use fd_topk::protocol::inflate_k;

fn main() -> fd_topk::Result<()> {
    println!(
        "{:>7} {:>5} {:>10} {:>12}",
        "|P_Q|", "d(G)", "mFw", "bBw (k=20)"
    );
    for n in [1000u64, 2000, 5000, 10_000] {
        for dg in [4.0, 6.0] {
            println!(
                "{n:>7} {dg:>5} {:>10} {:>12}",
                predict_mfw_basic(dg, n as usize),
                predict_bbw_default(20, n)
            );
        }
    }
    println!();
    for p in [0.0, 0.1, 0.3, 0.5] {
        println!("P = {p}: k = 20 is sent as {}", inflate_k(20, p)?);
    }
    Ok(())
}
