//! Re-derive the constants of both witness theorems and certify them.

use primseq::optimizer::{self, SearchConfig};

fn main() -> primseq::Result<()> {
    let cfg = SearchConfig::default();

    for cand in optimizer::theorem2_curve(&cfg)?.iter().take(9) {
        match (cand.alpha, cand.c) {
            (Some(a), Some(c)) => println!("d = {:>2}: alpha_max = {a:.8}, c = {c:.4}", cand.d),
            _ => println!("d = {:>2}: infeasible", cand.d),
        }
    }

    let t2 = optimizer::optimize_theorem2(&cfg)?;
    let cert = optimizer::certify(&t2, Some((362.2, 362.5)))?;
    println!("{}", serde_json::to_string_pretty(&cert).unwrap());

    let t1 = optimizer::optimize_theorem1(&cfg)?;
    println!(
        "theorem 1: beta = {:.6}, alpha = {:.7}, c = {:.5}, ceil = {}",
        t1.beta.unwrap(),
        t1.alpha,
        t1.c,
        t1.c.ceil()
    );
    Ok(())
}
