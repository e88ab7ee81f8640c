//! Build the homogeneous witness for small parameters and walk its proof chain.
//!
//! ```bash
//! cargo run --release --example homogeneous_witness -- 0.5 20 2
//! ```

use primseq::primes::sieve_primes;
use primseq::witness::{self, KLookup, WitnessParams};

fn main() -> primseq::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("number"));
    let alpha = args.next().unwrap_or(0.5);
    let x = args.next().unwrap_or(20.0);
    let d = args.next().unwrap_or(2.0) as u32;

    let table = sieve_primes(10_000_000)?;
    if let KLookup::Materialized { k, p_k, p_next, .. } = witness::materialize_k(&table, alpha, x)? {
        println!("k = {k}: p_k = {p_k} <= e^{} < {p_next}", alpha * x);
    }
    println!("F(d, alpha) = {:.6}", witness::star_prime_lhs(d, alpha)?);

    let params = WitnessParams::theorem2(x, alpha, d)?;
    let report = witness::verify_chain(&params, &table)?;
    for e in &report.entries {
        println!(
            "{:<24} {:>12.6} vs {:>12.6}  {:<5} {:?}",
            e.name, e.lhs, e.rhs, e.pass, e.mode
        );
    }
    println!("verdict: {:?}", report.verdict);

    let large = WitnessParams::theorem2(363.0, 0.41154, 5)?;
    let report = witness::verify_chain(&large, &table)?;
    println!("x = 363, d = 5: {:?}", report.verdict);
    Ok(())
}
