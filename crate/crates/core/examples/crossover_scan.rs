//! Scan where truncated P_k sums overtake S(P, x).
//!
//! At desk-scale limits no row separates: the truncated P_k sums stay below
//! the prime series, and without an upper end for them nothing follows.

use primseq::cli::{scan_rows, write_scan_csv, ScanVerdict};
use primseq::primes::{sieve_omega, sieve_primes};

fn main() -> primseq::Result<()> {
    let limit = 10_000_000;
    let table = sieve_primes(limit)?;
    let omega = sieve_omega(limit)?;
    let xs: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).chain([10.0, 363.0]).collect();
    let rows = scan_rows(&table, &omega, &xs, &[1, 2, 3, 4, 5])?;
    write_scan_csv(std::io::stdout().lock(), &rows)?;

    match rows.iter().find(|r| r.verdict == ScanVerdict::PkExceedsP) {
        Some(r) => eprintln!("first certified crossing: x = {}, k = {}", r.x, r.k),
        None => eprintln!("no certified crossing at limit {limit}"),
    }
    Ok(())
}
