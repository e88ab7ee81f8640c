//! Sieve primes and Ω, then sweep the explicit prime estimates.

use primseq::primes::{self, sieve_omega, sieve_primes};

fn main() -> primseq::Result<()> {
    let table = sieve_primes(20_000_000)?;
    println!("pi({}) = {}", table.limit(), table.count());
    println!("p_1000 = {}", table.nth(1000)?);

    let n = 1_000_000;
    for report in [
        primes::check_pn_lower(&table, n)?,
        primes::check_pn_upper(&table, n)?,
        primes::check_log_pn(&table, n)?,
        primes::check_bertrand(&table),
    ] {
        let t = report.tightest.unwrap();
        println!(
            "{:<32} {:>8} checked, {} violations, tightest at n = {} ({} vs {})",
            report.name,
            report.checked,
            report.violations.len(),
            t.n,
            t.lhs,
            t.rhs
        );
    }
    for x in [10.0, 1e3, 1e6, 1e7] {
        let c = primes::check_mertens_lower(&table, x)?;
        println!("sum_(p <= {x:e}) 1/p = {:.6} > log log x = {:.6}", c.lhs, c.rhs);
    }

    let omega = sieve_omega(1_000)?;
    let row: Vec<String> = (990..=1000).map(|n| format!("{n}:{}", omega.get(n).unwrap())).collect();
    println!("Omega(n): {}", row.join(" "));
    Ok(())
}
