//! Two-sided enclosures of S(P, x) and of the truncated P_k sums.
//!
//! ```bash
//! cargo run --release --example erdos_sum -- 1e8
//! ```

use primseq::cli::parse_count;
use primseq::primes::{sieve_omega, sieve_primes};
use primseq::series;

fn main() -> primseq::Result<()> {
    let limit = std::env::args()
        .nth(1)
        .map(|s| parse_count(&s).expect("limit"))
        .unwrap_or(10_000_000);
    let table = sieve_primes(limit)?;
    for x in [0.0, 1.0, 10.0, 363.0] {
        let e = series::prime_series_enclosure(&table, x)?;
        println!(
            "S(P, {x:>5}) in [{:.8}, {:.8}]  (tail {:.3e}, {} terms)",
            e.lower,
            e.upper,
            e.tail_bound.unwrap(),
            e.terms_used
        );
    }

    let omega = sieve_omega(limit.min(10_000_000))?;
    let ks = [1, 2, 3, 4, 5];
    let grid = series::pk_series_grid(&omega, &ks, &[0.0])?;
    for (k, row) in ks.iter().zip(&grid) {
        println!("S(P_{k}, 0) >= {:.6} from n <= {}", row[0].lower, omega.limit());
    }
    Ok(())
}
