//! Test primitive sequences against the conjectured upper bounds.

use primseq::primes::{sieve_omega, sieve_primes};
use primseq::sequences::enumerate_pk;
use primseq::witness;
use primseq::PrimitiveSequence;

fn main() -> primseq::Result<()> {
    let table = sieve_primes(1_000_000)?;
    let samples = [vec![6u64, 10, 15], vec![4, 9, 25], vec![2, 9, 15, 25]];
    for v in &samples {
        let seq = PrimitiveSequence::new(v)?;
        let ps = witness::conjecture_ps_check(&seq, &table)?;
        let card = witness::conjecture_card_check(&seq, &table)?;
        let ez = witness::erdos_zhang_partial_check(&seq, 20, &table)?;
        for c in [ps, card, ez] {
            println!("{v:?} {:<20} {:.6} vs {:.6}  {:?}", c.name, c.lhs, c.rhs, c.verdict);
        }
    }

    // The semiprimes up to 10^4 keep the partial sums under those of the primes.
    let omega = sieve_omega(10_000)?;
    let p2: Vec<u64> = enumerate_pk(&omega, 2, 10_000)?.collect();
    let seq = PrimitiveSequence::new(&p2)?;
    for n in [10, 100, 1000, 10_000] {
        let c = witness::erdos_zhang_partial_check(&seq, n, &table)?;
        println!("P_2, n = {n:>5}: {:.6} vs {:.6}  {:?}", c.lhs, c.rhs, c.verdict);
    }
    Ok(())
}
