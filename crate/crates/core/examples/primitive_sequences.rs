//! Primitivity checks, prime support and the sequence file format.

use primseq::primes::sieve_primes;
use primseq::sequences::{self, check_primitive, prime_support, read_sequence, write_sequence};
use primseq::series::{self, sum_finite};
use primseq::PrimitiveSequence;

fn main() -> primseq::Result<()> {
    for v in [vec![6u64, 10, 15], vec![2, 3, 9], vec![4, 6, 9, 10, 14, 15]] {
        println!("{v:?}: {:?}", check_primitive(&v)?);
    }

    let seq = PrimitiveSequence::new(&[6, 10, 15, 77])?;
    let table = sieve_primes(1_000)?;
    println!("P(A) = {:?}", prime_support(&seq, &table)?);
    for x in [0.0, 1.0, 10.0] {
        let e = sum_finite(&seq, x)?;
        println!("S(A, {x}) = {:.15} +- {:.1e}", e.partial_sum(), e.rounding_budget);
    }
    println!("term(2, 0) = {}", series::term_value(2, 0.0)?);

    let mut buf = Vec::new();
    write_sequence(&mut buf, seq.elements())?;
    let back = read_sequence(&buf[..])?;
    assert_eq!(back, seq.elements());
    println!("round trip through the text format: {} lines", back.len());

    match PrimitiveSequence::new(&[1, 5]) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    println!("degree-3 products over 24 primes: {:?}", sequences::composition_count(24, 3));
    Ok(())
}
