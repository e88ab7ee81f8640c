//! Prime tables, Ω(n) tables and the explicit prime estimates used by the
//! witness construction.
//!
//! Both tables are produced segment by segment. Segment boundaries depend only
//! on the limit, never on the number of worker threads, so the output is
//! bit-identical at any parallelism degree.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::precise;
use crate::report::{Comparison, SweepReport};
use crate::summation::NeumaierSum;

pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;

/// Primes are stored as `u32`, which caps the sieve limit.
pub const MAX_SIEVE_LIMIT: u64 = u32::MAX as u64;

pub const DEFAULT_MEMORY_BUDGET: u64 = 2 << 30;

// Odd numbers per prime-sieve segment and integers per Ω segment.
const PRIME_SEGMENT: u64 = 1 << 19;
const OMEGA_SEGMENT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Upper bound, in bytes, on the memory a single table may occupy.
    pub memory_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl SieveConfig {
    fn check(&self, what: &str, limit: u64, bytes: u64) -> Result<()> {
        if limit > MAX_SIEVE_LIMIT {
            return Err(Error::ResourceLimit(format!(
                "{what} limit {limit} exceeds the hard cap {MAX_SIEVE_LIMIT}"
            )));
        }
        if bytes > self.memory_budget {
            return Err(Error::ResourceLimit(format!(
                "{what} at limit {limit} needs ~{bytes} bytes, budget is {}",
                self.memory_budget
            )));
        }
        Ok(())
    }
}

/// All primes up to `limit`, with 1-based access `p_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
}

impl PrimeTable {
    pub(crate) fn from_parts(limit: u64, primes: Vec<u32>) -> Self {
        Self { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// π(limit).
    pub fn count(&self) -> u64 {
        self.primes.len() as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// p_n, 1-indexed (p_1 = 2).
    pub fn nth(&self, n: u64) -> Result<u64> {
        if n == 0 || n > self.count() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.count(),
            });
        }
        Ok(self.primes[(n - 1) as usize] as u64)
    }

    /// π(x) for x within the table.
    pub fn pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::Capability(format!(
                "π({x}) requested from a table sieved to {}",
                self.limit
            )));
        }
        Ok(self.primes.partition_point(|&p| (p as u64) <= x) as u64)
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        if n > self.limit {
            return Err(Error::Capability(format!(
                "primality of {n} beyond table limit {}",
                self.limit
            )));
        }
        Ok(n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok())
    }
}

/// Ω(n) for every 1 ≤ n ≤ limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaTable {
    limit: u64,
    // omega[0] is unused and always 0.
    omega: Vec<u8>,
}

impl OmegaTable {
    pub(crate) fn from_parts(limit: u64, omega: Vec<u8>) -> Self {
        Self { limit, omega }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn get(&self, n: u64) -> Option<u8> {
        if n == 0 || n > self.limit {
            None
        } else {
            Some(self.omega[n as usize])
        }
    }

    /// Raw cells, indexed by n (cell 0 unused).
    pub fn as_slice(&self) -> &[u8] {
        &self.omega
    }
}

fn estimated_prime_count(limit: u64) -> u64 {
    if limit < 17 {
        return 7;
    }
    let l = limit as f64;
    // Rosser–Schoenfeld: π(x) < 1.25506 x / ln x.
    (1.25506 * l / l.ln()).ceil() as u64
}

fn small_primes(limit: u64) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with(limit, &SieveConfig::default())
}

/// Segmented odd-only bit sieve of Eratosthenes.
pub fn sieve_primes_with(limit: u64, config: &SieveConfig) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(invalid(format!("sieve limit must be at least 2, got {limit}")));
    }
    let bytes = 4 * estimated_prime_count(limit) + PRIME_SEGMENT / 8 * 8;
    config.check("prime sieve", limit, bytes)?;

    let base: Vec<u32> = small_primes(isqrt(limit))
        .into_iter()
        .filter(|&p| p > 2)
        .collect();

    // Odd numbers 3, 5, 7, ... up to limit; index i stands for 2i + 3.
    let odd_count = if limit >= 3 { (limit - 3) / 2 + 1 } else { 0 };
    let segments = odd_count.div_ceil(PRIME_SEGMENT);

    let chunks: Vec<Vec<u32>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let start = s * PRIME_SEGMENT;
            let len = PRIME_SEGMENT.min(odd_count - start) as usize;
            sieve_odd_segment(&base, start, len)
        })
        .collect();

    let mut primes = Vec::with_capacity(chunks.iter().map(Vec::len).sum::<usize>() + 1);
    primes.push(2);
    for c in chunks {
        primes.extend(c);
    }
    Ok(PrimeTable { limit, primes })
}

fn sieve_odd_segment(base: &[u32], start: u64, len: usize) -> Vec<u32> {
    let lo = 2 * start + 3;
    let hi = lo + 2 * (len as u64 - 1);
    let mut bits = vec![0u64; len.div_ceil(64)];
    for &p in base {
        let p = p as u64;
        if p * p > hi {
            break;
        }
        let mut m = (p * p).max(lo.div_ceil(p) * p);
        if m.is_multiple_of(2) {
            m += p;
        }
        let mut i = ((m - lo) / 2) as usize;
        while i < len {
            bits[i >> 6] |= 1 << (i & 63);
            i += p as usize;
        }
    }
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut free = !word;
        while free != 0 {
            let b = free.trailing_zeros() as usize;
            let i = (w << 6) | b;
            if i >= len {
                break;
            }
            out.push((lo + 2 * i as u64) as u32);
            free &= free - 1;
        }
    }
    out
}

pub fn nth_prime(table: &PrimeTable, n: u64) -> Result<u64> {
    table.nth(n)
}

pub fn sieve_omega(limit: u64) -> Result<OmegaTable> {
    sieve_omega_with(limit, &SieveConfig::default())
}

/// Ω(n) by dividing out every base prime p ≤ √limit segment by segment; the
/// cofactor left over is 1 or a single prime.
pub fn sieve_omega_with(limit: u64, config: &SieveConfig) -> Result<OmegaTable> {
    if limit < 1 {
        return Err(invalid("omega table limit must be at least 1"));
    }
    let bytes = limit + 1 + (OMEGA_SEGMENT as u64) * 4 * rayon::current_num_threads() as u64;
    config.check("omega sieve", limit, bytes)?;

    let base = small_primes(isqrt(limit));
    let mut omega = vec![0u8; limit as usize + 1];
    omega
        .par_chunks_mut(OMEGA_SEGMENT)
        .enumerate()
        .for_each(|(s, cells)| {
            let lo = (s * OMEGA_SEGMENT) as u64;
            omega_segment(&base, lo, cells);
        });
    omega[0] = 0;
    Ok(OmegaTable { limit, omega })
}

fn omega_segment(base: &[u32], lo: u64, cells: &mut [u8]) {
    let hi = lo + cells.len() as u64; // exclusive
    let mut rest: Vec<u32> = (lo..hi).map(|n| n as u32).collect();
    for &p in base {
        let p = p as u64;
        let mut m = lo.div_ceil(p).max(1) * p;
        while m < hi {
            let i = (m - lo) as usize;
            let mut r = rest[i];
            loop {
                r /= p as u32;
                cells[i] += 1;
                if !r.is_multiple_of(p as u32) {
                    break;
                }
            }
            rest[i] = r;
            m += p;
        }
    }
    for (c, &r) in cells.iter_mut().zip(&rest) {
        if r > 1 {
            *c += 1;
        }
    }
}

fn check_range(table: &PrimeTable, first: u64, n_max: u64) -> Result<()> {
    if n_max > table.count() {
        return Err(Error::IndexOutOfRange {
            index: n_max,
            len: table.count(),
        });
    }
    if n_max < first {
        return Err(invalid(format!("n_max must be at least {first}, got {n_max}")));
    }
    Ok(())
}

// Near-ties are re-decided in extended precision.
fn near_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// p_n ≥ n log n for 2 ≤ n ≤ n_max.
pub fn check_pn_lower(table: &PrimeTable, n_max: u64) -> Result<SweepReport> {
    check_range(table, 2, n_max)?;
    let mut report = SweepReport::new("p_n >= n log n", 2, n_max);
    for n in 2..=n_max {
        let p = table.primes[(n - 1) as usize] as f64;
        let nf = n as f64;
        let bound = nf * nf.ln();
        let mut holds = p >= bound;
        if near_tie(p, bound) {
            let nb = precise::from_u64(n, precise::BITS);
            let hb = &nb * nb.ln();
            holds = precise::from_f64(p, precise::BITS) >= hb;
        }
        report.record(n, p, bound, p - bound, holds);
    }
    Ok(report)
}

/// p_n ≤ n (log n + log log n) for 6 ≤ n ≤ n_max.
pub fn check_pn_upper(table: &PrimeTable, n_max: u64) -> Result<SweepReport> {
    check_range(table, 6, n_max)?;
    let mut report = SweepReport::new("p_n <= n (log n + log log n)", 6, n_max);
    for n in 6..=n_max {
        let p = table.primes[(n - 1) as usize] as f64;
        let nf = n as f64;
        let ln = nf.ln();
        let bound = nf * (ln + ln.ln());
        let mut holds = p <= bound;
        if near_tie(p, bound) {
            let nb = precise::from_u64(n, precise::BITS);
            let l = nb.ln();
            let hb = &nb * (&l + l.ln());
            holds = precise::from_f64(p, precise::BITS) <= hb;
        }
        report.record(n, p, bound, bound - p, holds);
    }
    Ok(report)
}

/// log n ≤ log p_n ≤ 2 log n for 2 ≤ n ≤ n_max. Reported lhs/rhs are
/// log p_n and the side of the sandwich with the smaller slack.
pub fn check_log_pn(table: &PrimeTable, n_max: u64) -> Result<SweepReport> {
    check_range(table, 2, n_max)?;
    let mut report = SweepReport::new("log n <= log p_n <= 2 log n", 2, n_max);
    for n in 2..=n_max {
        let p = table.primes[(n - 1) as usize] as u64;
        let lp = (p as f64).ln();
        let ln = (n as f64).ln();
        // Integer forms: n ≤ p_n and p_n ≤ n², exact.
        let holds = n <= p && (p as u128) <= (n as u128) * (n as u128);
        let (bound, slack) = if lp - ln <= 2.0 * ln - lp {
            (ln, lp - ln)
        } else {
            (2.0 * ln, 2.0 * ln - lp)
        };
        report.record(n, lp, bound, slack, holds);
    }
    Ok(report)
}

/// Bertrand's postulate on consecutive sieved primes: p_{n+1} < 2 p_n.
pub fn check_bertrand(table: &PrimeTable) -> SweepReport {
    let count = table.count();
    let mut report = SweepReport::new("p_{n+1} < 2 p_n", 1, count.saturating_sub(1));
    for (i, w) in table.primes.windows(2).enumerate() {
        let (p, q) = (w[0] as u64, w[1] as u64);
        let bound = 2 * p;
        report.record(i as u64 + 1, q as f64, bound as f64, (bound - q) as f64, q < bound);
    }
    report
}

/// Σ_{p ≤ x} 1/p against log log x.
pub fn check_mertens_lower(table: &PrimeTable, x: f64) -> Result<Comparison> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(invalid(format!("Mertens bound needs x > 1, got {x}")));
    }
    if x > table.limit as f64 {
        return Err(Error::Capability(format!(
            "x = {x} beyond table limit {}",
            table.limit
        )));
    }
    let s: NeumaierSum = table
        .primes
        .iter()
        .take_while(|&&p| (p as f64) <= x)
        .map(|&p| 1.0 / p as f64)
        .collect();
    let lhs = s.value();
    let rhs = x.ln().ln();
    Ok(Comparison::new(lhs, rhs, lhs - s.rounding_budget() > rhs))
}
