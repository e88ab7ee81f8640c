//! Two-sided enclosures of `S(A, x) = Σ_{a ∈ A} 1 / (a (log a + x))`.
//!
//! Terms are evaluated in double precision and summed in increasing order of
//! `a` with compensated summation. Each term is charged a worst-case error of
//! four units of `f64::EPSILON` relative to the running total, which gives
//! the budget `4 · m · ε · |sum|` for m terms; it is folded into both ends.
//!
//! Tails over the primes use the bound
//!
//! ```text
//! Σ_{n>k} 1 / (p_n (log p_n + x))  ≤  log(1 + x / log k) / x     (x > 0)
//! ```
//!
//! At x = 0 the same comparison (`p_n ≥ n log n`, `log p_n ≥ log n`, integral
//! test against `1 / (t log² t)`) gives `Σ_{n>k} 1 / (p_n log p_n) ≤ 1 / log k`.
//!
//! For Ω-classes P_k with k ≥ 2 no tail bound is available, so only lower
//! bounds are produced and the upper end is `+∞`.
//!
//! Long sums are cut into fixed-size chunks that are reduced in index order,
//! so results do not depend on the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::primes::{OmegaTable, PrimeTable};
use crate::sequences::PrimitiveSequence;
use crate::summation::NeumaierSum;

const CHUNK: usize = 1 << 16;

// Rounding allowance for evaluating a closed-form tail, relative to its value.
const TAIL_ULPS: f64 = 8.0;

/// Certified interval `[lower, upper]` for a series value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumEnclosure {
    pub lower: f64,
    /// `f64::INFINITY` when no finite upper bound is available.
    pub upper: f64,
    pub terms_used: u64,
    /// Already folded into `lower` and `upper`.
    pub rounding_budget: f64,
    pub tail_bound: Option<f64>,
}

impl SumEnclosure {
    fn from_sum(sum: &NeumaierSum, tail: Option<f64>) -> Self {
        let mid = sum.value();
        let mut budget = sum.rounding_budget();
        let upper = match tail {
            Some(t) => {
                budget += TAIL_ULPS * f64::EPSILON * t;
                mid + t + budget
            }
            None => f64::INFINITY,
        };
        Self {
            lower: mid - budget,
            upper,
            terms_used: sum.terms(),
            rounding_budget: budget,
            tail_bound: tail,
        }
    }

    /// Enclosure of a finite sum (zero tail).
    fn finite(sum: &NeumaierSum) -> Self {
        let mut e = Self::from_sum(sum, Some(0.0));
        e.tail_bound = None;
        e
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn has_upper(&self) -> bool {
        self.upper.is_finite()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// Midpoint of the summed part, before the tail.
    pub fn partial_sum(&self) -> f64 {
        self.lower + self.rounding_budget
    }
}

/// What a series runs over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    ExplicitSequence,
    Primes,
    OmegaClass(u8),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTarget {
    pub kind: SeriesKind,
    pub x: f64,
    pub limit: u64,
}

impl SeriesTarget {
    pub fn new(kind: SeriesKind, x: f64, limit: u64) -> Result<Self> {
        check_x(x)?;
        if limit < 2 {
            return Err(invalid(format!("truncation limit must be at least 2, got {limit}")));
        }
        Ok(Self { kind, x, limit })
    }
}

/// JSON record for one enclosure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnclosureRecord {
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u8>,
    pub x: f64,
    pub limit: u64,
    pub lower: f64,
    /// `null` when no finite upper bound is available.
    pub upper: Option<f64>,
    pub terms_used: u64,
    pub tail_bound: Option<f64>,
    pub rounding_budget: f64,
}

impl EnclosureRecord {
    pub fn new(target: &SeriesTarget, e: &SumEnclosure) -> Self {
        let (name, k) = match target.kind {
            SeriesKind::ExplicitSequence => ("file", None),
            SeriesKind::Primes => ("primes", None),
            SeriesKind::OmegaClass(k) => ("pk", Some(k)),
        };
        Self {
            target: name.to_string(),
            k,
            x: target.x,
            limit: target.limit,
            lower: e.lower,
            upper: e.has_upper().then_some(e.upper),
            terms_used: e.terms_used,
            tail_bound: e.tail_bound,
            rounding_budget: e.rounding_budget,
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(invalid(format!("x must be finite and non-negative, got {x}")));
    }
    Ok(())
}

#[inline]
fn term(a: f64, x: f64) -> f64 {
    1.0 / (a * (a.ln() + x))
}

/// `1 / (a (log a + x))`.
pub fn term_value(a: u64, x: f64) -> Result<f64> {
    if a <= 1 {
        return Err(invalid(format!("series terms need a >= 2, got {a}")));
    }
    check_x(x)?;
    Ok(term(a as f64, x))
}

fn chunked<F>(len: usize, f: F) -> NeumaierSum
where
    F: Fn(std::ops::Range<usize>) -> NeumaierSum + Sync,
{
    let parts: Vec<NeumaierSum> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| f(c * CHUNK..((c + 1) * CHUNK).min(len)))
        .collect();
    let mut total = NeumaierSum::new();
    for p in &parts {
        total.merge(p);
    }
    total
}

/// Compensated sum of the series terms over sorted integers ≥ 2.
fn sum_terms(values: &[u64], x: f64) -> NeumaierSum {
    chunked(values.len(), |r| {
        values[r].iter().map(|&a| term(a as f64, x)).collect()
    })
}

fn sum_prime_terms(primes: &[u32], x: f64) -> NeumaierSum {
    chunked(primes.len(), |r| {
        primes[r].iter().map(|&p| term(p as f64, x)).collect()
    })
}

/// Enclosure of the exact finite sum over a primitive sequence.
pub fn sum_finite(seq: &PrimitiveSequence, x: f64) -> Result<SumEnclosure> {
    check_x(x)?;
    Ok(SumEnclosure::finite(&sum_terms(seq.elements(), x)))
}

/// Enclosure of the plain reciprocal sum Σ 1/a over sorted integers ≥ 1.
pub fn reciprocal_sum(values: &[u64]) -> SumEnclosure {
    let s = chunked(values.len(), |r| {
        values[r].iter().map(|&a| 1.0 / a as f64).collect()
    });
    SumEnclosure::finite(&s)
}

/// Upper bound `log(1 + x / log k) / x` for Σ_{n>k} 1 / (p_n (log p_n + x)).
pub fn lemma1_tail(x: f64, k: u64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("prime tail bound needs x > 0, got {x}")));
    }
    if k < 2 {
        return Err(invalid(format!("prime tail bound needs k >= 2, got {k}")));
    }
    Ok((x / (k as f64).ln()).ln_1p() / x)
}

/// Upper bound `1 / log k` for Σ_{n>k} 1 / (p_n log p_n).
pub fn zero_x_tail(k: u64) -> Result<f64> {
    if k < 2 {
        return Err(invalid(format!("prime tail bound needs k >= 2, got {k}")));
    }
    Ok(1.0 / (k as f64).ln())
}

/// The prime tail bound appropriate for `x`.
pub fn prime_tail(x: f64, k: u64) -> Result<f64> {
    if x == 0.0 {
        zero_x_tail(k)
    } else {
        lemma1_tail(x, k)
    }
}

/// S(P, x): partial sum over the whole table plus the tail bound beyond π(limit).
pub fn prime_series_enclosure(table: &PrimeTable, x: f64) -> Result<SumEnclosure> {
    check_x(x)?;
    if table.count() < 2 {
        return Err(invalid("prime series needs at least two sieved primes"));
    }
    let s = sum_prime_terms(table.primes(), x);
    let tail = prime_tail(x, table.count())?;
    Ok(SumEnclosure::from_sum(&s, Some(tail)))
}

/// Σ_{n ≤ k} 1 / (p_n (log p_n + x)), the first k primes only.
pub fn prime_head_enclosure(table: &PrimeTable, k: u64, x: f64) -> Result<SumEnclosure> {
    check_x(x)?;
    if k > table.count() {
        return Err(crate::Error::IndexOutOfRange {
            index: k,
            len: table.count(),
        });
    }
    Ok(SumEnclosure::finite(&sum_prime_terms(
        &table.primes()[..k as usize],
        x,
    )))
}

/// Lower bound for S(P_k, x) from all n ≤ omega.limit with Ω(n) = k.
///
/// For k = 1 the prime tail bound supplies a finite upper end.
pub fn pk_series_lower(omega: &OmegaTable, k: u8, x: f64) -> Result<SumEnclosure> {
    Ok(pk_series_grid(omega, &[k], &[x])?.remove(0).remove(0))
}

/// [`pk_series_lower`] for every (k, x) pair in one pass over the table.
/// Result is indexed `[k index][x index]`.
pub fn pk_series_grid(omega: &OmegaTable, ks: &[u8], xs: &[f64]) -> Result<Vec<Vec<SumEnclosure>>> {
    for &x in xs {
        check_x(x)?;
    }
    if let Some(&k) = ks.iter().find(|&&k| k == 0) {
        return Err(invalid(format!(
            "P_{k} = {{1}} is excluded; class index must be at least 1"
        )));
    }
    let cells = omega.as_slice();
    let width = ks.len() * xs.len();
    let parts: Vec<Vec<NeumaierSum>> = (0..cells.len().div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![NeumaierSum::new(); width];
            let lo = (c * CHUNK).max(2);
            let hi = ((c + 1) * CHUNK).min(cells.len());
            for (n, &w) in cells.iter().enumerate().take(hi).skip(lo) {
                let Some(ki) = ks.iter().position(|&k| k == w) else {
                    continue;
                };
                let a = n as f64;
                let la = a.ln();
                for (xi, &x) in xs.iter().enumerate() {
                    acc[ki * xs.len() + xi].add(1.0 / (a * (la + x)));
                }
            }
            acc
        })
        .collect();
    let mut total = vec![NeumaierSum::new(); width];
    for p in &parts {
        for (t, s) in total.iter_mut().zip(p) {
            t.merge(s);
        }
    }
    let mut out = Vec::with_capacity(ks.len());
    for (ki, &k) in ks.iter().enumerate() {
        let mut row = Vec::with_capacity(xs.len());
        for (xi, &x) in xs.iter().enumerate() {
            let s = &total[ki * xs.len() + xi];
            let tail = if k == 1 && s.terms() >= 2 {
                Some(prime_tail(x, s.terms())?)
            } else {
                None
            };
            row.push(SumEnclosure::from_sum(s, tail));
        }
        out.push(row);
    }
    Ok(out)
}

/// [`prime_series_enclosure`] at several x values.
pub fn prime_series_grid(table: &PrimeTable, xs: &[f64]) -> Result<Vec<SumEnclosure>> {
    xs.iter().map(|&x| prime_series_enclosure(table, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{sieve_omega, sieve_primes};

    #[test]
    fn term_examples() {
        assert!((term_value(2, 0.0).unwrap() - 0.721_347_520_444_481_7).abs() < 1e-15);
        // 1 / (3 (log 3 + 1))
        assert!((term_value(3, 1.0).unwrap() - 0.158_835_119_346_834_8).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for x in [0.0, 1.0, 10.0, 1e3, 1e9] {
            let t = term_value(2, x).unwrap();
            assert!(t < prev);
            prev = t;
        }
        assert!(term_value(1, 0.0).is_err());
        assert!(term_value(2, -1.0).is_err());
        assert!(term_value(2, f64::NAN).is_err());
    }

    #[test]
    fn finite_sum_examples() {
        let e = sum_finite(&PrimitiveSequence::new(&[2]).unwrap(), 0.0).unwrap();
        assert!(e.contains(0.721_347_520_444_481_7));
        assert!(e.width() <= 2.0 * e.rounding_budget + 4.0 * f64::EPSILON, "{e:?}");
        let e = sum_finite(&PrimitiveSequence::new(&[6, 10, 15]).unwrap(), 0.0).unwrap();
        assert!((e.partial_sum() - 0.161_065_844_153_456_7).abs() < 1e-15);
        let e = sum_finite(&PrimitiveSequence::new(&[4, 6, 9]).unwrap(), 1.0).unwrap();
        assert!((e.partial_sum() - 0.199_216_817_640_802_8).abs() < 1e-15);
    }

    #[test]
    fn tail_examples() {
        assert!((lemma1_tail(1.0, 2).unwrap() - 0.893_101_954_720_708_8).abs() < 1e-15);
        assert!((lemma1_tail(363.0, 5_761_455).unwrap() - 0.008_791_344_971_585_9).abs() < 1e-15);
        let k = 1000;
        let limit = 1.0 / (k as f64).ln();
        assert!((lemma1_tail(1e-9, k).unwrap() - limit).abs() < 1e-9);
        assert!((zero_x_tail(2).unwrap() - std::f64::consts::LOG2_E).abs() < 1e-15);
        assert!((zero_x_tail(5_761_455).unwrap() - 0.064_239_688_639_137_6).abs() < 1e-15);
        assert!(zero_x_tail(3).unwrap() < zero_x_tail(2).unwrap());
        assert!(lemma1_tail(0.0, 2).is_err());
        assert!(lemma1_tail(1.0, 1).is_err());
        assert!(zero_x_tail(1).is_err());
    }

    #[test]
    fn pk_small_example() {
        let o = sieve_omega(20).unwrap();
        let e = pk_series_lower(&o, 2, 0.0).unwrap();
        assert_eq!(e.terms_used, 6);
        assert!(!e.has_upper());
        assert!((e.partial_sum() - 0.419_037_511_737_572_6).abs() < 1e-15);
        assert!(pk_series_lower(&o, 0, 0.0).is_err());
    }

    #[test]
    fn pk_one_agrees_with_primes() {
        let t = sieve_primes(100_000).unwrap();
        let o = sieve_omega(100_000).unwrap();
        for x in [0.0, 3.5] {
            let p = prime_series_enclosure(&t, x).unwrap();
            let q = pk_series_lower(&o, 1, x).unwrap();
            assert_eq!(p.terms_used, q.terms_used);
            assert!((p.lower - q.lower).abs() <= p.rounding_budget + q.rounding_budget);
            assert!((p.upper - q.upper).abs() <= p.rounding_budget + q.rounding_budget);
        }
    }

    #[test]
    fn record_marks_missing_upper_as_null() {
        let o = sieve_omega(20).unwrap();
        let e = pk_series_lower(&o, 2, 0.0).unwrap();
        let t = SeriesTarget::new(SeriesKind::OmegaClass(2), 0.0, 20).unwrap();
        let json = serde_json::to_value(EnclosureRecord::new(&t, &e)).unwrap();
        assert!(json["upper"].is_null());
        assert!(json["tail_bound"].is_null());
        assert_eq!(json["target"], "pk");
        assert_eq!(json["k"], 2);
    }
}
