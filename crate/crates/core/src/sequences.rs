//! Primitive sequences and the homogeneous families built from primes.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use crate::error::{invalid, Error, Result};
use crate::primes::{OmegaTable, PrimeTable};

/// Default cap on the number of homogeneous products enumerated explicitly.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Outcome of a primitivity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitivity {
    Primitive,
    /// `{1}` is primitive but excluded from every series.
    ExcludedUnit,
    Divisible { divisor: u64, multiple: u64 },
}

impl Primitivity {
    pub fn is_primitive(&self) -> bool {
        !matches!(self, Primitivity::Divisible { .. })
    }
}

fn sorted_distinct(elements: &[u64]) -> Result<Vec<u64>> {
    if elements.is_empty() {
        return Err(invalid("sequence is empty"));
    }
    let mut v = elements.to_vec();
    v.sort_unstable();
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(invalid(format!("duplicate element {}", w[0])));
    }
    if v[0] == 0 {
        return Err(invalid("sequence elements must be positive"));
    }
    Ok(v)
}

// `v` sorted and distinct. A proper divisor of b is at most b/2, so only that
// prefix is scanned for each b.
fn first_divisible_pair(v: &[u64]) -> Option<(u64, u64)> {
    for (j, &b) in v.iter().enumerate() {
        let cut = v[..j].partition_point(|&a| a <= b / 2);
        if let Some(&a) = v[..cut].iter().find(|&&a| b % a == 0) {
            return Some((a, b));
        }
    }
    None
}

/// Full primitivity verdict, distinguishing the excluded sequence `{1}`.
pub fn check_primitive(elements: &[u64]) -> Result<Primitivity> {
    let v = sorted_distinct(elements)?;
    if v == [1] {
        return Ok(Primitivity::ExcludedUnit);
    }
    Ok(match first_divisible_pair(&v) {
        None => Primitivity::Primitive,
        Some((divisor, multiple)) => Primitivity::Divisible { divisor, multiple },
    })
}

/// True iff no element divides another (`{1}` counts as primitive).
pub fn is_primitive(elements: &[u64]) -> Result<bool> {
    check_primitive(elements).map(|p| p.is_primitive())
}

/// A finite primitive sequence of integers ≥ 2, kept in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveSequence {
    elements: Vec<u64>,
}

impl PrimitiveSequence {
    pub fn new(elements: &[u64]) -> Result<Self> {
        let v = sorted_distinct(elements)?;
        if v[0] == 1 {
            return Err(invalid(
                "sequence contains 1; series are defined only for elements >= 2",
            ));
        }
        if let Some((a, b)) = first_divisible_pair(&v) {
            return Err(invalid(format!("not primitive: {a} divides {b}")));
        }
        Ok(Self { elements: v })
    }

    /// Caller guarantees sorted, distinct, ≥ 2 and primitive (e.g. homogeneous).
    pub(crate) fn from_sorted_unchecked(elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    /// The degree-d set over `spec.prime_support`; primitive because homogeneous.
    pub fn homogeneous(spec: &HomogeneousSpec) -> Result<Self> {
        let v = homogeneous_products(spec)?;
        if v.is_empty() {
            return Err(invalid("homogeneous set is empty under the given limit"));
        }
        Ok(Self::from_sorted_unchecked(v))
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max(&self) -> u64 {
        *self.elements.last().expect("non-empty")
    }
}

/// Prime factorization by trial division over the table.
pub fn factorize(n: u64, table: &PrimeTable) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(invalid("cannot factor 0"));
    }
    let mut rest = n;
    let mut out = Vec::new();
    for &p in table.primes() {
        let p = p as u64;
        if p * p > rest {
            break;
        }
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if rest > 1 {
        let lp = table.primes().last().map_or(0, |&p| p as u64);
        // rest is prime once every prime up to √rest has been tried.
        if lp.saturating_mul(lp) < rest || rest > table.limit() {
            return Err(Error::Capability(format!(
                "{n} has a prime factor above the table limit {}",
                table.limit()
            )));
        }
        out.push((rest, 1));
    }
    Ok(out)
}

/// P(A): the primes dividing at least one element.
pub fn prime_support(seq: &PrimitiveSequence, table: &PrimeTable) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for &a in seq.elements() {
        out.extend(factorize(a, table)?.into_iter().map(|(p, _)| p));
    }
    Ok(out)
}

/// The members of P_k = {n : Ω(n) = k} up to `limit`, in increasing order.
pub fn enumerate_pk(
    omega: &OmegaTable,
    k: u8,
    limit: u64,
) -> Result<impl Iterator<Item = u64> + '_> {
    if limit > omega.limit() {
        return Err(Error::Capability(format!(
            "limit {limit} beyond omega table limit {}",
            omega.limit()
        )));
    }
    let cells = &omega.as_slice()[..=limit as usize];
    Ok(cells
        .iter()
        .enumerate()
        .skip(1)
        .filter(move |(_, &w)| w == k)
        .map(|(n, _)| n as u64))
}

/// Products of exactly `degree` primes drawn with repetition from a support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousSpec {
    prime_support: Vec<u64>,
    degree: u32,
    limit: Option<u64>,
}

impl HomogeneousSpec {
    pub fn new(prime_support: Vec<u64>, degree: u32, limit: Option<u64>) -> Result<Self> {
        if prime_support.is_empty() {
            return Err(invalid("prime support is empty"));
        }
        if !prime_support.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("prime support must be strictly increasing"));
        }
        if let Some(&c) = prime_support.iter().find(|&&p| !is_prime_u64(p)) {
            return Err(invalid(format!("{c} in the support is not prime")));
        }
        if degree == 0 {
            return Err(invalid("degree must be at least 1"));
        }
        Ok(Self {
            prime_support,
            degree,
            limit,
        })
    }

    /// Support made of the first `k` primes of the table.
    pub fn first_primes(table: &PrimeTable, k: u64, degree: u32, limit: Option<u64>) -> Result<Self> {
        if k == 0 || k > table.count() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: table.count(),
            });
        }
        if degree == 0 {
            return Err(invalid("degree must be at least 1"));
        }
        let prime_support = table.primes()[..k as usize].iter().map(|&p| p as u64).collect();
        Ok(Self {
            prime_support,
            degree,
            limit,
        })
    }

    pub fn prime_support(&self) -> &[u64] {
        &self.prime_support
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    /// C(k + d − 1, d), or `None` if it does not fit in 128 bits.
    pub fn composition_count(&self) -> Option<u128> {
        composition_count(self.prime_support.len() as u64, self.degree)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Number of multisets of size `d` from `k` kinds: C(k + d − 1, d).
pub fn composition_count(k: u64, d: u32) -> Option<u128> {
    if k == 0 {
        return Some(if d == 0 { 1 } else { 0 });
    }
    let mut c: u128 = 1;
    for i in 1..=d as u128 {
        // c · (k − 1 + i) / i stays integral at every step.
        c = c.checked_mul(k as u128 - 1 + i)? / i;
    }
    Some(c)
}

pub fn homogeneous_products(spec: &HomogeneousSpec) -> Result<Vec<u64>> {
    homogeneous_products_capped(spec, DEFAULT_ENUMERATION_CAP)
}

/// Sorted products `p_{i1} ⋯ p_{id}` with `i1 ≤ ⋯ ≤ id`. Unique factorization
/// makes them distinct, so there are exactly C(k + d − 1, d) before filtering.
pub fn homogeneous_products_capped(spec: &HomogeneousSpec, cap: u64) -> Result<Vec<u64>> {
    if spec.limit.is_none() {
        match spec.composition_count() {
            Some(c) if c <= cap as u128 => {}
            c => {
                return Err(Error::ResourceLimit(format!(
                    "C(k+d-1, d) = {} products exceeds the enumeration cap {cap}",
                    c.map_or_else(|| ">2^128".to_string(), |c| c.to_string())
                )))
            }
        }
    }
    let mut out = Vec::new();
    let mut walk = Walk {
        support: &spec.prime_support,
        limit: spec.limit,
        cap,
        out: &mut out,
    };
    walk.descend(0, spec.degree, 1)?;
    out.sort_unstable();
    Ok(out)
}

struct Walk<'a> {
    support: &'a [u64],
    limit: Option<u64>,
    cap: u64,
    out: &'a mut Vec<u64>,
}

impl Walk<'_> {
    fn descend(&mut self, start: usize, remaining: u32, product: u64) -> Result<()> {
        if remaining == 0 {
            if self.out.len() as u64 >= self.cap {
                return Err(Error::ResourceLimit(format!(
                    "more than {} products under the limit",
                    self.cap
                )));
            }
            self.out.push(product);
            return Ok(());
        }
        for i in start..self.support.len() {
            let p = self.support[i];
            let next = match (product.checked_mul(p), self.limit) {
                (Some(v), Some(l)) if v > l => break,
                (Some(v), _) => v,
                // Overflowing products exceed any u64 limit.
                (None, Some(_)) => break,
                (None, None) => {
                    return Err(Error::Overflow(format!(
                        "product {product} * {p} does not fit in 64 bits"
                    )))
                }
            };
            if let Some(l) = self.limit {
                // every later factor is at least p
                let reach = p.checked_pow(remaining - 1).and_then(|q| next.checked_mul(q));
                if reach.is_none_or(|v| v > l) {
                    break;
                }
            }
            self.descend(i, remaining - 1, next)?;
        }
        Ok(())
    }
}

/// Reads newline-delimited decimal integers; blank lines and `#` comments are skipped.
pub fn read_sequence(reader: impl BufRead) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        let v = t
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("line {}: {t:?}: {e}", i + 1)))?;
        out.push(v);
    }
    Ok(out)
}

pub fn write_sequence(mut writer: impl Write, elements: &[u64]) -> Result<()> {
    for a in elements {
        writeln!(writer, "{a}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{sieve_omega, sieve_primes};

    #[test]
    fn primitivity_examples() {
        assert!(is_primitive(&[2, 3, 5]).unwrap());
        assert!(!is_primitive(&[2, 4]).unwrap());
        assert!(is_primitive(&[6, 10, 15]).unwrap());
        assert_eq!(check_primitive(&[1]).unwrap(), Primitivity::ExcludedUnit);
        assert_eq!(
            check_primitive(&[1, 7]).unwrap(),
            Primitivity::Divisible { divisor: 1, multiple: 7 }
        );
        assert_eq!(
            check_primitive(&[9, 5, 27]).unwrap(),
            Primitivity::Divisible { divisor: 9, multiple: 27 }
        );
    }

    #[test]
    fn primitivity_errors() {
        assert!(matches!(is_primitive(&[]), Err(Error::InvalidArgument(_))));
        assert!(matches!(is_primitive(&[3, 3]), Err(Error::InvalidArgument(_))));
        assert!(PrimitiveSequence::new(&[1]).is_err());
        assert!(PrimitiveSequence::new(&[4, 2]).is_err());
        let s = PrimitiveSequence::new(&[15, 6, 10]).unwrap();
        assert_eq!(s.elements(), &[6, 10, 15]);
    }

    #[test]
    fn support_examples() {
        let t = sieve_primes(100).unwrap();
        let s = |v: &[u64]| {
            prime_support(&PrimitiveSequence::new(v).unwrap(), &t)
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>()
        };
        assert_eq!(s(&[6, 10, 15]), vec![2, 3, 5]);
        assert_eq!(s(&[2]), vec![2]);
        assert_eq!(s(&[49, 121]), vec![7, 11]);
        // 9973 is prime; 97² < 9973 so it is recognisable, but it exceeds the limit.
        let big = PrimitiveSequence::new(&[9973]).unwrap();
        assert!(matches!(prime_support(&big, &t), Err(Error::Capability(_))));
        let far = PrimitiveSequence::new(&[1_000_003 * 2]).unwrap();
        assert!(matches!(prime_support(&far, &t), Err(Error::Capability(_))));
    }

    #[test]
    fn pk_examples() {
        let o = sieve_omega(20).unwrap();
        let v: Vec<u64> = enumerate_pk(&o, 2, 20).unwrap().collect();
        assert_eq!(v, vec![4, 6, 9, 10, 14, 15]);
        assert_eq!(enumerate_pk(&o, 0, 10).unwrap().collect::<Vec<_>>(), vec![1]);
        assert_eq!(
            enumerate_pk(&o, 1, 10).unwrap().collect::<Vec<_>>(),
            vec![2, 3, 5, 7]
        );
        assert!(enumerate_pk(&o, 1, 21).is_err());
    }

    #[test]
    fn homogeneous_examples() {
        let spec = HomogeneousSpec::new(vec![2, 3], 2, None).unwrap();
        assert_eq!(homogeneous_products(&spec).unwrap(), vec![4, 6, 9]);
        let spec = HomogeneousSpec::new(vec![2, 3, 5], 2, None).unwrap();
        assert_eq!(homogeneous_products(&spec).unwrap().len(), 6);
        let spec = HomogeneousSpec::new(vec![2, 3, 5], 1, None).unwrap();
        assert_eq!(homogeneous_products(&spec).unwrap(), vec![2, 3, 5]);
        let spec = HomogeneousSpec::new(vec![2, 3, 5], 3, Some(30)).unwrap();
        assert_eq!(homogeneous_products(&spec).unwrap(), vec![8, 12, 18, 20, 27, 30]);
    }

    #[test]
    fn homogeneous_errors() {
        assert!(HomogeneousSpec::new(vec![], 1, None).is_err());
        assert!(HomogeneousSpec::new(vec![3, 2], 1, None).is_err());
        assert!(HomogeneousSpec::new(vec![2, 4], 1, None).is_err());
        assert!(HomogeneousSpec::new(vec![2], 0, None).is_err());
        let spec = HomogeneousSpec::new(vec![2, 3, 5, 7], 10, None).unwrap();
        assert!(matches!(
            homogeneous_products_capped(&spec, 100),
            Err(Error::ResourceLimit(_))
        ));
        let spec = HomogeneousSpec::new(vec![4_294_967_291], 3, None).unwrap();
        assert!(matches!(homogeneous_products(&spec), Err(Error::Overflow(_))));
    }

    #[test]
    fn composition_counts() {
        assert_eq!(composition_count(3, 2), Some(6));
        assert_eq!(composition_count(5, 4), Some(70));
        assert_eq!(composition_count(2467, 2), Some(3_044_278));
        assert_eq!(composition_count(1, 7), Some(1));
    }

    #[test]
    fn sequence_text_format() {
        let text = "6\n10\n\n# comment\n15\n";
        let v = read_sequence(text.as_bytes()).unwrap();
        assert_eq!(v, vec![6, 10, 15]);
        let mut buf = Vec::new();
        write_sequence(&mut buf, &v).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "6\n10\n15\n");
        assert!(read_sequence("12\nx\n".as_bytes()).is_err());
    }
}
