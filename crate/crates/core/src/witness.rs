//! The homogeneous witness construction.
//!
//! Given α > 0 and an instance x, let p_k be the largest prime ≤ e^{αx} and
//! let A be the set of all products of exactly d primes from p_1..p_k. A is
//! homogeneous, hence primitive, and
//!
//! ```text
//! S(A, x) > F(d, α) · S(P, x),   F(d, α) = e^{d−1} / (√d (dα + 1)(d + (1 + α) log(1 + 3/α)))
//! ```
//!
//! as soon as αx ≥ e^d + log 2. Two parameterizations are supported:
//!
//! * [`Mode::Theorem1`]: d = ⌊log λ + (5/2) log log(λ + 2) + β⌋ with
//!   c α ≥ e^β + log 2, β ≥ 5/2 and x ≥ c λ (log(λ + 2))^{5/2};
//! * [`Mode::Theorem2`]: integer d directly, λ = 1, c α ≥ e^d + log 2 and x ≥ c.
//!
//! [`verify_chain`] evaluates every intermediate inequality of the argument for
//! one concrete parameter set. For realistic parameters e^{αx} is astronomically
//! large; the enumeration-dependent steps are then reported as skipped rather
//! than passed.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::precise::{self, Big};
use crate::primes::PrimeTable;
use crate::report::{Comparison, SweepReport};
use crate::sequences::{
    homogeneous_products_capped, prime_support, HomogeneousSpec, PrimitiveSequence,
    DEFAULT_ENUMERATION_CAP,
};
use crate::series::{self, SumEnclosure};
use crate::summation::NeumaierSum;

const LN_2: f64 = std::f64::consts::LN_2;

// Distance from an integer below which the floor in `compute_d` is re-decided
// in extended precision.
const FLOOR_GUARD: f64 = 1e-9;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

fn check_d(d: u32) -> Result<()> {
    if d == 0 {
        return Err(invalid("d must be a positive integer"));
    }
    Ok(())
}

/// d = ⌊log λ + (5/2) log log(λ + 2) + β⌋.
pub fn compute_d(lambda: f64, beta: f64) -> Result<i64> {
    if !(lambda >= 1.0) || !lambda.is_finite() || !beta.is_finite() {
        return Err(invalid(format!(
            "compute_d needs finite lambda >= 1 and finite beta, got ({lambda}, {beta})"
        )));
    }
    let v = lambda.ln() + 2.5 * (lambda + 2.0).ln().ln() + beta;
    let f = v.floor();
    if v - f > FLOOR_GUARD && f + 1.0 - v > FLOOR_GUARD {
        return Ok(f as i64);
    }
    let bits = 160;
    let l = precise::from_f64(lambda, bits);
    let two = precise::from_u64(2, bits);
    let ll = (&l + &two).ln().ln();
    let half5 = precise::from_f64(2.5, bits);
    let hv = l.ln() + half5 * ll + precise::from_f64(beta, bits);
    Ok(precise::floor_i64(&hv))
}

/// Left side of (★): e^{β−2} / (√(β+1) ((β+1)α + 1) (β + 1 + (1+α) log(1 + 3/α))).
pub fn star_lhs(alpha: f64, beta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(invalid(format!("beta must exceed -1, got {beta}")));
    }
    let b1 = beta + 1.0;
    let g = (1.0 + alpha) * (3.0 / alpha).ln_1p();
    Ok((beta - 2.0).exp() / (b1.sqrt() * (b1 * alpha + 1.0) * (b1 + g)))
}

/// Left side of (★)′, equal to the factor F(d, α) in the final estimate.
pub fn star_prime_lhs(d: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_d(d)?;
    let df = d as f64;
    let g = (1.0 + alpha) * (3.0 / alpha).ln_1p();
    Ok((df - 1.0).exp() / (df.sqrt() * (df * alpha + 1.0) * (df + g)))
}

/// [`star_lhs`] evaluated with `bits` of precision.
pub fn star_lhs_precise(alpha: f64, beta: f64, bits: usize) -> Result<Big> {
    star_lhs(alpha, beta)?;
    let a = precise::from_f64(alpha, bits);
    let b = precise::from_f64(beta, bits);
    let one = precise::from_u64(1, bits);
    let b1 = &b + &one;
    let g = (&one + &a) * (&one + precise::from_u64(3, bits) / &a).ln();
    let num = (&b - precise::from_u64(2, bits)).exp();
    Ok(num / (b1.sqrt() * (&b1 * &a + &one) * (&b1 + g)))
}

/// [`star_prime_lhs`] evaluated with `bits` of precision.
pub fn star_prime_lhs_precise(d: u32, alpha: f64, bits: usize) -> Result<Big> {
    star_prime_lhs(d, alpha)?;
    let a = precise::from_f64(alpha, bits);
    let dd = precise::from_u64(d as u64, bits);
    let one = precise::from_u64(1, bits);
    let g = (&one + &a) * (&one + precise::from_u64(3, bits) / &a).ln();
    let num = (&dd - &one).exp();
    Ok(num / (dd.sqrt() * (&dd * &a + &one) * (&dd + g)))
}

/// c = (e^β + log 2) / α.
pub fn c_from_beta(alpha: f64, beta: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((beta.exp() + LN_2) / alpha)
}

/// c = (e^d + log 2) / α.
pub fn c_from_d(alpha: f64, d: u32) -> Result<f64> {
    check_alpha(alpha)?;
    check_d(d)?;
    Ok(((d as f64).exp() + LN_2) / alpha)
}

pub fn c_from_d_precise(alpha: f64, d: u32, bits: usize) -> Result<Big> {
    c_from_d(alpha, d)?;
    let e = precise::from_u64(d as u64, bits).exp();
    Ok((e + precise::ln2(bits)) / precise::from_f64(alpha, bits))
}

pub fn c_from_beta_precise(alpha: f64, beta: f64, bits: usize) -> Result<Big> {
    c_from_beta(alpha, beta)?;
    let e = precise::from_f64(beta, bits).exp();
    Ok((e + precise::ln2(bits)) / precise::from_f64(alpha, bits))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Theorem1 { beta: f64 },
    Theorem2,
}

/// One concrete instance of the construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessParams {
    pub lambda: f64,
    pub x: f64,
    pub alpha: f64,
    #[serde(flatten)]
    pub mode: Mode,
    pub d: u32,
    pub c: f64,
    /// log of the prime threshold, α·x.
    pub k_threshold: f64,
    pub k: Option<u64>,
}

impl WitnessParams {
    /// Theorem-1 parameters; c defaults to ⌈(e^β + log 2)/α⌉.
    pub fn theorem1(lambda: f64, x: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_x(x)?;
        let d = compute_d(lambda, beta)?;
        if d < 1 {
            return Err(Error::ConstructionFailure(format!(
                "degree d = {d} from (lambda, beta) = ({lambda}, {beta}) is not positive"
            )));
        }
        let c = c_from_beta(alpha, beta)?.ceil();
        Ok(Self {
            lambda,
            x,
            alpha,
            mode: Mode::Theorem1 { beta },
            d: d as u32,
            c,
            k_threshold: alpha * x,
            k: None,
        })
    }

    /// Theorem-2 parameters (λ = 1); c defaults to ⌈(e^d + log 2)/α⌉.
    pub fn theorem2(x: f64, alpha: f64, d: u32) -> Result<Self> {
        check_alpha(alpha)?;
        check_x(x)?;
        let c = c_from_d(alpha, d)?.ceil();
        Ok(Self {
            lambda: 1.0,
            x,
            alpha,
            mode: Mode::Theorem2,
            d,
            c,
            k_threshold: alpha * x,
            k: None,
        })
    }

    pub fn with_c(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(invalid(format!("c must be positive, got {c}")));
        }
        self.c = c;
        Ok(self)
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(invalid(format!("x must be positive, got {x}")));
    }
    Ok(())
}

/// Result of locating p_k ≤ e^{αx} < p_{k+1} in a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum KLookup {
    Materialized {
        k: u64,
        p_k: u64,
        p_next: u64,
        bertrand: bool,
    },
    OutOfRange {
        log_threshold: f64,
    },
}

/// Finds k with p_k ≤ e^{αx} < p_{k+1}, or reports the threshold as beyond the table.
pub fn materialize_k(table: &PrimeTable, alpha: f64, x: f64) -> Result<KLookup> {
    check_alpha(alpha)?;
    check_x(x)?;
    let log_t = alpha * x;
    if log_t < LN_2 {
        return Err(Error::ConstructionFailure(format!(
            "e^(alpha x) = e^{log_t} < 2: no prime below the threshold"
        )));
    }
    if log_t > (table.limit() as f64).ln() {
        return Ok(KLookup::OutOfRange { log_threshold: log_t });
    }
    let t = log_t.exp();
    let mut floor_t = t.floor();
    if (t - floor_t).min(floor_t + 1.0 - t) < 1e-6 {
        let bits = 128;
        let ht = (precise::from_f64(alpha, bits) * precise::from_f64(x, bits)).exp();
        floor_t = precise::to_f64(&ht.floor());
    }
    let floor_t = floor_t as u64;
    if floor_t > table.limit() {
        return Ok(KLookup::OutOfRange { log_threshold: log_t });
    }
    let k = table.pi(floor_t)?;
    if k < 2 {
        return Err(Error::ConstructionFailure(format!(
            "k = {k} but the construction needs k >= 2 (threshold e^{log_t})"
        )));
    }
    if k == table.count() {
        // p_{k+1} lies beyond the table.
        return Ok(KLookup::OutOfRange { log_threshold: log_t });
    }
    let p_k = table.nth(k)?;
    let p_next = table.nth(k + 1)?;
    Ok(KLookup::Materialized {
        k,
        p_k,
        p_next,
        bertrand: p_next < 2 * p_k,
    })
}

/// Σ_{a ∈ A} 1/a over the degree-d products against (1/d!)(Σ 1/p)^d.
pub fn multinomial_lower_check(support: &[u64], d: u32) -> Result<Comparison> {
    multinomial_lower_check_capped(support, d, DEFAULT_ENUMERATION_CAP)
}

pub fn multinomial_lower_check_capped(support: &[u64], d: u32, cap: u64) -> Result<Comparison> {
    let spec = HomogeneousSpec::new(support.to_vec(), d, None)?;
    let products = homogeneous_products_capped(&spec, cap)?;
    let lhs = series::reciprocal_sum(&products).partial_sum();
    let s = series::reciprocal_sum(spec.prime_support()).partial_sum();
    let rhs = s.powi(d as i32) / factorial(d);
    Ok(Comparison::new(lhs, rhs, lhs >= rhs))
}

fn factorial(d: u32) -> f64 {
    (1..=d).map(f64::from).product()
}

/// log n! ≤ n log n + 1 − n + (1/2) log n for 1 ≤ n ≤ n_max.
pub fn lemma2_check(n_max: u64) -> Result<SweepReport> {
    if n_max < 1 {
        return Err(invalid("n_max must be at least 1"));
    }
    let mut report = SweepReport::new("n! <= n^n e^(1-n) sqrt(n)", 1, n_max);
    let mut log_fact = NeumaierSum::new();
    for n in 1..=n_max {
        let nf = n as f64;
        let ln = nf.ln();
        log_fact.add(ln);
        let lhs = log_fact.value();
        let rhs = nf * ln + 1.0 - nf + 0.5 * ln;
        report.record(n, lhs, rhs, rhs - lhs, lhs <= rhs);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryMode {
    VerifiedNumerically,
    VerifiedSymbolically,
    SkippedOutOfRange,
    /// An earlier hypothesis failed, so this step was not evaluated.
    SkippedPrecondition,
}

impl EntryMode {
    pub fn evaluated(self) -> bool {
        matches!(self, EntryMode::VerifiedNumerically | EntryMode::VerifiedSymbolically)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryRole {
    /// A hypothesis of the theorem for this instance.
    Hypothesis,
    /// A step that must hold whenever the hypotheses do.
    Chain,
    /// The parameter constraint that makes the final factor reach λ.
    Constraint,
    /// The theorem's conclusion measured directly on the witness.
    Conclusion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainEntry {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
    pub mode: EntryMode,
    pub role: EntryRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainVerdict {
    /// Everything was evaluated and holds.
    Verified,
    /// Everything evaluated holds; enumeration-dependent steps were out of range.
    VerifiedSymbolically,
    /// Hypotheses and chain hold but the constraint or conclusion fails here.
    ConstraintUnmet,
    HypothesisFailed,
    /// A step that should follow from the hypotheses failed.
    ChainFailed,
}

impl ChainVerdict {
    pub fn is_hard_failure(self) -> bool {
        matches!(self, ChainVerdict::HypothesisFailed | ChainVerdict::ChainFailed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub params: WitnessParams,
    pub entries: Vec<ChainEntry>,
    pub verdict: ChainVerdict,
}

impl WitnessReport {
    pub fn entry(&self, name: &str) -> Option<&ChainEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Evaluated entries that do not hold.
    pub fn failures(&self) -> Vec<&ChainEntry> {
        self.entries
            .iter()
            .filter(|e| e.mode.evaluated() && !e.pass)
            .collect()
    }
}

struct Entries {
    list: Vec<ChainEntry>,
    blocked: bool,
}

impl Entries {
    fn push(&mut self, name: &str, lhs: f64, rhs: f64, pass: bool, mode: EntryMode, role: EntryRole) {
        let (pass, mode) = if self.blocked && role != EntryRole::Hypothesis {
            (false, EntryMode::SkippedPrecondition)
        } else {
            (pass, mode)
        };
        self.list.push(ChainEntry {
            name: name.to_string(),
            lhs,
            rhs,
            pass,
            mode,
            role,
        });
    }

    fn skip(&mut self, name: &str, role: EntryRole) {
        self.push(name, f64::NAN, f64::NAN, false, EntryMode::SkippedOutOfRange, role);
    }
}

/// [`verify_chain_capped`] with the default enumeration cap.
pub fn verify_chain(params: &WitnessParams, table: &PrimeTable) -> Result<WitnessReport> {
    verify_chain_capped(params, table, DEFAULT_ENUMERATION_CAP)
}

/// Evaluates each step of the witness argument for one parameter set.
///
/// Formula-level steps are always evaluated. Steps that need p_1..p_k run only
/// when e^{αx} falls inside `table`; the explicit witness set is enumerated
/// only when it has at most `cap` elements.
///
/// ```text
/// C1, C1', C2, x-range     hypotheses on (c, α, β or d, λ, x)
/// alpha-x                  αx ≥ e^d + log 2
/// d-bound                  d < (β + 1) log(λ + 2)
/// star, star'              the parameter constraint, left side ≥ 1
/// factor-gt-lambda         F(d, α) > λ · (left side of star)
/// k-bracket, bertrand      p_k ≤ e^{αx} < p_{k+1} < 2 p_k
/// log-pk-le-alpha-x        log p_k ≤ αx
/// alpha-x-lt-3-log-k       αx < 3 log k
/// reciprocal-sum-gt-d      Σ_{n≤k} 1/p_n > d
/// head-fraction            Σ_{n≤k} 1/(p_n(log p_n + x)) > d/(d + (1+α) log(1+3/α)) · S(P, x)
/// max-element              log max A = d log p_k ≤ dαx
/// multinomial              Σ_A 1/a > d^{d−1}/d! · Σ_{n≤k} 1/p_n
/// witness-factor           S(A, x) > F(d, α) · S(P, x)
/// witness-exceeds-primes   S(A, x) > λ · S(P, x)
/// ```
pub fn verify_chain_capped(params: &WitnessParams, table: &PrimeTable, cap: u64) -> Result<WitnessReport> {
    use EntryMode::{VerifiedNumerically as Num, VerifiedSymbolically as Sym};
    use EntryRole::{Chain, Conclusion, Constraint, Hypothesis};

    let WitnessParams {
        lambda, x, alpha, c, d, ..
    } = *params;
    check_alpha(alpha)?;
    check_x(x)?;
    check_d(d)?;
    if !(lambda >= 1.0) {
        return Err(invalid(format!("lambda must be at least 1, got {lambda}")));
    }
    if matches!(params.mode, Mode::Theorem2) && lambda != 1.0 {
        return Err(invalid("theorem-2 mode fixes lambda = 1"));
    }
    let df = d as f64;
    let log_t = alpha * x;
    let mut e = Entries {
        list: Vec::new(),
        blocked: false,
    };

    // Hypotheses.
    let scale = match params.mode {
        Mode::Theorem1 { beta } => {
            let rhs = beta.exp() + LN_2;
            e.push("C1", c * alpha, rhs, c * alpha >= rhs, Sym, Hypothesis);
            e.push("C2", beta, 2.5, beta >= 2.5, Sym, Hypothesis);
            lambda * (lambda + 2.0).ln().powf(2.5)
        }
        Mode::Theorem2 => {
            let rhs = df.exp() + LN_2;
            e.push("C1'", c * alpha, rhs, c * alpha >= rhs, Sym, Hypothesis);
            1.0
        }
    };
    e.push("x-range", x, c * scale, x >= c * scale, Sym, Hypothesis);
    e.blocked = e.list.iter().any(|en| !en.pass);

    // Formula-level consequences.
    let margin = df.exp() + LN_2;
    e.push("alpha-x", log_t, margin, log_t >= margin, Sym, Chain);
    let factor = star_prime_lhs(d, alpha)?;
    match params.mode {
        Mode::Theorem1 { beta } => {
            let bound = (beta + 1.0) * (lambda + 2.0).ln();
            e.push("d-bound", df, bound, df < bound, Sym, Chain);
            let star = star_lhs(alpha, beta)?;
            e.push("star", star, 1.0, star >= 1.0, Sym, Constraint);
            let rhs = lambda * star;
            e.push("factor-gt-lambda", factor, rhs, factor > rhs, Sym, Chain);
        }
        Mode::Theorem2 => {
            e.push("star'", factor, 1.0, factor >= 1.0, Sym, Constraint);
        }
    }

    let lookup = if e.blocked {
        None
    } else {
        Some(materialize_k(table, alpha, x)?)
    };
    let mut out_params = params.clone();

    const ENUMERATED: [(&str, EntryRole); 11] = [
        ("k>=2", Chain),
        ("k-bracket", Chain),
        ("bertrand", Chain),
        ("log-pk-le-alpha-x", Chain),
        ("alpha-x-lt-3-log-k", Chain),
        ("reciprocal-sum-gt-d", Chain),
        ("head-fraction", Chain),
        ("max-element", Chain),
        ("multinomial", Chain),
        ("witness-factor", Chain),
        ("witness-exceeds-primes", Conclusion),
    ];

    match lookup {
        None | Some(KLookup::OutOfRange { .. }) => {
            for (name, role) in ENUMERATED {
                e.skip(name, role);
            }
        }
        Some(KLookup::Materialized {
            k,
            p_k,
            p_next,
            bertrand,
        }) => {
            out_params.k = Some(k);
            let kf = k as f64;
            let lpk = (p_k as f64).ln();
            let lpn = (p_next as f64).ln();
            e.push("k>=2", kf, 2.0, k >= 2, Num, Chain);
            e.push("k-bracket", log_t, lpn, lpk <= log_t && log_t < lpn, Num, Chain);
            e.push("bertrand", p_next as f64, 2.0 * p_k as f64, bertrand, Num, Chain);
            e.push("log-pk-le-alpha-x", lpk, log_t, lpk <= log_t, Num, Chain);
            let three_log_k = 3.0 * kf.ln();
            e.push("alpha-x-lt-3-log-k", log_t, three_log_k, log_t < three_log_k, Num, Chain);

            let primes: Vec<u64> = table.primes()[..k as usize].iter().map(|&p| p as u64).collect();
            let recip = series::reciprocal_sum(&primes);
            e.push("reciprocal-sum-gt-d", recip.lower, df, recip.lower > df, Num, Chain);

            let head = series::prime_head_enclosure(table, k, x)?;
            let total = series::prime_series_enclosure(table, x)?;
            let head_factor = df / (df + (1.0 + alpha) * (3.0 / alpha).ln_1p());
            let rhs = head_factor * total.upper;
            e.push("head-fraction", head.lower, rhs, head.lower > rhs, Num, Chain);

            let log_max = df * lpk;
            e.push("max-element", log_max, df * log_t, log_max <= df * log_t, Num, Chain);

            match witness_sums(table, k, d, x, cap)? {
                None => {
                    e.skip("multinomial", Chain);
                    e.skip("witness-factor", Chain);
                    e.skip("witness-exceeds-primes", Conclusion);
                }
                Some((recip_a, series_a)) => {
                    let coef = df.powi(d as i32 - 1) / factorial(d);
                    let rhs = coef * recip.upper;
                    e.push("multinomial", recip_a.lower, rhs, recip_a.lower > rhs, Num, Chain);
                    let rhs = factor * total.upper;
                    e.push("witness-factor", series_a.lower, rhs, series_a.lower > rhs, Num, Chain);
                    let rhs = lambda * total.upper;
                    e.push(
                        "witness-exceeds-primes",
                        series_a.lower,
                        rhs,
                        series_a.lower > rhs,
                        Num,
                        Conclusion,
                    );
                }
            }
        }
    }

    let verdict = verdict_of(&e.list);
    Ok(WitnessReport {
        params: out_params,
        entries: e.list,
        verdict,
    })
}

// Σ 1/a and S(A, x) over the explicit witness set, if it fits under the cap.
fn witness_sums(
    table: &PrimeTable,
    k: u64,
    d: u32,
    x: f64,
    cap: u64,
) -> Result<Option<(SumEnclosure, SumEnclosure)>> {
    let spec = HomogeneousSpec::first_primes(table, k, d, None)?;
    match spec.composition_count() {
        Some(n) if n <= cap as u128 => {}
        _ => return Ok(None),
    }
    let products = match homogeneous_products_capped(&spec, cap) {
        Ok(v) => v,
        Err(Error::ResourceLimit(_)) | Err(Error::Overflow(_)) => return Ok(None),
        Err(err) => return Err(err),
    };
    let recip = series::reciprocal_sum(&products);
    let seq = PrimitiveSequence::from_sorted_unchecked(products);
    let s = series::sum_finite(&seq, x)?;
    Ok(Some((recip, s)))
}

fn verdict_of(entries: &[ChainEntry]) -> ChainVerdict {
    let failed = |role: EntryRole| {
        entries
            .iter()
            .any(|e| e.role == role && e.mode.evaluated() && !e.pass)
    };
    if failed(EntryRole::Hypothesis) {
        ChainVerdict::HypothesisFailed
    } else if failed(EntryRole::Chain) {
        ChainVerdict::ChainFailed
    } else if failed(EntryRole::Constraint) || failed(EntryRole::Conclusion) {
        ChainVerdict::ConstraintUnmet
    } else if entries.iter().any(|e| e.mode == EntryMode::SkippedOutOfRange) {
        ChainVerdict::VerifiedSymbolically
    } else {
        ChainVerdict::Verified
    }
}

/// Verdict of a conjectural inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjectureVerdict {
    Holds,
    /// The enclosures overlap: equal up to rounding.
    HoldsWithinRounding,
    /// `lhs` certainly exceeds `rhs`: a counterexample.
    Finding,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_budget: f64,
    pub rhs_budget: f64,
    pub verdict: ConjectureVerdict,
}

impl ConjectureCheck {
    fn new(name: &str, lhs: &SumEnclosure, rhs: &SumEnclosure) -> Self {
        let verdict = if lhs.upper <= rhs.lower {
            ConjectureVerdict::Holds
        } else if lhs.lower > rhs.upper {
            ConjectureVerdict::Finding
        } else {
            ConjectureVerdict::HoldsWithinRounding
        };
        Self {
            name: name.to_string(),
            lhs: lhs.partial_sum(),
            rhs: rhs.partial_sum(),
            lhs_budget: lhs.rounding_budget,
            rhs_budget: rhs.rounding_budget,
            verdict,
        }
    }

    pub fn pass(&self) -> bool {
        self.verdict != ConjectureVerdict::Finding
    }

    pub fn comparison(&self) -> Comparison {
        Comparison::new(self.lhs, self.rhs, self.pass())
    }
}

fn erdos_sum(values: &[u64]) -> Result<SumEnclosure> {
    if values.is_empty() {
        return Ok(SumEnclosure {
            lower: 0.0,
            upper: 0.0,
            terms_used: 0,
            rounding_budget: 0.0,
            tail_bound: None,
        });
    }
    series::sum_finite(&PrimitiveSequence::from_sorted_unchecked(values.to_vec()), 0.0)
}

/// Σ_{a ∈ A} 1/(a log a) ≤ Σ_{p ∈ P(A)} 1/(p log p).
pub fn conjecture_ps_check(seq: &PrimitiveSequence, table: &PrimeTable) -> Result<ConjectureCheck> {
    let lhs = series::sum_finite(seq, 0.0)?;
    let support: Vec<u64> = prime_support(seq, table)?.into_iter().collect();
    let rhs = erdos_sum(&support)?;
    Ok(ConjectureCheck::new("prime-support", &lhs, &rhs))
}

/// Σ_{a ∈ A} 1/(a log a) ≤ Σ_{n ≤ |A|} 1/(p_n log p_n).
pub fn conjecture_card_check(seq: &PrimitiveSequence, table: &PrimeTable) -> Result<ConjectureCheck> {
    let m = seq.len() as u64;
    if m > table.count() {
        return Err(Error::Capability(format!(
            "need the first {m} primes, table has {}",
            table.count()
        )));
    }
    let lhs = series::sum_finite(seq, 0.0)?;
    let first: Vec<u64> = table.primes()[..m as usize].iter().map(|&p| p as u64).collect();
    let rhs = erdos_sum(&first)?;
    Ok(ConjectureCheck::new("cardinality", &lhs, &rhs))
}

/// Σ_{a ∈ A, a ≤ n} 1/(a log a) ≤ Σ_{p ≤ n} 1/(p log p).
pub fn erdos_zhang_partial_check(seq: &PrimitiveSequence, n: u64, table: &PrimeTable) -> Result<ConjectureCheck> {
    if n > table.limit() {
        return Err(Error::Capability(format!(
            "n = {n} beyond table limit {}",
            table.limit()
        )));
    }
    let head: Vec<u64> = seq.elements().iter().copied().take_while(|&a| a <= n).collect();
    let lhs = erdos_sum(&head)?;
    let primes: Vec<u64> = table
        .primes()
        .iter()
        .map(|&p| p as u64)
        .take_while(|&p| p <= n)
        .collect();
    let rhs = erdos_sum(&primes)?;
    Ok(ConjectureCheck::new("erdos-zhang-partial", &lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_primes;

    #[test]
    fn degree_examples() {
        assert_eq!(compute_d(1.0, 6.93492).unwrap(), 7);
        assert_eq!(compute_d(1.0, 2.5).unwrap(), 2);
        assert!(compute_d(0.5, 3.0).is_err());
        // Exactly on the boundary: 2.5 log log 3 + beta = 3.
        let beta = 3.0 - 2.5 * 3f64.ln().ln();
        let d = compute_d(1.0, beta).unwrap();
        assert!(d == 2 || d == 3);
    }

    #[test]
    fn star_examples() {
        let v = star_lhs(0.44516, 6.93492).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
        assert!(star_lhs(0.44516, 8.0).unwrap() > 1.0);
        assert!(star_lhs(1e-12, 6.9).unwrap() < star_lhs(0.05, 6.9).unwrap());
        let v = star_prime_lhs(5, 0.41154).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
        let v = star_prime_lhs(1, 1.0).unwrap();
        assert!((v - 0.132_534_987_726_716_9).abs() < 1e-12);
        assert!(star_prime_lhs(0, 1.0).is_err());
        assert!(star_lhs(0.0, 3.0).is_err());
        assert!(star_prime_lhs(30, 1.0).unwrap() > star_prime_lhs(20, 1.0).unwrap());
    }

    #[test]
    fn precise_forms_agree_with_double() {
        let a = precise::to_f64(&star_prime_lhs_precise(5, 0.41154, 128).unwrap());
        assert!((a - star_prime_lhs(5, 0.41154).unwrap()).abs() < 1e-14);
        let b = precise::to_f64(&star_lhs_precise(0.44516, 6.93492, 128).unwrap());
        assert!((b - star_lhs(0.44516, 6.93492).unwrap()).abs() < 1e-14);
        let c = precise::to_f64(&c_from_d_precise(0.41154, 5, 128).unwrap());
        assert!((c - c_from_d(0.41154, 5).unwrap()).abs() < 1e-11);
    }

    #[test]
    fn c_examples() {
        assert!((c_from_beta(0.44516, 6.93492).unwrap() - 2309.8).abs() < 0.1);
        assert!((c_from_d(0.41154, 5).unwrap() - 362.313).abs() < 1e-3);
        let c1 = c_from_d(0.3, 4).unwrap();
        let c2 = c_from_d(0.6, 4).unwrap();
        assert!((c1 - 2.0 * c2).abs() < 1e-12);
    }

    #[test]
    fn k_examples() {
        let t = sieve_primes(1000).unwrap();
        assert_eq!(
            materialize_k(&t, 0.5, 10.0).unwrap(),
            KLookup::Materialized {
                k: 34,
                p_k: 139,
                p_next: 149,
                bertrand: true
            }
        );
        match materialize_k(&t, 0.41154, 363.0).unwrap() {
            KLookup::OutOfRange { log_threshold } => assert!((log_threshold - 149.389).abs() < 1e-2),
            other => panic!("{other:?}"),
        }
        // threshold e^1.09 ≈ 2.97: only p_1 = 2 lies below it
        assert!(matches!(
            materialize_k(&t, 1.0, 1.09),
            Err(Error::ConstructionFailure(_))
        ));
        assert!(matches!(
            materialize_k(&t, 1.0, 0.5),
            Err(Error::ConstructionFailure(_))
        ));
    }

    #[test]
    fn multinomial_examples() {
        let c = multinomial_lower_check(&[2, 3], 2).unwrap();
        assert!((c.lhs - 0.527_777_777_777_777_8).abs() < 1e-15);
        assert!((c.rhs - 0.347_222_222_222_222_2).abs() < 1e-15);
        assert!(c.holds);
        let c = multinomial_lower_check(&[2, 3, 5, 7], 1).unwrap();
        assert_eq!(c.lhs, c.rhs);
        assert!(multinomial_lower_check(&[2, 3, 5, 7, 11], 4).unwrap().holds);
    }

    #[test]
    fn lemma2_examples() {
        let r = lemma2_check(5).unwrap();
        assert!(r.passed());
        assert_eq!(r.tightest.unwrap().n, 1);
        assert_eq!(r.tightest_slack, 0.0);
        assert!(lemma2_check(0).is_err());
    }

    #[test]
    fn conjecture_examples() {
        let t = sieve_primes(1000).unwrap();
        let seq = |v: &[u64]| PrimitiveSequence::new(v).unwrap();
        let c = conjecture_ps_check(&seq(&[2]), &t).unwrap();
        assert_eq!(c.lhs, c.rhs);
        assert!(c.pass());
        let c = conjecture_ps_check(&seq(&[6, 10, 15]), &t).unwrap();
        assert_eq!(c.verdict, ConjectureVerdict::Holds);
        assert!((c.lhs - 0.161_065_844_153_456_7).abs() < 1e-15);
        assert!((c.rhs - 1.149_027_582_898_683_2).abs() < 1e-15);
        let c = conjecture_ps_check(&seq(&[4]), &t).unwrap();
        assert!((c.lhs - 0.180_336_880_111_120_4).abs() < 1e-15);
        assert!(c.pass());

        let c = conjecture_card_check(&seq(&[2, 3, 5]), &t).unwrap();
        assert_eq!(c.lhs, c.rhs);
        assert!(c.pass());
        let c = conjecture_card_check(&seq(&[997]), &t).unwrap();
        assert!((c.rhs - 1.0 / (2.0 * LN_2)).abs() < 1e-15);

        let c = erdos_zhang_partial_check(&seq(&[4, 9, 25]), 1, &t).unwrap();
        assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
        assert!(c.pass());
        let c = erdos_zhang_partial_check(&seq(&[4, 9, 25]), 10, &t).unwrap();
        assert!((c.lhs - 0.230_905_726_034_833_6).abs() < 1e-15);
        assert!((c.rhs - 1.222_441_631_808_647_6).abs() < 1e-15);
        assert_eq!(c.verdict, ConjectureVerdict::Holds);
    }

    #[test]
    fn chain_reports_c2_as_the_only_failure() {
        let t = sieve_primes(1000).unwrap();
        let p = WitnessParams::theorem1(1.0, 1e6, 0.5, 2.4).unwrap();
        let r = verify_chain(&p, &t).unwrap();
        let names: Vec<_> = r.failures().iter().map(|e| e.name.clone()).collect();
        assert_eq!(names, vec!["C2"]);
        assert_eq!(r.verdict, ChainVerdict::HypothesisFailed);
    }
}
