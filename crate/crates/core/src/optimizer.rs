//! Re-derivation of the constants in the two witness theorems.
//!
//! Both problems minimize c = (e^t + log 2)/α subject to a constraint g(α) ≥ 1
//! with t = β or t = d fixed. For fixed t the objective decreases in α, so the
//! optimum sits at the largest feasible α. g is unimodal in α (it vanishes as
//! α → 0⁺), so [`largest_feasible`] locates the last feasible point of a grid
//! and then bisects on the decreasing branch. Monotonicity of each bracket is
//! checked by sampling; if it fails, a dense refinement replaces bisection.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::precise;
use crate::witness::{self, ChainEntry, EntryMode, EntryRole};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

// Interior samples used to confirm a bracket is monotone.
const MONOTONE_SAMPLES: usize = 32;
// Samples per round of the dense fallback.
const FALLBACK_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    /// Log-spaced grid size on [alpha_min, alpha_max].
    pub alpha_grid: usize,
    /// Absolute bisection tolerance on α.
    pub alpha_tol: f64,
    pub d_min: u32,
    pub d_max: u32,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_step: f64,
    pub beta_tol: f64,
    /// Slack allowed on the constraint when a result is judged feasible.
    pub constraint_tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            alpha_min: 1e-6,
            alpha_max: 10.0,
            alpha_grid: 2000,
            alpha_tol: 1e-8,
            d_min: 1,
            d_max: 40,
            beta_min: 2.5,
            beta_max: 20.0,
            beta_step: 0.05,
            beta_tol: 1e-6,
            constraint_tol: 1e-9,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if !(self.alpha_min > 0.0 && self.alpha_min < self.alpha_max && self.alpha_max <= 10.0) {
            return Err(invalid("alpha bounds must satisfy 0 < alpha_min < alpha_max <= 10"));
        }
        if self.alpha_grid < 2 || !(self.alpha_tol > 0.0) {
            return Err(invalid("alpha grid needs at least two points and a positive tolerance"));
        }
        if self.d_min < 1 || self.d_min > self.d_max {
            return Err(invalid("d range must satisfy 1 <= d_min <= d_max"));
        }
        if !(self.beta_min >= 2.5 && self.beta_min <= self.beta_max && self.beta_max <= 20.0) {
            return Err(invalid("beta bounds must satisfy 2.5 <= beta_min <= beta_max <= 20"));
        }
        if !(self.beta_step > 0.0) || !(self.beta_tol > 0.0) {
            return Err(invalid("beta step and tolerance must be positive"));
        }
        Ok(())
    }

    fn alpha_grid_points(&self) -> Vec<f64> {
        let (lo, hi) = (self.alpha_min.ln(), self.alpha_max.ln());
        let n = self.alpha_grid - 1;
        let mut g: Vec<f64> = (0..=n)
            .map(|i| (lo + (hi - lo) * i as f64 / n as f64).exp())
            .collect();
        g[n] = self.alpha_max;
        g
    }
}

/// Largest α with `g(α) ≥ 1` found by [`largest_feasible`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FeasibleAlpha {
    pub alpha: f64,
    pub evaluations: u64,
    /// True if the bracket was not monotone and the dense refinement ran.
    pub fallback: bool,
}

/// Largest α on the configured grid range with `g(α) ≥ 1`, to within `alpha_tol`.
///
/// Returns `None` when no grid point is feasible.
pub fn largest_feasible(g: impl Fn(f64) -> f64, cfg: &SearchConfig) -> Option<FeasibleAlpha> {
    let mut evals = 0u64;
    let mut eval = |a: f64| {
        evals += 1;
        g(a)
    };
    let grid = cfg.alpha_grid_points();
    let mut last = None;
    for (i, &a) in grid.iter().enumerate() {
        if eval(a) >= 1.0 {
            last = Some(i);
        }
    }
    let i = last?;
    if i + 1 == grid.len() {
        return Some(FeasibleAlpha {
            alpha: grid[i],
            evaluations: evals,
            fallback: false,
        });
    }
    let (mut lo, mut hi) = (grid[i], grid[i + 1]);

    let mut prev = eval(lo);
    let mut monotone = true;
    for j in 1..=MONOTONE_SAMPLES + 1 {
        let a = lo + (hi - lo) * j as f64 / (MONOTONE_SAMPLES + 1) as f64;
        let v = eval(a);
        if v > prev {
            monotone = false;
            break;
        }
        prev = v;
    }

    if monotone {
        while hi - lo > cfg.alpha_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval(mid) >= 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        while hi - lo > cfg.alpha_tol {
            let step = (hi - lo) / FALLBACK_SAMPLES as f64;
            let mut best = lo;
            for j in 1..FALLBACK_SAMPLES {
                let a = lo + step * j as f64;
                if eval(a) >= 1.0 {
                    best = a;
                }
            }
            if best + step >= hi && step <= f64::EPSILON * hi {
                break;
            }
            lo = best;
            hi = (best + step).min(hi);
        }
    }
    Some(FeasibleAlpha {
        alpha: lo,
        evaluations: evals,
        fallback: !monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OptMode {
    Theorem1,
    Theorem2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub mode: OptMode,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    pub c: f64,
    /// Constraint left side at the solution.
    pub constraint_value: f64,
    pub iterations: u64,
    pub feasible: bool,
    pub tolerance: f64,
    pub alpha_tol: f64,
}

/// c(d) at α_max(d) for one degree, or `None` if no α is feasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeCandidate {
    pub d: u32,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub evaluations: u64,
    pub fallback: bool,
}

/// α_max(d) and c(d) for every d in the configured range.
pub fn theorem2_curve(cfg: &SearchConfig) -> Result<Vec<DegreeCandidate>> {
    cfg.validate()?;
    Ok((cfg.d_min..=cfg.d_max)
        .into_par_iter()
        .map(|d| {
            let found = largest_feasible(|a| witness::star_prime_lhs(d, a).unwrap_or(0.0), cfg);
            match found {
                Some(f) => DegreeCandidate {
                    d,
                    alpha: Some(f.alpha),
                    c: witness::c_from_d(f.alpha, d).ok(),
                    evaluations: f.evaluations,
                    fallback: f.fallback,
                },
                None => DegreeCandidate {
                    d,
                    alpha: None,
                    c: None,
                    evaluations: cfg.alpha_grid as u64,
                    fallback: false,
                },
            }
        })
        .collect())
}

/// Minimizes (e^d + log 2)/α over integer d subject to the primed constraint.
pub fn optimize_theorem2(cfg: &SearchConfig) -> Result<OptimizationResult> {
    let curve = theorem2_curve(cfg)?;
    let iterations = curve.iter().map(|c| c.evaluations).sum();
    let mut best: Option<(u32, f64, f64)> = None;
    for cand in &curve {
        if let (Some(a), Some(c)) = (cand.alpha, cand.c) {
            // Strict comparison keeps the smaller d on ties.
            if best.is_none_or(|(_, _, bc)| c < bc) {
                best = Some((cand.d, a, c));
            }
        }
    }
    let (d, alpha, c) = best.ok_or_else(|| {
        Error::Infeasible(format!(
            "no feasible alpha for any d in [{}, {}]",
            cfg.d_min, cfg.d_max
        ))
    })?;
    let constraint_value = witness::star_prime_lhs(d, alpha)?;
    Ok(OptimizationResult {
        mode: OptMode::Theorem2,
        alpha,
        beta: None,
        d: Some(d),
        c,
        constraint_value,
        iterations,
        feasible: constraint_value >= 1.0 - cfg.constraint_tol,
        tolerance: cfg.constraint_tol,
        alpha_tol: cfg.alpha_tol,
    })
}

struct BetaPoint {
    beta: f64,
    alpha: f64,
    c: f64,
}

fn beta_point(beta: f64, cfg: &SearchConfig, evals: &mut u64) -> Option<BetaPoint> {
    let f = largest_feasible(|a| witness::star_lhs(a, beta).unwrap_or(0.0), cfg);
    match f {
        Some(f) => {
            *evals += f.evaluations;
            Some(BetaPoint {
                beta,
                alpha: f.alpha,
                c: witness::c_from_beta(f.alpha, beta).ok()?,
            })
        }
        None => {
            *evals += cfg.alpha_grid as u64;
            None
        }
    }
}

fn c_or_inf(p: &Option<BetaPoint>) -> f64 {
    p.as_ref().map_or(f64::INFINITY, |p| p.c)
}

/// Minimizes (e^β + log 2)/α subject to the unprimed constraint and β ≥ 5/2.
pub fn optimize_theorem1(cfg: &SearchConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let n = ((cfg.beta_max - cfg.beta_min) / cfg.beta_step).floor() as usize;
    let betas: Vec<f64> = (0..=n)
        .map(|i| (cfg.beta_min + cfg.beta_step * i as f64).min(cfg.beta_max))
        .collect();
    let coarse: Vec<(Option<BetaPoint>, u64)> = betas
        .par_iter()
        .map(|&b| {
            let mut e = 0;
            (beta_point(b, cfg, &mut e), e)
        })
        .collect();
    let mut iterations: u64 = coarse.iter().map(|(_, e)| e).sum();
    let mut best_i = None;
    for (i, (p, _)) in coarse.iter().enumerate() {
        if let Some(p) = p {
            if best_i.is_none_or(|j: usize| p.c < coarse[j].0.as_ref().unwrap().c) {
                best_i = Some(i);
            }
        }
    }
    let i = best_i.ok_or_else(|| {
        Error::Infeasible(format!(
            "no feasible (alpha, beta) with beta in [{}, {}]",
            cfg.beta_min, cfg.beta_max
        ))
    })?;

    // Golden-section search on the neighbouring grid cells.
    let mut a = betas[i.saturating_sub(1)];
    let mut b = betas[(i + 1).min(n)];
    let mut best = coarse.into_iter().nth(i).unwrap().0.unwrap();
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut p1 = beta_point(x1, cfg, &mut iterations);
    let mut p2 = beta_point(x2, cfg, &mut iterations);
    while b - a > cfg.beta_tol {
        if c_or_inf(&p1) <= c_or_inf(&p2) {
            b = x2;
            x2 = x1;
            p2 = p1;
            x1 = b - INV_PHI * (b - a);
            p1 = beta_point(x1, cfg, &mut iterations);
        } else {
            a = x1;
            x1 = x2;
            p1 = p2;
            x2 = a + INV_PHI * (b - a);
            p2 = beta_point(x2, cfg, &mut iterations);
        }
    }
    // Polish: keep the best of the final interval's evaluated points.
    let finals = [p1, p2, beta_point(a, cfg, &mut iterations), beta_point(b, cfg, &mut iterations)];
    for p in finals.into_iter().flatten() {
        if p.c < best.c || (p.c == best.c && p.beta < best.beta) {
            best = p;
        }
    }

    let constraint_value = witness::star_lhs(best.alpha, best.beta)?;
    Ok(OptimizationResult {
        mode: OptMode::Theorem1,
        alpha: best.alpha,
        beta: Some(best.beta),
        d: None,
        c: best.c,
        constraint_value,
        iterations,
        feasible: constraint_value >= 1.0 - cfg.constraint_tol && best.beta >= 2.5,
        tolerance: cfg.constraint_tol,
        alpha_tol: cfg.alpha_tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificationVerdict {
    Certified,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certification {
    pub params: OptimizationResult,
    pub entries: Vec<ChainEntry>,
    pub verdict: CertificationVerdict,
}

impl Certification {
    pub fn certified(&self) -> bool {
        self.verdict == CertificationVerdict::Certified
    }
}

// Precision used when re-evaluating a solution.
const CERT_BITS: usize = 128;
const CERT_SLACK: f64 = 1e-9;

fn entry(name: &str, lhs: f64, rhs: f64, pass: bool, mode: EntryMode) -> ChainEntry {
    ChainEntry {
        name: name.to_string(),
        lhs,
        rhs,
        pass,
        mode,
        role: EntryRole::Chain,
    }
}

/// Re-checks a result at extended precision, optionally against a bracket for c.
pub fn certify(result: &OptimizationResult, c_bracket: Option<(f64, f64)>) -> Result<Certification> {
    if !result.feasible {
        return Err(invalid("certify needs a result marked feasible"));
    }
    // Shrinking α by one tolerance moves onto the feasible side of the bracket.
    let shrunk = result.alpha - result.alpha_tol;
    let (precise_value, precise_c) = match result.mode {
        OptMode::Theorem2 => {
            let d = result
                .d
                .ok_or_else(|| invalid("theorem-2 result has no d"))?;
            if d == 0 {
                return Err(invalid("d must be a positive integer"));
            }
            let v = witness::star_prime_lhs_precise(d, shrunk, CERT_BITS)?;
            let c = witness::c_from_d_precise(result.alpha, d, CERT_BITS)?;
            (precise::to_f64(&v), precise::to_f64(&c))
        }
        OptMode::Theorem1 => {
            let beta = result
                .beta
                .ok_or_else(|| invalid("theorem-1 result has no beta"))?;
            if beta < 2.5 {
                return Err(invalid("beta must be at least 5/2"));
            }
            let v = witness::star_lhs_precise(shrunk, beta, CERT_BITS)?;
            let c = witness::c_from_beta_precise(result.alpha, beta, CERT_BITS)?;
            (precise::to_f64(&v), precise::to_f64(&c))
        }
    };
    let stored_min = 1.0 - result.tolerance;
    let mut entries = vec![
        entry(
            "constraint-stored",
            result.constraint_value,
            stored_min,
            result.constraint_value >= stored_min,
            EntryMode::VerifiedNumerically,
        ),
        entry(
            "constraint-precise",
            precise_value,
            1.0 - CERT_SLACK,
            precise_value >= 1.0 - CERT_SLACK,
            EntryMode::VerifiedNumerically,
        ),
        entry(
            "c-consistent",
            result.c,
            precise_c,
            (result.c - precise_c).abs() <= 1e-12 * precise_c,
            EntryMode::VerifiedNumerically,
        ),
    ];
    if let Some((lo, hi)) = c_bracket {
        entries.push(entry(
            "c-bracket",
            result.c,
            hi,
            lo <= result.c && result.c <= hi,
            EntryMode::VerifiedNumerically,
        ));
    }
    let verdict = if entries.iter().all(|e| e.pass) {
        CertificationVerdict::Certified
    } else {
        CertificationVerdict::Failed
    };
    Ok(Certification {
        params: result.clone(),
        entries,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem2_reproduces_known_optimum() {
        let r = optimize_theorem2(&SearchConfig::default()).unwrap();
        assert_eq!(r.d, Some(5));
        assert!((r.alpha - 0.411_540_005).abs() < 1e-7, "{}", r.alpha);
        assert!((r.c - 362.313_03).abs() < 1e-3, "{}", r.c);
        assert_eq!(r.c.ceil(), 363.0);
        assert!(r.feasible);
        assert!(certify(&r, Some((362.2, 362.5))).unwrap().certified());
    }

    #[test]
    fn theorem2_neighbours_are_worse() {
        let curve = theorem2_curve(&SearchConfig::default()).unwrap();
        let c = |d: u32| curve[d as usize - 1].c.unwrap();
        assert!((c(4) - 1014.98).abs() < 0.1, "{}", c(4));
        assert!((c(6) - 410.61).abs() < 0.1, "{}", c(6));
        assert!(c(4) > c(5) && c(6) > c(5));
    }

    #[test]
    fn theorem1_reproduces_known_optimum() {
        let r = optimize_theorem1(&SearchConfig::default()).unwrap();
        let beta = r.beta.unwrap();
        assert!((beta - 6.934_926).abs() < 1e-3, "{beta}");
        assert!((r.alpha - 0.445_168_9).abs() < 1e-4, "{}", r.alpha);
        assert!((r.c - 2_309.766_73).abs() < 1e-3, "{}", r.c);
        assert!(r.c <= 2310.0);
        assert!(certify(&r, Some((2309.0, 2311.0))).unwrap().certified());
    }

    #[test]
    fn fixed_small_beta_is_infeasible() {
        let cfg = SearchConfig {
            beta_max: 2.5,
            ..SearchConfig::default()
        };
        assert!(matches!(optimize_theorem1(&cfg), Err(Error::Infeasible(_))));
    }

    #[test]
    fn monotone_bracket_uses_bisection() {
        let cfg = SearchConfig::default();
        let f = largest_feasible(|a| 2.0 - a, &cfg).unwrap();
        assert!((f.alpha - 1.0).abs() <= cfg.alpha_tol);
        assert!(f.alpha <= 1.0);
        assert!(!f.fallback);
    }

    #[test]
    fn non_monotone_bracket_falls_back() {
        let cfg = SearchConfig::default();
        // Feasible on (0, 1] and on the narrow island [1.0025, 1.003]: the grid
        // cell containing 1 straddles both, so bisection alone could stop at 1.
        let g = |a: f64| {
            if a <= 1.0 || (1.0025..=1.003).contains(&a) {
                1.5
            } else {
                0.5
            }
        };
        let f = largest_feasible(g, &cfg).unwrap();
        assert!(f.fallback);
        assert!((f.alpha - 1.003).abs() <= cfg.alpha_tol, "{}", f.alpha);
    }

    #[test]
    fn nothing_feasible() {
        assert!(largest_feasible(|_| 0.5, &SearchConfig::default()).is_none());
        let cfg = SearchConfig {
            d_max: 1,
            ..SearchConfig::default()
        };
        assert!(matches!(optimize_theorem2(&cfg), Err(Error::Infeasible(_))));
    }

    #[test]
    fn certification_rejects_bad_results() {
        let mut r = optimize_theorem2(&SearchConfig::default()).unwrap();
        r.constraint_value = 0.999;
        r.tolerance = 1e-6;
        assert!(!certify(&r, None).unwrap().certified());
        r.d = Some(0);
        assert!(certify(&r, None).is_err());
    }

    #[test]
    fn deterministic() {
        let cfg = SearchConfig::default();
        assert_eq!(optimize_theorem2(&cfg).unwrap(), optimize_theorem2(&cfg).unwrap());
    }
}
