//! Compensated (Kahan–Babuška–Neumaier) summation with an error budget.

use std::ops::AddAssign;

/// Conservative per-term rounding allowance, in units of `f64::EPSILON`
/// relative to the running sum.
pub const ULPS_PER_TERM: f64 = 4.0;

/// Running compensated sum of non-negative terms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
    terms: u64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
        self.terms += 1;
    }

    /// Folds another partial sum in. Combining partials in a fixed order keeps
    /// chunked reductions reproducible.
    pub fn merge(&mut self, other: &NeumaierSum) {
        let terms = self.terms + other.terms;
        self.add(other.sum);
        self.add(other.comp);
        self.terms = terms;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Worst-case accumulated rounding error: `4 · m · ε · |sum|`.
    pub fn rounding_budget(&self) -> f64 {
        ULPS_PER_TERM * self.terms.max(1) as f64 * f64::EPSILON * self.value().abs()
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_low_bits() {
        let mut s = NeumaierSum::new();
        s += 1.0;
        s += 1e100;
        s += 1.0;
        s += -1e100;
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn merge_keeps_term_count() {
        let a: NeumaierSum = [0.1, 0.2].into_iter().collect();
        let mut b: NeumaierSum = [0.3].into_iter().collect();
        b.merge(&a);
        assert_eq!(b.terms(), 3);
        assert!((b.value() - 0.6).abs() < 1e-16);
    }
}
