//! Laws on the integers and the distances between them.

use crate::error::{Error, Result};
use crate::law::Pmf;
use crate::phase::PhaseTable;

/// A law on `offset, offset+1, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerLaw {
    offset: i64,
    probs: Vec<f64>,
}

pub const MASS_TOLERANCE: f64 = 1e-10;

impl IntegerLaw {
    pub fn new(offset: i64, probs: Vec<f64>) -> Result<Self> {
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidParameter(format!("negative or non-finite mass {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidParameter(format!("masses sum to {total}, not 1")));
        }
        Ok(IntegerLaw { offset, probs })
    }

    /// Builds a law without checking its total mass.
    pub fn unnormalized(offset: i64, probs: Vec<f64>) -> Self {
        IntegerLaw { offset, probs }
    }

    pub fn point(k: i64) -> Self {
        IntegerLaw { offset: k, probs: vec![1.0] }
    }

    pub fn from_pmf(pmf: &Pmf) -> Self {
        IntegerLaw { offset: pmf.offset() as i64, probs: pmf.probs_f64() }
    }

    /// Law of `X_n` read off a phase table row.
    pub fn from_phase_row(table: &PhaseTable, n: usize) -> Self {
        IntegerLaw { offset: 0, probs: table.row(n).to_vec() }
    }

    /// Empirical law of integer observations.
    pub fn from_histogram(offset: i64, counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let probs = counts.iter().map(|c| *c as f64 / total.max(1) as f64).collect();
        IntegerLaw { offset, probs }
    }

    /// Law of `ceil(Z + shift)` where `Pr(Z <= x) = cdf(x)`, over the integers
    /// where the cdf moves by more than `tail`.
    pub fn ceil_of(cdf: impl Fn(f64) -> f64, shift: f64, tail: f64) -> Self {
        // Pr(ceil(Z + c) <= k) = Pr(Z <= k - c)
        let at = |k: i64| cdf(k as f64 - shift).clamp(0.0, 1.0);
        let mut lo = shift.floor() as i64;
        while at(lo) > tail {
            lo -= 1;
        }
        let mut hi = shift.ceil() as i64;
        while at(hi) < 1.0 - tail {
            hi += 1;
        }
        let probs = ((lo + 1)..=hi).map(|k| at(k) - at(k - 1)).collect();
        IntegerLaw { offset: lo + 1, probs }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, k: i64) -> f64 {
        if k < self.offset {
            return 0.0;
        }
        self.probs.get((k - self.offset) as usize).copied().unwrap_or(0.0)
    }

    pub fn max_value(&self) -> i64 {
        self.offset + self.probs.len() as i64 - 1
    }

    pub fn cdf(&self, k: i64) -> f64 {
        if k < self.offset {
            return 0.0;
        }
        let upto = ((k - self.offset) as usize + 1).min(self.probs.len());
        self.probs[..upto].iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (self.offset + i as i64) as f64 * p)
            .sum()
    }

    pub fn shifted(&self, by: i64) -> Self {
        IntegerLaw { offset: self.offset + by, probs: self.probs.clone() }
    }
}

fn joint_range(a: &IntegerLaw, b: &IntegerLaw) -> std::ops::RangeInclusive<i64> {
    a.offset.min(b.offset)..=a.max_value().max(b.max_value())
}

/// Total variation distance `1/2 sum_k |P(A = k) - P(B = k)|`.
pub fn dtv(a: &IntegerLaw, b: &IntegerLaw) -> f64 {
    0.5 * joint_range(a, b).map(|k| (a.prob(k) - b.prob(k)).abs()).sum::<f64>()
}

/// Wasserstein distance `sum_k |P(A <= k) - P(B <= k)|`.
pub fn dw(a: &IntegerLaw, b: &IntegerLaw) -> f64 {
    let mut ca = 0.0;
    let mut cb = 0.0;
    let mut acc = 0.0;
    for k in joint_range(a, b) {
        ca += a.prob(k);
        cb += b.prob(k);
        acc += (ca - cb).abs();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let a = IntegerLaw::new(0, vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(dtv(&a, &a), 0.0);
        assert_eq!(dw(&a, &a), 0.0);
        assert!((dw(&a, &a.shifted(1)) - 1.0).abs() < 1e-15);
        assert_eq!(dtv(&IntegerLaw::point(0), &IntegerLaw::point(1)), 1.0);
        assert!(IntegerLaw::new(0, vec![0.5, 0.4]).is_err());
        assert!(IntegerLaw::new(0, vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn ceiling_law_of_a_uniform() {
        // Z uniform on [-1, 0], shift 0.5: ceil(Z + 0.5) is 0 or 1 with mass 1/2
        let law = IntegerLaw::ceil_of(|x| (x + 1.0).clamp(0.0, 1.0), 0.5, 0.0);
        assert!((law.prob(0) - 0.5).abs() < 1e-15);
        assert!((law.prob(1) - 0.5).abs() < 1e-15);
        assert!((law.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
