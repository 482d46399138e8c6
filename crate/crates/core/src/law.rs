//! Probability vectors over the nonnegative integers, exact or floating.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::rational::{int, to_f64};

/// A scalar that is either an exact rational or a float, depending on which
/// backend produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Float(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Exact probability vector `probs[i] = Pr(V = offset + i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDist {
    offset: usize,
    probs: Vec<BigRational>,
}

impl RationalDist {
    /// Builds a distribution, trimming zero entries at both ends.
    pub fn new(offset: usize, probs: Vec<BigRational>) -> Self {
        let first = probs.iter().position(|p| !p.is_zero());
        let Some(first) = first else {
            return RationalDist { offset, probs: Vec::new() };
        };
        let last = probs.iter().rposition(|p| !p.is_zero()).unwrap_or(first);
        RationalDist {
            offset: offset + first,
            probs: probs[first..=last].to_vec(),
        }
    }

    pub fn point(at: usize) -> Self {
        RationalDist { offset: at, probs: vec![BigRational::one()] }
    }

    /// Builds from `(value, probability)` pairs, summing repeated values.
    pub fn from_pairs<I: IntoIterator<Item = (usize, BigRational)>>(pairs: I) -> Self {
        let mut dense: Vec<BigRational> = Vec::new();
        for (k, p) in pairs {
            if dense.len() <= k {
                dense.resize(k + 1, BigRational::zero());
            }
            dense[k] += p;
        }
        RationalDist::new(0, dense)
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    pub fn max_value(&self) -> usize {
        self.offset + self.probs.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize) -> BigRational {
        k.checked_sub(self.offset)
            .and_then(|i| self.probs.get(i))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn mean(&self) -> BigRational {
        self.probs
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (i, p)| acc + p * int((self.offset + i) as i64))
    }

    pub fn variance(&self) -> BigRational {
        let m = self.mean();
        let second = self.probs.iter().enumerate().fold(BigRational::zero(), |acc, (i, p)| {
            let k = int((self.offset + i) as i64);
            acc + p * &k * &k
        });
        second - &m * &m
    }

    pub fn cdf(&self, k: usize) -> BigRational {
        if k < self.offset {
            return BigRational::zero();
        }
        let upto = (k - self.offset + 1).min(self.probs.len());
        self.probs[..upto].iter().fold(BigRational::zero(), |acc, p| acc + p)
    }

    /// Law of `V + shift`.
    pub fn shifted(&self, shift: usize) -> Self {
        RationalDist { offset: self.offset + shift, probs: self.probs.clone() }
    }

    /// Law of `V - 1`; panics if `V` can be zero.
    pub fn shifted_down(&self) -> Self {
        assert!(self.offset >= 1 || self.probs.is_empty(), "cannot shift below zero");
        RationalDist { offset: self.offset.saturating_sub(1), probs: self.probs.clone() }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(to_f64).collect()
    }
}

/// Survivor-count law in one of the two numeric backends.
#[derive(Clone, Debug, PartialEq)]
pub enum Pmf {
    Exact(RationalDist),
    Float { offset: usize, probs: Vec<f64> },
}

impl Pmf {
    pub fn float(offset: usize, probs: Vec<f64>) -> Self {
        let first = probs.iter().position(|p| *p != 0.0).unwrap_or(probs.len());
        let last = probs.iter().rposition(|p| *p != 0.0).map_or(first, |l| l + 1);
        Pmf::Float { offset: offset + first, probs: probs[first..last].to_vec() }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Pmf::Exact(_))
    }

    pub fn exact(&self) -> Option<&RationalDist> {
        match self {
            Pmf::Exact(d) => Some(d),
            Pmf::Float { .. } => None,
        }
    }

    pub fn offset(&self) -> usize {
        match self {
            Pmf::Exact(d) => d.offset(),
            Pmf::Float { offset, .. } => *offset,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Pmf::Exact(d) => d.probs().len(),
            Pmf::Float { probs, .. } => probs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_value(&self) -> usize {
        self.offset() + self.len().saturating_sub(1)
    }

    /// Dense float probabilities starting at `offset()`.
    pub fn probs_f64(&self) -> Vec<f64> {
        match self {
            Pmf::Exact(d) => d.to_f64(),
            Pmf::Float { probs, .. } => probs.clone(),
        }
    }

    pub fn prob(&self, k: usize) -> Value {
        match self {
            Pmf::Exact(d) => Value::Exact(d.get(k)),
            Pmf::Float { offset, probs } => Value::Float(
                k.checked_sub(*offset).and_then(|i| probs.get(i)).copied().unwrap_or(0.0),
            ),
        }
    }

    pub fn prob_f64(&self, k: usize) -> f64 {
        self.prob(k).to_f64()
    }

    pub fn total(&self) -> Value {
        match self {
            Pmf::Exact(d) => Value::Exact(d.total()),
            Pmf::Float { probs, .. } => Value::Float(probs.iter().sum()),
        }
    }

    pub fn mean(&self) -> Value {
        match self {
            Pmf::Exact(d) => Value::Exact(d.mean()),
            Pmf::Float { offset, probs } => Value::Float(
                probs.iter().enumerate().map(|(i, p)| (offset + i) as f64 * p).sum(),
            ),
        }
    }

    pub fn cdf(&self, k: usize) -> Value {
        match self {
            Pmf::Exact(d) => Value::Exact(d.cdf(k)),
            Pmf::Float { offset, probs } => {
                if k < *offset {
                    return Value::Float(0.0);
                }
                let upto = (k - offset + 1).min(probs.len());
                Value::Float(probs[..upto].iter().sum())
            }
        }
    }

    /// Float cumulative distribution `cdf[k] = Pr(V <= k)` for `k = 0..=upto`.
    /// Exact laws are accumulated exactly before conversion.
    pub fn cdf_vec(&self, upto: usize) -> Vec<f64> {
        match self {
            Pmf::Exact(d) => {
                let mut acc = BigRational::zero();
                (0..=upto)
                    .map(|k| {
                        acc += d.get(k);
                        to_f64(&acc)
                    })
                    .collect()
            }
            Pmf::Float { offset, probs } => {
                let mut acc = 0.0;
                (0..=upto)
                    .map(|k| {
                        if k >= *offset {
                            acc += probs.get(k - offset).copied().unwrap_or(0.0);
                        }
                        acc
                    })
                    .collect()
            }
        }
    }

    /// `E|V - center|^p` for even `p`, in floating point.
    pub fn central_abs_moment(&self, center: f64, p: u32) -> f64 {
        let offset = self.offset();
        self.probs_f64()
            .iter()
            .enumerate()
            .map(|(i, q)| q * ((offset + i) as f64 - center).abs().powi(p as i32))
            .sum()
    }

    /// Probability that `|V - center| > radius`.
    pub fn outside(&self, center: f64, radius: f64) -> Value {
        match self {
            Pmf::Exact(d) => Value::Exact(
                d.probs()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| ((d.offset() + i) as f64 - center).abs() > radius)
                    .fold(BigRational::zero(), |acc, (_, p)| acc + p),
            ),
            Pmf::Float { offset, probs } => Value::Float(
                probs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| ((offset + i) as f64 - center).abs() > radius)
                    .fold(0.0, |acc, (_, p)| acc + p),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn trims_and_summarizes() {
        let d = RationalDist::new(0, vec![int(0), ratio(1, 4), ratio(3, 4), int(0)]);
        assert_eq!(d.offset(), 1);
        assert_eq!(d.max_value(), 2);
        assert_eq!(d.mean(), ratio(7, 4));
        assert_eq!(d.variance(), ratio(3, 16));
        assert_eq!(d.cdf(1), ratio(1, 4));
        assert_eq!(d.cdf(0), int(0));
        assert_eq!(d.cdf(9), int(1));
    }

    #[test]
    fn float_and_exact_views_agree() {
        let d = RationalDist::from_pairs([(2, ratio(1, 3)), (5, ratio(2, 3)), (2, int(0))]);
        let exact = Pmf::Exact(d.clone());
        let float = Pmf::float(0, vec![0.0, 0.0, 1.0 / 3.0, 0.0, 0.0, 2.0 / 3.0]);
        assert_eq!(float.offset(), 2);
        assert!((exact.mean().to_f64() - float.mean().to_f64()).abs() < 1e-15);
        let a = exact.cdf_vec(6);
        let b = float.cdf_vec(6);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
        assert_eq!(exact.outside(3.0, 1.5).to_f64(), 2.0 / 3.0);
    }
}
