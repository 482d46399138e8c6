//! Numerical Laplace transform of the limit mass function and the
//! Fourier reconstruction of the periodic part of `E X_n - log n`.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::PhaseTable;

pub const DERIVATIVE_STEP: f64 = 1e-4;
pub const DEFAULT_HARMONICS: usize = 5;
/// Samples closer than this in `y` are merged.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Sorted `(y, mass)` pairs with distinct `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    y: Vec<f64>,
    mass: Vec<f64>,
}

impl Samples {
    /// Sorts the pairs and merges ties by averaging their masses.
    pub fn from_pairs(mut pairs: Vec<(f64, f64)>) -> Self {
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut y: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut mass: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut count = 0usize;
        for (yy, m) in pairs {
            match y.last() {
                Some(last) if (yy - last).abs() <= TIE_TOLERANCE => {
                    let slot = mass.last_mut().expect("parallel vectors");
                    count += 1;
                    *slot += (m - *slot) / count as f64;
                }
                _ => {
                    y.push(yy);
                    mass.push(m);
                    count = 1;
                }
            }
        }
        Samples { y, mass }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// Total mass, mean and variance of the sampled function under the quadrature.
    pub fn moments(&self) -> (f64, f64, f64) {
        let w = self.weights();
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for ((y, m), w) in self.y.iter().zip(&self.mass).zip(&w) {
            let q = m * w;
            m0 += q;
            m1 += q * y;
            m2 += q * y * y;
        }
        let mean = m1 / m0;
        (m0, mean, m2 / m0 - mean * mean)
    }

    /// Quadrature weights `(y_{k+1} - y_{k-1}) / 2`; a missing neighbour is
    /// replaced by the point itself.
    fn weights(&self) -> Vec<f64> {
        let n = self.y.len();
        (0..n)
            .map(|k| {
                let left = self.y[k.saturating_sub(1)];
                let right = self.y[(k + 1).min(n - 1)];
                (right - left) / 2.0
            })
            .collect()
    }
}

/// Samples `(j - log_base n, Pi(n, j))` for every row in `n_range` and every column.
pub fn periodicity_samples(table: &PhaseTable, base: f64, n_range: RangeInclusive<usize>) -> Result<Samples> {
    if n_range.is_empty() {
        return Err(Error::InvalidParameter("empty n range".into()));
    }
    if *n_range.end() > table.max_n() {
        return Err(Error::Resource { requested: *n_range.end(), cap: table.max_n() });
    }
    let mut pairs = Vec::new();
    for n in n_range {
        let log_n = (n as f64).ln() / base.ln();
        for j in 0..=table.j_max() {
            pairs.push((j as f64 - log_n, table.prob(n, j)));
        }
    }
    Ok(Samples::from_pairs(pairs))
}

fn transform(y: &[f64], mass_weight: &[f64], alpha: Complex64) -> Complex64 {
    y.iter().zip(mass_weight).map(|(y, mw)| (alpha * y).exp() * mw).sum()
}

/// `sum_k e^{alpha y_k} mass_k (y_{k+1} - y_{k-1}) / 2`.
pub fn laplace_transform(samples: &Samples, alpha: Complex64) -> Result<Complex64> {
    if samples.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples, got {}", samples.len())));
    }
    let mw: Vec<f64> = samples.weights().iter().zip(&samples.mass).map(|(w, m)| w * m).collect();
    Ok(transform(&samples.y, &mw, alpha))
}

#[derive(Clone, Debug)]
pub struct PeriodicityFit {
    y: Vec<f64>,
    mass_weight: Vec<f64>,
    harmonics: usize,
    /// Derivative of the transform at `2 pi i l`, `l = -L..=L`.
    coefficients: Vec<Complex64>,
}

impl PeriodicityFit {
    pub fn laplace(&self, alpha: Complex64) -> Complex64 {
        transform(&self.y, &self.mass_weight, alpha)
    }

    fn derivative(&self, alpha: Complex64) -> Complex64 {
        let h = DERIVATIVE_STEP;
        (self.laplace(alpha + h) - self.laplace(alpha - h)) / (2.0 * h)
    }

    pub fn harmonics(&self) -> usize {
        self.harmonics
    }

    pub fn coefficient(&self, l: i64) -> Complex64 {
        self.coefficients[(l + self.harmonics as i64) as usize]
    }

    /// Total mass of the quadrature; close to 1 on a good sample set.
    pub fn total_mass(&self) -> f64 {
        self.mass_weight.iter().sum()
    }

    /// The constant `m_1`.
    pub fn m1(&self) -> f64 {
        self.coefficient(0).re
    }

    /// Periodic part `w_1(x)`.
    pub fn w1(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for l in 1..=self.harmonics as i64 {
            let wave = Complex64::new(0.0, 2.0 * PI * l as f64 * x).exp();
            acc += (self.coefficient(l) * wave + self.coefficient(-l) * wave.conj()).re;
        }
        acc
    }

    /// `m_1 + w_1(x)`, the predicted `E X_n - log n` at `x = log n`.
    pub fn reconstruct(&self, x: f64) -> f64 {
        self.m1() + self.w1(x)
    }
}

pub fn periodicity_reconstruct(samples: &Samples, harmonics: usize) -> Result<PeriodicityFit> {
    if harmonics < 1 {
        return Err(crate::error::domain("harmonics", harmonics, ">= 1"));
    }
    if samples.len() < 3 {
        return Err(Error::InvalidParameter(format!("need at least 3 samples, got {}", samples.len())));
    }
    let mass_weight = samples.weights().iter().zip(&samples.mass).map(|(w, m)| w * m).collect();
    let mut fit = PeriodicityFit { y: samples.y.clone(), mass_weight, harmonics, coefficients: Vec::new() };
    fit.coefficients = (-(harmonics as i64)..=harmonics as i64)
        .map(|l| fit.derivative(Complex64::new(0.0, 2.0 * PI * l as f64)))
        .collect();
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_are_averaged() {
        let s = Samples::from_pairs(vec![(1.0, 0.2), (0.0, 0.5), (1.0, 0.4), (2.0, 0.1)]);
        assert_eq!(s.y(), &[0.0, 1.0, 2.0]);
        assert!((s.mass()[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn quadrature_of_a_uniform_density() {
        let pairs = (0..=1000).map(|i| (i as f64 / 1000.0, 1.0)).collect();
        let s = Samples::from_pairs(pairs);
        let total = laplace_transform(&s, Complex64::new(0.0, 0.0)).unwrap();
        assert!((total.re - 1.0).abs() < 1e-12);
        let e = laplace_transform(&s, Complex64::new(1.0, 0.0)).unwrap();
        assert!((e.re - (1f64.exp() - 1.0)).abs() < 1e-6);
        assert!(laplace_transform(&Samples::from_pairs(vec![(0.0, 1.0)]), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn reconstruction_is_periodic() {
        let pairs = (0..200).map(|i| (i as f64 / 50.0 - 2.0, (-(i as f64 / 50.0 - 1.0).powi(2)).exp())).collect();
        let fit = periodicity_reconstruct(&Samples::from_pairs(pairs), 5).unwrap();
        for x in [0.1, 0.37, 0.9] {
            assert!((fit.w1(x + 1.0) - fit.w1(x)).abs() < 1e-12);
        }
    }
}
