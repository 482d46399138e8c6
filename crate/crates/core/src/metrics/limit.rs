//! Collapse of `Lambda(n, j)` onto a limit function of `j - log n`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::phase::PhaseTable;

pub const SPREAD_BIN_WIDTH: f64 = 0.05;
pub const MONOTONE_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitPoint {
    pub n: usize,
    pub j: usize,
    /// `j - log_base n`.
    pub x: f64,
    pub y: f64,
}

/// Which table entry to scatter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `Lambda(n,j) = Pr(X_n <= j)`.
    Cdf,
    /// `Pi(n,j) = Pr(X_n = j)`.
    Mass,
}

/// Scatter of `(j - log_base n, quantity(n, j))` over rows in `n_range`, sorted by `x`.
pub fn scatter(table: &PhaseTable, base: f64, n_range: RangeInclusive<usize>, quantity: Quantity) -> Result<Vec<LimitPoint>> {
    check_range(table, &n_range)?;
    let mut points = Vec::new();
    for n in n_range {
        let log_n = (n as f64).ln() / base.ln();
        for j in 0..=table.j_max() {
            let y = match quantity {
                Quantity::Cdf => table.cdf(n, j),
                Quantity::Mass => table.prob(n, j),
            };
            points.push(LimitPoint { n, j, x: j as f64 - log_n, y });
        }
    }
    points.sort_by(|a, b| a.x.total_cmp(&b.x));
    Ok(points)
}

fn check_range(table: &PhaseTable, n_range: &RangeInclusive<usize>) -> Result<()> {
    if n_range.is_empty() {
        return Err(Error::InvalidParameter("empty n range".into()));
    }
    if *n_range.end() > table.max_n() {
        return Err(Error::Resource { requested: *n_range.end(), cap: table.max_n() });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EmpiricalLimit {
    pub points: Vec<LimitPoint>,
    /// Largest vertical spread inside an x-bin, over the upper half of the n range.
    pub spread: f64,
    /// Number of adjacent bins whose mean drops by more than [`MONOTONE_TOLERANCE`].
    pub monotone_violations: usize,
}

pub fn empirical_limit(table: &PhaseTable, base: f64, n_range: RangeInclusive<usize>) -> Result<EmpiricalLimit> {
    let lo = *n_range.start();
    let hi = *n_range.end();
    let points = scatter(table, base, n_range, Quantity::Cdf)?;
    let upper = lo + (hi - lo) / 2;

    let mut bins: Vec<(i64, f64, f64, f64, usize)> = Vec::new(); // (bin, min, max, sum, count)
    for p in points.iter().filter(|p| p.n >= upper) {
        let b = (p.x / SPREAD_BIN_WIDTH).floor() as i64;
        match bins.iter_mut().find(|e| e.0 == b) {
            Some(e) => {
                e.1 = e.1.min(p.y);
                e.2 = e.2.max(p.y);
                e.3 += p.y;
                e.4 += 1;
            }
            None => bins.push((b, p.y, p.y, p.y, 1)),
        }
    }
    bins.sort_by_key(|e| e.0);
    let spread = bins.iter().map(|e| e.2 - e.1).fold(0.0, f64::max);
    let means: Vec<f64> = bins.iter().map(|e| e.3 / e.4 as f64).collect();
    let monotone_violations = means.windows(2).filter(|w| w[1] < w[0] - MONOTONE_TOLERANCE).count();
    Ok(EmpiricalLimit { points, spread, monotone_violations })
}

/// `sup_j |Lambda(n,j) - f(j - log_base n)|`.
pub fn cdf_sup_distance(table: &PhaseTable, n: usize, base: f64, f: impl Fn(f64) -> f64) -> f64 {
    let log_n = (n as f64).ln() / base.ln();
    (0..=table.j_max())
        .map(|j| (table.cdf(n, j) - f(j as f64 - log_n)).abs())
        .fold(0.0, f64::max)
}

/// `sup_j |Pi(n,j) - (f(x) - f(x - 1))|` at `x = j - log_base n`.
pub fn mass_sup_distance(table: &PhaseTable, n: usize, base: f64, f: impl Fn(f64) -> f64) -> f64 {
    let log_n = (n as f64).ln() / base.ln();
    (0..=table.j_max())
        .map(|j| {
            let x = j as f64 - log_n;
            (table.prob(n, j) - (f(x) - f(x - 1.0))).abs()
        })
        .fold(0.0, f64::max)
}
