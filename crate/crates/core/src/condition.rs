//! Finite-range checks of the hypotheses on the survivor law:
//! (i) stochastic monotonicity of `Y_n`, (ii) mean increments close to `alpha`,
//! (iii) concentration of `Y_n` around `alpha n`, and the moment bound that
//! implies (iii).

use std::fmt;

use crate::error::{domain, Result};
use crate::law::Pmf;
use crate::survivor::SurvivorModel;

pub const MONOTONE_SLACK: f64 = 1e-12;

/// Flag thresholds and the start of the asymptotic range.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckConfig {
    /// Series are judged on `n >= n0` only.
    pub n0: usize,
    /// Exponent in the increment bound `(ln n)^{-1-eps}` and the tail weight `n^{2+eps}`.
    pub eps: f64,
    /// `delta_n = n^{-delta_exponent}`.
    pub delta_exponent: f64,
    /// Largest admissible weighted tail `Pr(|Y_n - alpha n| > delta_n n) n^{2+eps}`.
    pub tail_bound: f64,
    /// Largest admissible moment ratio `E|Y_n - alpha n|^p / n^{p/2}`.
    pub moment_bound: f64,
    pub moment_p: u32,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { n0: 10, eps: 0.5, delta_exponent: 0.25, tail_bound: 1.0, moment_bound: 10.0, moment_p: 6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The scanned range never reaches `n0`.
    Inconclusive,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// `Pr(Y_{n+1} <= k) - Pr(Y_n <= k) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    pub n: usize,
    pub k: usize,
    pub gap: f64,
}

#[derive(Clone, Debug)]
pub struct MonotoneCheck {
    pub violations: Vec<Violation>,
}

impl MonotoneCheck {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.violations.is_empty())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,gap\n");
        for v in &self.violations {
            out.push_str(&format!("{},{},{:e}\n", v.n, v.k, v.gap));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct IncrementCheck {
    pub alpha: f64,
    pub n0: usize,
    /// `(n, E Y_{n+1} - E Y_n)`.
    pub increments: Vec<(usize, f64)>,
    /// `max_{n >= n0} |d_n - alpha|`.
    pub max_deviation: f64,
    /// Every `n >= n0` with `|d_n - alpha| > (ln n)^{-1-eps}`.
    pub flagged: Vec<usize>,
}

impl IncrementCheck {
    pub fn verdict(&self) -> Verdict {
        if !self.increments.iter().any(|(n, _)| *n >= self.n0) {
            return Verdict::Inconclusive;
        }
        Verdict::from_bool(self.flagged.is_empty())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,increment,deviation\n");
        for (n, d) in &self.increments {
            out.push_str(&format!("{n},{d},{}\n", d - self.alpha));
        }
        out
    }
}

/// A series judged by its supremum over `n >= n0`.
#[derive(Clone, Debug)]
pub struct SeriesCheck {
    pub n0: usize,
    pub bound: f64,
    pub series: Vec<(usize, f64)>,
}

impl SeriesCheck {
    pub fn sup(&self) -> f64 {
        self.series.iter().filter(|(n, _)| *n >= self.n0).map(|(_, v)| *v).fold(0.0, f64::max)
    }

    pub fn verdict(&self) -> Verdict {
        if !self.series.iter().any(|(n, _)| *n >= self.n0) {
            return Verdict::Inconclusive;
        }
        Verdict::from_bool(self.sup() <= self.bound)
    }

    pub fn to_csv(&self, column: &str) -> String {
        let mut out = format!("n,{column}\n");
        for (n, v) in &self.series {
            out.push_str(&format!("{n},{v:e}\n"));
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub model: String,
    pub n_max: usize,
    pub alpha: f64,
    pub monotone: MonotoneCheck,
    pub increment: IncrementCheck,
    pub concentration: SeriesCheck,
    pub moment: SeriesCheck,
}

impl ConditionReport {
    pub fn verdict(&self) -> Verdict {
        self.monotone
            .verdict()
            .and(self.increment.verdict())
            .and(self.concentration.verdict())
            .and(self.moment.verdict())
    }

    /// One machine-readable line.
    pub fn summary_line(&self) -> String {
        format!(
            "{} model={} alpha={} n_max={} monotone={} increment={} concentration={} moment={} violations={} max_increment_deviation={:e} tail_sup={:e} moment_sup={:e}",
            self.verdict(),
            self.model,
            self.alpha,
            self.n_max,
            self.monotone.verdict(),
            self.increment.verdict(),
            self.concentration.verdict(),
            self.moment.verdict(),
            self.monotone.violations.len(),
            self.increment.max_deviation,
            self.concentration.sup(),
            self.moment.sup(),
        )
    }
}

/// Rows `Y_1..=Y_{n_max}`; index 0 is unused.
fn survivor_rows(model: &SurvivorModel, n_max: usize) -> Result<Vec<Pmf>> {
    model.rows(n_max)
}

pub fn check_monotone(model: &SurvivorModel, n_max: usize) -> Result<MonotoneCheck> {
    if n_max < 2 {
        return Err(domain("n_max", n_max, ">= 2"));
    }
    let rows = survivor_rows(model, n_max)?;
    Ok(monotone_from_rows(&rows, n_max))
}

fn monotone_from_rows(rows: &[Pmf], n_max: usize) -> MonotoneCheck {
    let mut violations = Vec::new();
    for n in 1..n_max {
        let lower = rows[n].cdf_vec(n + 1);
        let upper = rows[n + 1].cdf_vec(n + 1);
        for k in 0..=n + 1 {
            let gap = upper[k] - lower[k];
            if gap > MONOTONE_SLACK {
                violations.push(Violation { n, k, gap });
            }
        }
    }
    MonotoneCheck { violations }
}

pub fn check_mean_increment(model: &SurvivorModel, n_max: usize, alpha: f64, config: &CheckConfig) -> Result<IncrementCheck> {
    if n_max < 2 {
        return Err(domain("n_max", n_max, ">= 2"));
    }
    let rows = survivor_rows(model, n_max)?;
    Ok(increment_from_rows(&rows, n_max, alpha, config))
}

fn increment_from_rows(rows: &[Pmf], n_max: usize, alpha: f64, config: &CheckConfig) -> IncrementCheck {
    let means: Vec<f64> = rows.iter().map(|r| r.mean().to_f64()).collect();
    let increments: Vec<(usize, f64)> = (1..n_max).map(|n| (n, means[n + 1] - means[n])).collect();
    let mut max_deviation: f64 = 0.0;
    let mut flagged = Vec::new();
    for (n, d) in &increments {
        if *n < config.n0 {
            continue;
        }
        let dev = (d - alpha).abs();
        max_deviation = max_deviation.max(dev);
        if dev > (*n as f64).ln().powf(-1.0 - config.eps) {
            flagged.push(*n);
        }
    }
    IncrementCheck { alpha, n0: config.n0, increments, max_deviation, flagged }
}

/// `Pr(|Y_n - alpha n| > delta_n n) n^{2 + eps}` with `delta_n = n^{-delta_exponent}`.
pub fn check_concentration(model: &SurvivorModel, n_max: usize, alpha: f64, config: &CheckConfig) -> Result<SeriesCheck> {
    let rows = survivor_rows(model, n_max)?;
    Ok(concentration_from_rows(&rows, n_max, alpha, config))
}

fn concentration_from_rows(rows: &[Pmf], n_max: usize, alpha: f64, config: &CheckConfig) -> SeriesCheck {
    let series = (1..=n_max)
        .map(|n| {
            let nf = n as f64;
            let delta = nf.powf(-config.delta_exponent);
            let tail = rows[n].outside(alpha * nf, delta * nf).to_f64();
            (n, tail * nf.powf(2.0 + config.eps))
        })
        .collect();
    SeriesCheck { n0: config.n0, bound: config.tail_bound, series }
}

/// `E|Y_n - alpha n|^p / n^{p/2}` for even `p`.
pub fn check_moment(model: &SurvivorModel, n_max: usize, alpha: f64, p: u32, config: &CheckConfig) -> Result<SeriesCheck> {
    if p < 2 || !p.is_multiple_of(2) {
        return Err(domain("p", p, "an even integer >= 2"));
    }
    let rows = survivor_rows(model, n_max)?;
    Ok(moment_from_rows(&rows, n_max, alpha, p, config))
}

fn moment_from_rows(rows: &[Pmf], n_max: usize, alpha: f64, p: u32, config: &CheckConfig) -> SeriesCheck {
    let series = (1..=n_max)
        .map(|n| {
            let nf = n as f64;
            (n, rows[n].central_abs_moment(alpha * nf, p) / nf.powf(p as f64 / 2.0))
        })
        .collect();
    SeriesCheck { n0: config.n0, bound: config.moment_bound, series }
}

/// All four checks over `1..=n_max`.
pub fn check_all(model: &SurvivorModel, n_max: usize, alpha: f64, config: &CheckConfig) -> Result<ConditionReport> {
    if n_max < 2 {
        return Err(domain("n_max", n_max, ">= 2"));
    }
    if config.moment_p < 2 || !config.moment_p.is_multiple_of(2) {
        return Err(domain("p", config.moment_p, "an even integer >= 2"));
    }
    let rows = survivor_rows(model, n_max)?;
    Ok(ConditionReport {
        model: model.name(),
        n_max,
        alpha,
        monotone: monotone_from_rows(&rows, n_max),
        increment: increment_from_rows(&rows, n_max, alpha, config),
        concentration: concentration_from_rows(&rows, n_max, alpha, config),
        moment: moment_from_rows(&rows, n_max, alpha, config.moment_p, config),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn biased_coin_first_witness() {
        let m = SurvivorModel::biased_coin(ratio(3, 10)).unwrap();
        let c = check_monotone(&m, 50).unwrap();
        let first = c.violations[0];
        assert_eq!((first.n, first.k), (2, 1));
        // Pr(Y_3 <= 1) = 3(0.3)(0.49) = 0.441 against Pr(Y_2 <= 1) = 2(0.3)(0.7) = 0.42
        assert!((first.gap - 0.021).abs() < 1e-12);
    }

    #[test]
    fn toy_support_is_narrow() {
        let cfg = CheckConfig::default();
        let m = SurvivorModel::toy();
        let mom = check_moment(&m, 100, 0.5, 2, &cfg).unwrap();
        for (n, r) in &mom.series {
            if *n >= 2 {
                assert!(*r <= 0.25 / *n as f64 + 1e-15);
            }
        }
        let conc = check_concentration(&m, 500, 0.5, &cfg).unwrap();
        assert!(conc.series.iter().filter(|(n, _)| *n >= 17).all(|(_, v)| *v == 0.0));
        assert!(check_moment(&m, 10, 0.5, 3, &cfg).is_err());
    }

    #[test]
    fn deterministic_halving_alternates() {
        let c = check_mean_increment(&SurvivorModel::deterministic_halving(), 100, 0.5, &CheckConfig::default()).unwrap();
        assert_eq!(c.verdict(), Verdict::Fail);
        assert!(c.increments.iter().filter(|(n, _)| *n >= 2).all(|(_, d)| *d == 0.0 || *d == 1.0));
    }
}
