//! Monte Carlo simulation of Franklin's election on a ring, with persistent
//! keys, and of the variants that redraw keys every round.
//!
//! A player survives a round when its key beats the keys of its nearest
//! surviving neighbours. Every round costs `2n` messages (each of the `n`
//! ring positions sends or relays one message each way); `active_sends`
//! counts only the messages sent by players still alive.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::peaks::{for_each_permutation, PeakVariant};
use crate::rational::ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    TruePersistent,
    RedrawCircular,
    RedrawLinearI,
    RedrawLinearII,
}

impl Variant {
    pub const ALL: [Variant; 4] =
        [Variant::TruePersistent, Variant::RedrawCircular, Variant::RedrawLinearI, Variant::RedrawLinearII];

    pub fn name(self) -> &'static str {
        match self {
            Variant::TruePersistent => "true-persistent",
            Variant::RedrawCircular => "redraw-circular",
            Variant::RedrawLinearI => "redraw-linear-i",
            Variant::RedrawLinearII => "redraw-linear-ii",
        }
    }

    /// The peak law a redraw variant follows each round.
    pub fn peak_variant(self) -> Option<PeakVariant> {
        match self {
            Variant::TruePersistent => None,
            Variant::RedrawCircular => Some(PeakVariant::Circular),
            Variant::RedrawLinearI => Some(PeakVariant::LinearI),
            Variant::RedrawLinearII => Some(PeakVariant::LinearII),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variant {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimConfig {
    pub variant: Variant,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    /// Stop once at most this many players remain.
    pub stop_threshold: usize,
}

impl SimConfig {
    pub fn new(variant: Variant, n: usize, trials: u64, seed: u64) -> Self {
        SimConfig { variant, n, trials, seed, stop_threshold: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(domain("n", self.n, ">= 2"));
        }
        if self.trials < 1 {
            return Err(domain("trials", self.trials, ">= 1"));
        }
        if self.stop_threshold < 1 {
            return Err(domain("stop_threshold", self.stop_threshold, ">= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub rounds: u32,
    pub messages: u64,
    pub active_sends: u64,
    /// Survivors after each round.
    pub trace: Vec<u32>,
}

/// Independent generator for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn distinct_keys(rng: &mut ChaCha8Rng, m: usize) -> Vec<u64> {
    loop {
        let keys: Vec<u64> = (0..m).map(|_| rng.random()).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            return keys;
        }
    }
}

/// Positions (into `keys`) that beat their neighbours.
fn peaks(keys: &[u64], circular: bool, ends_count: bool) -> Vec<usize> {
    let m = keys.len();
    if m == 1 {
        return vec![0];
    }
    (0..m)
        .filter(|&i| {
            let left = if i > 0 { Some(keys[i - 1]) } else if circular { Some(keys[m - 1]) } else { None };
            let right = if i + 1 < m { Some(keys[i + 1]) } else if circular { Some(keys[0]) } else { None };
            match (left, right) {
                (Some(l), Some(r)) => keys[i] > l && keys[i] > r,
                (Some(x), None) | (None, Some(x)) => ends_count && keys[i] > x,
                (None, None) => true,
            }
        })
        .collect()
}

/// One round on the given keys; returns the surviving positions.
fn round(variant: Variant, keys: &[u64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    match variant {
        Variant::TruePersistent | Variant::RedrawCircular => peaks(keys, true, false),
        Variant::RedrawLinearII => peaks(keys, false, true),
        Variant::RedrawLinearI => {
            let p = peaks(keys, false, false);
            if p.is_empty() {
                // emergency exit: one player picked at random
                let all: Vec<usize> = (0..keys.len()).collect();
                vec![*all.choose(rng).expect("nonempty")]
            } else {
                p
            }
        }
    }
}

/// Runs one trial for at most `max_rounds` rounds.
pub fn run_trial(config: &SimConfig, trial: u64, max_rounds: Option<u32>) -> TrialRecord {
    let mut rng = trial_rng(config.seed, trial);
    let n = config.n;
    let mut keys = distinct_keys(&mut rng, n);
    let mut rec = TrialRecord { trial, rounds: 0, messages: 0, active_sends: 0, trace: Vec::new() };
    while keys.len() > config.stop_threshold && max_rounds.is_none_or(|m| rec.rounds < m) {
        if config.variant != Variant::TruePersistent && rec.rounds > 0 {
            keys = distinct_keys(&mut rng, keys.len());
        }
        rec.messages += 2 * n as u64;
        rec.active_sends += 2 * keys.len() as u64;
        let survivors = round(config.variant, &keys, &mut rng);
        keys = survivors.into_iter().map(|i| keys[i]).collect();
        rec.rounds += 1;
        rec.trace.push(keys.len() as u32);
    }
    rec
}

/// Every trial, in trial order; the result does not depend on the thread count.
pub fn run_election(config: &SimConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    Ok((0..config.trials).into_par_iter().map(|t| run_trial(config, t, None)).collect())
}

/// Histogram of the number of rounds over all trials.
pub fn rounds_histogram(config: &SimConfig) -> Result<Vec<u64>> {
    config.validate()?;
    let hist = (0..config.trials)
        .into_par_iter()
        .fold(Vec::new, |mut h: Vec<u64>, t| {
            let r = run_trial(config, t, None).rounds as usize;
            if h.len() <= r {
                h.resize(r + 1, 0);
            }
            h[r] += 1;
            h
        })
        .reduce(Vec::new, merge_histograms);
    Ok(hist)
}

fn merge_histograms(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimEstimate {
    pub statistic: String,
    pub point: f64,
    pub stderr: f64,
    pub trials: u64,
    pub histogram: Option<Vec<u64>>,
}

impl SimEstimate {
    fn from_values(statistic: &str, values: &[f64]) -> Self {
        let k = values.len() as f64;
        let mean = values.iter().sum::<f64>() / k;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
        } else {
            0.0
        };
        SimEstimate { statistic: statistic.into(), point: mean, stderr: (var / k).sqrt(), trials: values.len() as u64, histogram: None }
    }

    /// `(point - reference) / stderr`.
    pub fn z_score(&self, reference: f64) -> f64 {
        (self.point - reference) / self.stderr
    }
}

/// `c_2 = (3e^4 - 48e^2 + 233) / 384`.
pub fn c2_closed_form() -> f64 {
    let e2 = std::f64::consts::E.powi(2);
    (3.0 * e2 * e2 - 48.0 * e2 + 233.0) / 384.0
}

/// Mean number of survivors after two rounds, divided by `n`.
pub fn estimate_c2(variant: Variant, n: usize, trials: u64, seed: u64) -> Result<SimEstimate> {
    let config = SimConfig::new(variant, n, trials, seed);
    config.validate()?;
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let rec = run_trial(&config, t, Some(2));
            *rec.trace.last().unwrap_or(&(n as u32)) as f64 / n as f64
        })
        .collect();
    Ok(SimEstimate::from_values("c2", &values))
}

/// Mean message count divided by `2n log_3 n`.
pub fn message_ratio(records: &[TrialRecord], n: usize) -> SimEstimate {
    let scale = 2.0 * n as f64 * (n as f64).ln() / 3f64.ln();
    let values: Vec<f64> = records.iter().map(|r| r.messages as f64 / scale).collect();
    SimEstimate::from_values("messages_over_2n_log3n", &values)
}

/// Mean of `S_r / S_{r-1}` per round `r`, over the trials that reached round `r`.
pub fn survival_ratios(records: &[TrialRecord], n: usize) -> Vec<SimEstimate> {
    let depth = records.iter().map(|r| r.trace.len()).max().unwrap_or(0);
    (0..depth)
        .filter_map(|r| {
            let values: Vec<f64> = records
                .iter()
                .filter(|rec| rec.trace.len() > r)
                .map(|rec| {
                    let before = if r == 0 { n as f64 } else { rec.trace[r - 1] as f64 };
                    rec.trace[r] as f64 / before
                })
                .collect();
            (values.len() >= 2).then(|| SimEstimate::from_values(&format!("survival_ratio_round_{}", r + 1), &values))
        })
        .collect()
}

/// Second-round behaviour of an 8-ring conditioned on 4 first-round survivors.
#[derive(Clone, Debug)]
pub struct ConditionalCheck {
    /// Exact value over all `8!` rings with persistent keys.
    pub exhaustive: BigRational,
    /// The same conditional probability when keys are redrawn.
    pub redraw_exact: BigRational,
    pub monte_carlo: SimEstimate,
}

pub const CONDITIONAL_RING: usize = 8;
const MIN_CONDITIONING_EVENTS: u64 = 1000;

/// Exhaustive conditional probability of 2 second-round survivors given 4
/// first-round survivors, persistent keys, ring of 8.
pub fn conditional_exhaustive() -> BigRational {
    let mut keys: Vec<u64> = (1..=CONDITIONAL_RING as u64).collect();
    let mut four = 0i64;
    let mut two_after = 0i64;
    for_each_permutation(&mut keys, &mut |ring: &[u64]| {
        let first: Vec<u64> = peaks(ring, true, false).into_iter().map(|i| ring[i]).collect();
        if first.len() == 4 {
            four += 1;
            if peaks(&first, true, false).len() == 2 {
                two_after += 1;
            }
        }
    });
    ratio(two_after, four)
}

pub fn conditional_second_round_check(trials: u64, seed: u64) -> Result<ConditionalCheck> {
    let config = SimConfig::new(Variant::TruePersistent, CONDITIONAL_RING, trials, seed);
    config.validate()?;
    let outcomes: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let rec = run_trial(&config, t, Some(2));
            (rec.trace.first() == Some(&4)).then(|| f64::from(u8::from(rec.trace.get(1) == Some(&2))))
        })
        .collect();
    let values: Vec<f64> = outcomes.into_iter().flatten().collect();
    if (values.len() as u64) < MIN_CONDITIONING_EVENTS {
        return Err(Error::Config(format!(
            "only {} conditioning events in {trials} trials; need {MIN_CONDITIONING_EVENTS}",
            values.len()
        )));
    }
    let redraw_exact = crate::peaks::build_peak_table(PeakVariant::Circular, 4)?.prob(4, 2);
    Ok(ConditionalCheck {
        exhaustive: conditional_exhaustive(),
        redraw_exact,
        monte_carlo: SimEstimate::from_values("pr_two_given_four", &values),
    })
}

pub fn results_csv(config: &SimConfig, records: &[TrialRecord]) -> String {
    let mut out = String::from("variant,n,trial,rounds,messages\n");
    for r in records {
        out.push_str(&format!("{},{},{},{},{}\n", config.variant, config.n, r.trial, r.rounds, r.messages));
    }
    out
}

pub fn summary_csv(rows: &[(Variant, usize, SimEstimate)]) -> String {
    let mut out = String::from("variant,n,stat,point,stderr,trials\n");
    for (v, n, e) in rows {
        out.push_str(&format!("{v},{n},{},{},{},{}\n", e.statistic, e.point, e.stderr, e.trials));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_players_take_one_round() {
        for v in [Variant::TruePersistent, Variant::RedrawCircular, Variant::RedrawLinearII, Variant::RedrawLinearI] {
            let recs = run_election(&SimConfig::new(v, 2, 200, 3)).unwrap();
            assert!(recs.iter().all(|r| r.rounds == 1 && r.messages == 4 && r.active_sends == 4), "{v}");
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let c = SimConfig::new(Variant::RedrawLinearI, 30, 50, 11);
        assert_eq!(run_election(&c).unwrap(), run_election(&c).unwrap());
        let other = SimConfig { seed: 12, ..c.clone() };
        assert_ne!(run_election(&c).unwrap(), run_election(&other).unwrap());
    }

    #[test]
    fn peak_rules() {
        assert_eq!(peaks(&[3, 1, 2], true, false), vec![0]);
        assert_eq!(peaks(&[1, 3, 2], false, false), vec![1]);
        assert_eq!(peaks(&[3, 1, 2], false, false), Vec::<usize>::new());
        assert_eq!(peaks(&[3, 1, 2], false, true), vec![0, 2]);
    }

    #[test]
    fn c2_value() {
        assert!((c2_closed_form() - 0.109_686_868_1).abs() < 1e-9);
    }

    #[test]
    fn rare_conditioning_is_a_config_error() {
        assert!(matches!(conditional_second_round_check(10, 1), Err(Error::Config(_))));
    }
}
