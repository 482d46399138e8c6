//! Exact law of the number of rounds `X_n`.
//!
//! Columns are filled one at a time: `Pi(n,j) = sum_k P(n,k) Pi(k,j-1)` for
//! every non-terminal `n`. Rows with an exact survivor law are carried as
//! rationals; rows above the model's exact cutoff are floats that read the
//! lower rows through their float images. Self-loops (`P(n,n) > 0`) are
//! handled naturally by the column order and make the column count
//! unbounded, so filling stops once every row has less than `column_eps`
//! mass left.
//!
//! States `1..=a` are absorbing with `X = 0`. For linear-(i) peaks a round may
//! leave no peak at all; state 0 then stands for the emergency pick of a
//! random survivor, which costs nothing under [`Init::Standard`] and one extra
//! round under [`Init::AltCost`].

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::law::{Pmf, Value};
use crate::rational::{int, to_f64};
use crate::survivor::SurvivorModel;

/// Initial values of the recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Init {
    /// `Pi(0,0) = Pi(1,0) = 1`.
    Standard,
    /// `Pi(0,1) = Pi(1,0) = 1`: selecting a survivor after an empty round costs a round.
    AltCost,
}

impl Init {
    pub fn name(self) -> &'static str {
        match self {
            Init::Standard => "standard",
            Init::AltCost => "altcost",
        }
    }
}

pub const DEFAULT_COLUMN_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseConfig {
    pub max_n: usize,
    /// Stop as soon as at most this many players remain; 0 means "run until
    /// nobody is left" and needs a chain absorbed at zero.
    pub threshold: usize,
    pub init: Init,
    /// Stop adding columns when `max_n (1 - Lambda(n, j)) < column_eps`; with 0,
    /// continue until no mass is left.
    pub column_eps: f64,
    pub max_columns: usize,
}

impl PhaseConfig {
    pub fn new(max_n: usize) -> Self {
        PhaseConfig {
            max_n,
            threshold: 1,
            init: Init::Standard,
            column_eps: DEFAULT_COLUMN_EPS,
            max_columns: 100_000,
        }
    }

    pub fn threshold(mut self, a: usize) -> Self {
        self.threshold = a;
        self
    }

    pub fn init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    pub fn column_eps(mut self, eps: f64) -> Self {
        self.column_eps = eps;
        self
    }
}

/// The transition rows an engine run works with, plus which states are terminal.
struct Chain {
    rows: Vec<Pmf>,
    rows_f64: Vec<Vec<f64>>,
    /// Rows `0..=exact_upto` have exact laws.
    exact_upto: usize,
    threshold: usize,
}

impl Chain {
    fn build(model: &SurvivorModel, max_n: usize, threshold: usize) -> Result<Chain> {
        if threshold == 0 && model.absorbing_state() != 0 {
            return Err(Error::ThresholdMismatch {
                model: model.name(),
                threshold,
                reason: "the chain never reaches zero",
            });
        }
        let rows = if threshold == 0 { model.rows(max_n)? } else { model.chain_rows(max_n)? };
        let rows_f64 = rows.iter().map(Pmf::probs_f64).collect();
        let exact_upto = rows
            .iter()
            .position(|r| !r.is_exact())
            .map_or(max_n, |first_float| first_float.saturating_sub(1));
        Ok(Chain { rows, rows_f64, exact_upto, threshold })
    }

    fn terminal(&self, n: usize) -> bool {
        n <= self.threshold
    }

    fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `P(n,n)` and the sum over `k < n`, both for exact rows.
    fn self_loop_exact(&self, n: usize) -> BigRational {
        self.rows[n].exact().map(|d| d.get(n)).unwrap_or_else(BigRational::zero)
    }

    fn self_loop_f64(&self, n: usize) -> f64 {
        self.rows[n].prob_f64(n)
    }
}

/// Value of `X` at a terminal state.
fn terminal_phases(state: usize, threshold: usize, init: Init) -> usize {
    if state == 0 && threshold >= 1 && init == Init::AltCost {
        1
    } else {
        0
    }
}

/// `Pi(n,j) = Pr(X_n = j)` for `0 <= n <= max_n`.
#[derive(Clone, Debug)]
pub struct PhaseTable {
    model: SurvivorModel,
    config: PhaseConfig,
    exact_upto: usize,
    exact: Vec<Vec<BigRational>>,
    prob: Vec<Vec<f64>>,
    lambda: Vec<Vec<f64>>,
    x: Vec<Value>,
    x_columns: Vec<Value>,
}

/// Fills a [`PhaseTable`].
pub fn compute_phase_table(model: &SurvivorModel, config: PhaseConfig) -> Result<PhaseTable> {
    if config.max_n < 1 {
        return Err(crate::error::domain("max_n", config.max_n, ">= 1"));
    }
    let chain = Chain::build(model, config.max_n, config.threshold)?;
    let max_n = chain.max_n();
    let a = config.threshold;
    let exact_upto = chain.exact_upto;

    let mut exact: Vec<Vec<BigRational>> = vec![Vec::new(); exact_upto + 1];
    let mut prob: Vec<Vec<f64>> = vec![Vec::new(); max_n + 1];

    let terminal_value = |n: usize, j: usize| -> bool { terminal_phases(n, a, config.init) == j };

    // column 0
    for n in 0..=max_n {
        let hit = chain.terminal(n) && terminal_value(n, 0);
        if n <= exact_upto {
            exact[n].push(if hit { BigRational::one() } else { BigRational::zero() });
        }
        prob[n].push(if hit { 1.0 } else { 0.0 });
    }
    let mut mass_exact: Vec<BigRational> = exact.iter().map(|c| c[0].clone()).collect();
    let mut mass: Vec<f64> = prob.iter().map(|c| c[0]).collect();

    let mut j = 0;
    loop {
        let residual = (0..=max_n)
            .map(|n| {
                if n <= exact_upto {
                    to_f64(&(BigRational::one() - &mass_exact[n]))
                } else {
                    1.0 - mass[n]
                }
            })
            .fold(0.0f64, f64::max);
        if j >= 1 && (residual < config.column_eps || residual <= 0.0) {
            break;
        }
        if j >= config.max_columns {
            return Err(Error::Config(format!(
                "phase table did not reach residual {} within {} columns",
                config.column_eps, config.max_columns
            )));
        }
        j += 1;
        for n in 0..=max_n {
            if chain.terminal(n) {
                let hit = terminal_value(n, j);
                if n <= exact_upto {
                    exact[n].push(if hit { BigRational::one() } else { BigRational::zero() });
                }
                prob[n].push(if hit { 1.0 } else { 0.0 });
                continue;
            }
            let row = &chain.rows[n];
            let offset = row.offset();
            if n <= exact_upto {
                let d = row.exact().expect("exact row");
                let mut acc = BigRational::zero();
                for (i, p) in d.probs().iter().enumerate() {
                    let prev = &exact[offset + i][j - 1];
                    if !prev.is_zero() {
                        acc += p * prev;
                    }
                }
                prob[n].push(to_f64(&acc));
                exact[n].push(acc);
            } else {
                let acc: f64 = chain.rows_f64[n]
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p * prob[offset + i][j - 1])
                    .sum();
                prob[n].push(acc);
            }
        }
        for n in 0..=max_n {
            if n <= exact_upto {
                let add = exact[n][j].clone();
                mass_exact[n] += add;
            }
            mass[n] += prob[n][j];
        }
    }

    let lambda = prob
        .iter()
        .map(|col| {
            let mut acc = 0.0;
            col.iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect()
        })
        .collect();

    let x = means_by_recursion(&chain, config.init);
    let x_columns = (0..=max_n)
        .map(|n| {
            if n <= exact_upto {
                Value::Exact(
                    exact[n]
                        .iter()
                        .enumerate()
                        .fold(BigRational::zero(), |acc, (j, p)| acc + p * int(j as i64)),
                )
            } else {
                Value::Float(prob[n].iter().enumerate().map(|(j, p)| j as f64 * p).sum())
            }
        })
        .collect();

    Ok(PhaseTable {
        model: model.clone(),
        config,
        exact_upto,
        exact,
        prob,
        lambda,
        x,
        x_columns,
    })
}

/// `x(n) = (1 + sum_{k<n} P(n,k) x(k)) / (1 - P(n,n))`.
fn means_by_recursion(chain: &Chain, init: Init) -> Vec<Value> {
    let max_n = chain.max_n();
    let mut exact: Vec<BigRational> = Vec::with_capacity(chain.exact_upto + 1);
    let mut float: Vec<f64> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        if chain.terminal(n) {
            let t = terminal_phases(n, chain.threshold, init);
            if n <= chain.exact_upto {
                exact.push(int(t as i64));
            }
            float.push(t as f64);
            continue;
        }
        let row = &chain.rows[n];
        let offset = row.offset();
        if n <= chain.exact_upto {
            let d = row.exact().expect("exact row");
            let mut acc = BigRational::one();
            for (i, p) in d.probs().iter().enumerate() {
                if offset + i < n {
                    acc += p * &exact[offset + i];
                }
            }
            let v = acc / (BigRational::one() - chain.self_loop_exact(n));
            float.push(to_f64(&v));
            exact.push(v);
        } else {
            let mut acc = 1.0;
            for (i, p) in chain.rows_f64[n].iter().enumerate() {
                if offset + i < n {
                    acc += p * float[offset + i];
                }
            }
            float.push(acc / (1.0 - chain.self_loop_f64(n)));
        }
    }
    (0..=max_n)
        .map(|n| {
            if n <= chain.exact_upto {
                Value::Exact(exact[n].clone())
            } else {
                Value::Float(float[n])
            }
        })
        .collect()
}

impl PhaseTable {
    pub fn model(&self) -> &SurvivorModel {
        &self.model
    }

    pub fn config(&self) -> &PhaseConfig {
        &self.config
    }

    pub fn max_n(&self) -> usize {
        self.prob.len() - 1
    }

    pub fn threshold(&self) -> usize {
        self.config.threshold
    }

    pub fn init(&self) -> Init {
        self.config.init
    }

    /// Rows `0..=exact_upto()` carry exact rationals.
    pub fn exact_upto(&self) -> usize {
        self.exact_upto
    }

    /// Number of columns minus one.
    pub fn j_max(&self) -> usize {
        self.prob[0].len() - 1
    }

    pub fn prob(&self, n: usize, j: usize) -> f64 {
        self.prob[n].get(j).copied().unwrap_or(0.0)
    }

    pub fn exact(&self, n: usize, j: usize) -> Option<BigRational> {
        self.exact
            .get(n)
            .map(|col| col.get(j).cloned().unwrap_or_else(BigRational::zero))
    }

    pub fn value(&self, n: usize, j: usize) -> Value {
        match self.exact(n, j) {
            Some(r) => Value::Exact(r),
            None => Value::Float(self.prob(n, j)),
        }
    }

    /// `Lambda(n,j) = Pr(X_n <= j)`.
    pub fn cdf(&self, n: usize, j: usize) -> f64 {
        let col = &self.lambda[n];
        col.get(j).copied().unwrap_or_else(|| *col.last().unwrap_or(&0.0))
    }

    pub fn cdf_exact(&self, n: usize, j: usize) -> Option<BigRational> {
        self.exact.get(n).map(|col| {
            col.iter()
                .take(j + 1)
                .fold(BigRational::zero(), |acc, p| acc + p)
        })
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.prob[n]
    }

    /// Means from the survivor recursion (exact on exact rows).
    pub fn x(&self, n: usize) -> &Value {
        &self.x[n]
    }

    /// Means from `sum_j j Pi(n,j)` over the computed columns.
    pub fn x_columns(&self, n: usize) -> &Value {
        &self.x_columns[n]
    }

    pub fn row_mass(&self, n: usize) -> f64 {
        self.cdf(n, self.j_max())
    }

    /// CSV `n,j,prob` over all rows and columns.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,j,prob\n");
        for n in 0..=self.max_n() {
            for (j, p) in self.prob[n].iter().enumerate() {
                out.push_str(&format!("{n},{j},{p:e}\n"));
            }
        }
        out
    }

    /// CSV `n,j,numerator,denominator` over the exact rows.
    pub fn to_exact_csv(&self) -> String {
        let mut out = String::from("n,j,numerator,denominator\n");
        for (n, col) in self.exact.iter().enumerate() {
            for (j, p) in col.iter().enumerate() {
                out.push_str(&format!("{n},{j},{},{}\n", p.numer(), p.denom()));
            }
        }
        out
    }

    /// CSV `n,x,log_alpha_n,phi_residual` with logarithms in base `base = 1/alpha`.
    pub fn means_csv(&self, base: f64) -> String {
        let mut out = String::from("n,x,log_alpha_n,phi_residual\n");
        for n in 1..=self.max_n() {
            let x = self.x[n].to_f64();
            let l = (n as f64).ln() / base.ln();
            out.push_str(&format!("{n},{x},{l},{}\n", x - l));
        }
        out
    }
}

/// Both evaluations of the mean number of rounds.
#[derive(Clone, Debug)]
pub struct MeanPhases {
    pub by_recursion: Vec<Value>,
    pub by_columns: Vec<Value>,
    /// Largest `|by_recursion - by_columns|` over all rows.
    pub max_discrepancy: f64,
}

pub fn mean_phases(table: &PhaseTable) -> MeanPhases {
    let max_discrepancy = table
        .x
        .iter()
        .zip(&table.x_columns)
        .map(|(a, b)| match (a, b) {
            (Value::Exact(a), Value::Exact(b)) => to_f64(&(a - b)).abs(),
            _ => (a.to_f64() - b.to_f64()).abs(),
        })
        .fold(0.0, f64::max);
    MeanPhases {
        by_recursion: table.x.clone(),
        by_columns: table.x_columns.clone(),
        max_discrepancy,
    }
}

/// `pi_i(n)`: probability that the run stopped at threshold `a` ends with
/// exactly `i` players, `i = 1..=a`.
#[derive(Clone, Debug)]
pub struct EndingStates {
    pub threshold: usize,
    /// `probs[n][i - 1]`.
    pub probs: Vec<Vec<Value>>,
}

impl EndingStates {
    pub fn get(&self, n: usize, i: usize) -> &Value {
        &self.probs[n][i - 1]
    }
}

pub fn ending_state_probs(model: &SurvivorModel, max_n: usize, threshold: usize) -> Result<EndingStates> {
    if threshold < 1 {
        return Err(crate::error::domain("threshold", threshold, ">= 1"));
    }
    let chain = Chain::build(model, max_n, threshold)?;
    let a = threshold;
    // An empty linear-(i) round ends with one randomly picked survivor.
    let end_index = |s: usize| if s == 0 { 0 } else { s - 1 };

    let mut exact: Vec<Vec<BigRational>> = Vec::new();
    let mut float: Vec<Vec<f64>> = Vec::new();
    for n in 0..=max_n {
        if chain.terminal(n) {
            let mut e = vec![BigRational::zero(); a];
            e[end_index(n)] = BigRational::one();
            if n <= chain.exact_upto {
                exact.push(e);
            }
            let mut f = vec![0.0; a];
            f[end_index(n)] = 1.0;
            float.push(f);
            continue;
        }
        let row = &chain.rows[n];
        let offset = row.offset();
        if n <= chain.exact_upto {
            let d = row.exact().expect("exact row");
            let stay = BigRational::one() - chain.self_loop_exact(n);
            let e: Vec<BigRational> = (0..a)
                .map(|i| {
                    let mut acc = BigRational::zero();
                    for (t, p) in d.probs().iter().enumerate() {
                        if offset + t < n {
                            acc += p * &exact[offset + t][i];
                        }
                    }
                    acc / &stay
                })
                .collect();
            float.push(e.iter().map(to_f64).collect());
            exact.push(e);
        } else {
            let stay = 1.0 - chain.self_loop_f64(n);
            let f: Vec<f64> = (0..a)
                .map(|i| {
                    chain.rows_f64[n]
                        .iter()
                        .enumerate()
                        .filter(|(t, _)| offset + t < n)
                        .map(|(t, p)| p * float[offset + t][i])
                        .sum::<f64>()
                        / stay
                })
                .collect();
            float.push(f);
        }
    }
    let probs = (0..=max_n)
        .map(|n| {
            if n <= chain.exact_upto {
                exact[n].iter().cloned().map(Value::Exact).collect()
            } else {
                float[n].iter().copied().map(Value::Float).collect()
            }
        })
        .collect();
    Ok(EndingStates { threshold, probs })
}

/// State occupancy of a run started from `start`.
#[derive(Clone, Debug)]
pub struct Occupancy {
    pub start: usize,
    pub threshold: usize,
    /// Expected number of rounds that begin (or, for terminal states, end) in state `k`.
    pub visits: Vec<Value>,
    /// `Q(k)`: probability that state `k` is ever occupied.
    pub hits: Vec<Value>,
    /// `R(j,k)`: probability that round `j` ends with `k` players, in floats,
    /// until less than `column_eps` of the runs are still going.
    pub rounds: Vec<Vec<f64>>,
}

impl Occupancy {
    /// `x(start)` as the expected number of rounds started from non-terminal states.
    pub fn phases_from_visits(&self) -> f64 {
        (self.threshold + 1..=self.start).map(|k| self.visits[k].to_f64()).sum()
    }

    /// `x(start) = sum_{k < start} Q(k)`; valid for chains without self-loops.
    pub fn phases_from_hits(&self) -> f64 {
        (0..self.start).map(|k| self.hits[k].to_f64()).sum()
    }

    /// `sum_{j >= 1} sum_k R(j,k)`, truncated.
    pub fn phases_from_rounds(&self) -> f64 {
        self.rounds.iter().skip(1).flatten().sum()
    }
}

/// Occupancy for the single-winner chain (threshold 1) started from `max_n`.
pub fn occupancy_probs(model: &SurvivorModel, max_n: usize) -> Result<Occupancy> {
    occupancy_with_threshold(model, max_n, 1, DEFAULT_COLUMN_EPS)
}

pub fn occupancy_with_threshold(
    model: &SurvivorModel,
    start: usize,
    threshold: usize,
    column_eps: f64,
) -> Result<Occupancy> {
    let chain = Chain::build(model, start, threshold)?;
    let exact = start <= chain.exact_upto;

    // Visits, descending from the start.
    let mut v_exact = vec![BigRational::zero(); if exact { start + 1 } else { 0 }];
    let mut v_float = vec![0.0; start + 1];
    for k in (0..=start).rev() {
        if exact {
            let mut acc = if k == start { BigRational::one() } else { BigRational::zero() };
            for (l, v) in v_exact.iter().enumerate().skip(k + 1) {
                if !chain.terminal(l) {
                    acc += v * chain.rows[l].exact().expect("exact row").get(k);
                }
            }
            if !chain.terminal(k) {
                acc /= BigRational::one() - chain.self_loop_exact(k);
            }
            v_float[k] = to_f64(&acc);
            v_exact[k] = acc;
        } else {
            let mut acc = if k == start { 1.0 } else { 0.0 };
            for (l, v) in v_float.iter().enumerate().skip(k + 1) {
                if !chain.terminal(l) {
                    acc += v * chain.rows[l].prob_f64(k);
                }
            }
            if !chain.terminal(k) {
                acc /= 1.0 - chain.self_loop_f64(k);
            }
            v_float[k] = acc;
        }
    }
    let visits: Vec<Value> = (0..=start)
        .map(|k| if exact { Value::Exact(v_exact[k].clone()) } else { Value::Float(v_float[k]) })
        .collect();
    let hits = (0..=start)
        .map(|k| match &visits[k] {
            Value::Exact(v) if !chain.terminal(k) => {
                Value::Exact(v * (BigRational::one() - chain.self_loop_exact(k)))
            }
            Value::Float(v) if !chain.terminal(k) => Value::Float(v * (1.0 - chain.self_loop_f64(k))),
            other => other.clone(),
        })
        .collect();

    let mut rounds = vec![{
        let mut r0 = vec![0.0; start + 1];
        r0[start] = 1.0;
        r0
    }];
    loop {
        let prev = rounds.last().expect("nonempty");
        let alive: f64 = (0..=start).filter(|&l| !chain.terminal(l)).map(|l| prev[l]).sum();
        if alive < column_eps || rounds.len() > 100_000 {
            break;
        }
        let mut next = vec![0.0; start + 1];
        for (l, &mass) in prev.iter().enumerate() {
            if chain.terminal(l) || mass == 0.0 {
                continue;
            }
            let offset = chain.rows[l].offset();
            for (t, p) in chain.rows_f64[l].iter().enumerate() {
                next[offset + t] += mass * p;
            }
        }
        rounds.push(next);
    }

    Ok(Occupancy { start, threshold, visits, hits, rounds })
}
