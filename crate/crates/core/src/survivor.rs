//! Survivor-count laws `Y_n`: how many of `n` players remain after one round.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::law::{Pmf, RationalDist, Value};
use crate::peaks::{self, PeakVariant, DEFAULT_EXACT_CUTOFF, DEFAULT_TABLE_CAP};
use crate::rational::{self, ratio, to_f64};

/// Floating pmfs drop tail mass below this on each side.
pub const TAIL_TRUNCATION: f64 = 1e-15;

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    /// `Y_n = floor((n + I)/2)` with a fair coin `I`.
    ToyHalving,
    /// `Y_n = floor(n/2)`.
    DeterministicHalving,
    /// Heads survive; if nobody throws heads everybody survives.
    FairCoin,
    BiasedCoin { p: BigRational },
    /// `Y_n = max(W_n, 1)`.
    CoinMaxOne { p: BigRational },
    /// `Y_n = max(W_n - I_nu, 0)`; absorbs at zero.
    DemonCoin { p: BigRational, nu: BigRational },
    PeakLinearI,
    PeakLinearII,
    PeakCircular,
    ExplicitMatrix(Arc<TransitionMatrix>),
}

/// A named survivor law with its exact/floating crossover.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivorModel {
    kind: ModelKind,
    exact_cutoff: usize,
}

impl fmt::Display for SurvivorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn check_open_unit(what: &'static str, p: &BigRational) -> Result<()> {
    if p.is_positive() && p < &BigRational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} = {p} must lie in (0,1)")))
    }
}

impl SurvivorModel {
    pub fn new(kind: ModelKind) -> Result<Self> {
        match &kind {
            ModelKind::BiasedCoin { p } | ModelKind::CoinMaxOne { p } => check_open_unit("p", p)?,
            ModelKind::DemonCoin { p, nu } => {
                check_open_unit("p", p)?;
                if !rational::is_probability(nu) {
                    return Err(Error::InvalidParameter(format!("nu = {nu} must lie in [0,1]")));
                }
            }
            _ => {}
        }
        Ok(SurvivorModel { kind, exact_cutoff: DEFAULT_EXACT_CUTOFF })
    }

    pub fn toy() -> Self {
        SurvivorModel { kind: ModelKind::ToyHalving, exact_cutoff: DEFAULT_EXACT_CUTOFF }
    }

    pub fn deterministic_halving() -> Self {
        SurvivorModel { kind: ModelKind::DeterministicHalving, exact_cutoff: DEFAULT_EXACT_CUTOFF }
    }

    pub fn fair_coin() -> Self {
        SurvivorModel { kind: ModelKind::FairCoin, exact_cutoff: DEFAULT_EXACT_CUTOFF }
    }

    pub fn biased_coin(p: BigRational) -> Result<Self> {
        Self::new(ModelKind::BiasedCoin { p })
    }

    pub fn coin_max_one(p: BigRational) -> Result<Self> {
        Self::new(ModelKind::CoinMaxOne { p })
    }

    pub fn demon(p: BigRational, nu: BigRational) -> Result<Self> {
        Self::new(ModelKind::DemonCoin { p, nu })
    }

    pub fn peaks(variant: PeakVariant) -> Self {
        let kind = match variant {
            PeakVariant::LinearI => ModelKind::PeakLinearI,
            PeakVariant::LinearII => ModelKind::PeakLinearII,
            PeakVariant::Circular => ModelKind::PeakCircular,
        };
        SurvivorModel { kind, exact_cutoff: DEFAULT_EXACT_CUTOFF }
    }

    pub fn explicit(matrix: TransitionMatrix) -> Self {
        SurvivorModel {
            kind: ModelKind::ExplicitMatrix(Arc::new(matrix)),
            exact_cutoff: DEFAULT_EXACT_CUTOFF,
        }
    }

    /// Parses a command-line style model name such as `fair-coin` or `peak-circular`.
    pub fn from_name(
        name: &str,
        p: Option<&str>,
        nu: Option<&str>,
        matrix: Option<TransitionMatrix>,
    ) -> Result<Self> {
        let need_p = || -> Result<BigRational> {
            rational::parse(p.ok_or_else(|| Error::InvalidParameter(format!("{name} needs --p")))?)
        };
        match name {
            "toy" | "toy-halving" => Ok(Self::toy()),
            "det-halving" | "deterministic-halving" => Ok(Self::deterministic_halving()),
            "fair-coin" => Ok(Self::fair_coin()),
            "biased-coin" => Self::biased_coin(need_p()?),
            "coin-max-one" | "emergency-exit" => Self::coin_max_one(need_p()?),
            "demon" | "demon-coin" => {
                let nu = rational::parse(nu.unwrap_or("0"))?;
                Self::demon(need_p()?, nu)
            }
            "peak-linear-i" => Ok(Self::peaks(PeakVariant::LinearI)),
            "peak-linear-ii" => Ok(Self::peaks(PeakVariant::LinearII)),
            "peak-circular" => Ok(Self::peaks(PeakVariant::Circular)),
            "explicit" => matrix
                .map(Self::explicit)
                .ok_or_else(|| Error::InvalidParameter("explicit model needs a matrix file".into())),
            other => Err(Error::UnknownModel(other.to_string())),
        }
    }

    pub fn with_exact_cutoff(mut self, cutoff: usize) -> Self {
        self.exact_cutoff = cutoff;
        self
    }

    pub fn exact_cutoff(&self) -> usize {
        self.exact_cutoff
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ModelKind::ToyHalving => "toy".into(),
            ModelKind::DeterministicHalving => "det-halving".into(),
            ModelKind::FairCoin => "fair-coin".into(),
            ModelKind::BiasedCoin { p } => format!("biased-coin(p={p})"),
            ModelKind::CoinMaxOne { p } => format!("coin-max-one(p={p})"),
            ModelKind::DemonCoin { p, nu } => format!("demon(p={p},nu={nu})"),
            ModelKind::PeakLinearI => "peak-linear-i".into(),
            ModelKind::PeakLinearII => "peak-linear-ii".into(),
            ModelKind::PeakCircular => "peak-circular".into(),
            ModelKind::ExplicitMatrix(m) => format!("explicit({} rows)", m.max_state()),
        }
    }

    pub fn peak_variant(&self) -> Option<PeakVariant> {
        match self.kind {
            ModelKind::PeakLinearI => Some(PeakVariant::LinearI),
            ModelKind::PeakLinearII => Some(PeakVariant::LinearII),
            ModelKind::PeakCircular => Some(PeakVariant::Circular),
            _ => None,
        }
    }

    /// 0 for chains absorbed at zero (the demon), 1 otherwise.
    pub fn absorbing_state(&self) -> usize {
        match &self.kind {
            ModelKind::DemonCoin { .. } => 0,
            ModelKind::ExplicitMatrix(m) if m.reaches_zero() => 0,
            _ => 1,
        }
    }

    /// Whether `Y_n = 0` can occur even though the chain does not absorb at zero
    /// (linear-(i) peaks: the "no peak" emergency exit).
    pub fn has_emergency_zero(&self) -> bool {
        matches!(self.kind, ModelKind::PeakLinearI)
    }

    fn coin_params(&self) -> Option<(BigRational, CoinRule)> {
        match &self.kind {
            ModelKind::FairCoin => Some((ratio(1, 2), CoinRule::AllSurvive)),
            ModelKind::BiasedCoin { p } => Some((p.clone(), CoinRule::AllSurvive)),
            ModelKind::CoinMaxOne { p } => Some((p.clone(), CoinRule::KeepOne)),
            ModelKind::DemonCoin { p, nu } => Some((p.clone(), CoinRule::Demon(nu.clone()))),
            _ => None,
        }
    }

    fn min_n(&self) -> usize {
        if self.absorbing_state() == 0 {
            0
        } else {
            1
        }
    }

    /// Law of `Y_n`.
    pub fn pmf(&self, n: usize) -> Result<Pmf> {
        if n < self.min_n() {
            return Err(domain("n", n, ">= 1"));
        }
        let exact = n <= self.exact_cutoff;
        match &self.kind {
            ModelKind::ToyHalving => {
                let d = if n <= 1 {
                    RationalDist::point(1)
                } else if n.is_multiple_of(2) {
                    RationalDist::point(n / 2)
                } else {
                    RationalDist::new(n / 2, vec![ratio(1, 2), ratio(1, 2)])
                };
                Ok(finish(d, exact))
            }
            ModelKind::DeterministicHalving => {
                let d = RationalDist::point(if n <= 1 { 1 } else { n / 2 });
                Ok(finish(d, exact))
            }
            ModelKind::PeakLinearI | ModelKind::PeakLinearII | ModelKind::PeakCircular => {
                let variant = self.peak_variant().expect("peak kind");
                if exact {
                    let cap = DEFAULT_TABLE_CAP.max(self.exact_cutoff);
                    let table = peaks::build_peak_table_with_cap(variant, n, cap)?;
                    Ok(Pmf::Exact(table.row(n)))
                } else {
                    let g = peaks::gaussian_row(variant, n, self.exact_cutoff)?;
                    Ok(truncated_float(g.support_lo, g.pmf()))
                }
            }
            ModelKind::ExplicitMatrix(m) => m.row(n).map(Pmf::Exact),
            _ => {
                let (p, rule) = self.coin_params().expect("coin kind");
                if exact {
                    Ok(Pmf::Exact(coin_exact(n, &p, &rule)))
                } else {
                    Ok(coin_float(n, to_f64(&p), &rule))
                }
            }
        }
    }

    /// Rows `Y_1..=Y_max_n` (index 0 holds `Y_0` when the chain has one).
    /// Peak tables are built once for the whole exact range.
    pub fn rows(&self, max_n: usize) -> Result<Vec<Pmf>> {
        let mut out = Vec::with_capacity(max_n + 1);
        out.push(if self.min_n() == 0 { self.pmf(0)? } else { Pmf::Exact(RationalDist::point(0)) });
        if let Some(variant) = self.peak_variant() {
            let exact_to = max_n.min(self.exact_cutoff);
            if exact_to >= 1 {
                let cap = DEFAULT_TABLE_CAP.max(self.exact_cutoff);
                let table = peaks::build_peak_table_with_cap(variant, exact_to, cap)?;
                out.extend((1..=exact_to).map(|n| Pmf::Exact(table.row(n))));
            }
            for n in exact_to + 1..=max_n {
                out.push(self.pmf(n)?);
            }
            return Ok(out);
        }
        for n in 1..=max_n {
            out.push(self.pmf(n)?);
        }
        Ok(out)
    }

    /// Law driving the absorption chain: the dummy-shifted `Y'_n = Y_{n-1} + 1`
    /// for the demon, `Y_n` otherwise.
    pub fn chain_pmf(&self, n: usize) -> Result<Pmf> {
        match &self.kind {
            ModelKind::DemonCoin { .. } => {
                if n == 0 {
                    return Err(domain("n", n, ">= 1 for the dummy-shifted chain"));
                }
                if n == 1 {
                    return Ok(Pmf::Exact(RationalDist::point(1)));
                }
                Ok(shift_up(self.pmf(n - 1)?))
            }
            _ => self.pmf(n),
        }
    }

    /// Rows of [`SurvivorModel::chain_pmf`] for `0..=max_n` (row 0 is a placeholder).
    pub fn chain_rows(&self, max_n: usize) -> Result<Vec<Pmf>> {
        match &self.kind {
            ModelKind::DemonCoin { .. } => {
                let mut out = vec![Pmf::Exact(RationalDist::point(0))];
                for n in 1..=max_n {
                    out.push(self.chain_pmf(n)?);
                }
                Ok(out)
            }
            _ => self.rows(max_n),
        }
    }

    pub fn mean(&self, n: usize) -> Result<Value> {
        Ok(self.pmf(n)?.mean())
    }

    pub fn cdf(&self, n: usize, k: usize) -> Result<Value> {
        Ok(self.pmf(n)?.cdf(k))
    }

    /// Inverse-CDF sampler for a fixed `n`.
    pub fn sampler(&self, n: usize) -> Result<Sampler> {
        Sampler::new(&self.pmf(n)?)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<usize> {
        Ok(self.sampler(n)?.sample(rng))
    }
}

fn finish(d: RationalDist, exact: bool) -> Pmf {
    if exact {
        Pmf::Exact(d)
    } else {
        Pmf::float(d.offset(), d.to_f64())
    }
}

fn shift_up(pmf: Pmf) -> Pmf {
    match pmf {
        Pmf::Exact(d) => Pmf::Exact(d.shifted(1)),
        Pmf::Float { offset, probs } => Pmf::Float { offset: offset + 1, probs },
    }
}

#[derive(Clone, Debug)]
enum CoinRule {
    AllSurvive,
    KeepOne,
    Demon(BigRational),
}

fn binomial_exact(n: usize, p: &BigRational) -> Vec<BigRational> {
    let q = BigRational::one() - p;
    let mut p_pow = vec![BigRational::one()];
    let mut q_pow = vec![BigRational::one()];
    for i in 1..=n {
        p_pow.push(&p_pow[i - 1] * p);
        q_pow.push(&q_pow[i - 1] * &q);
    }
    let mut binom = BigInt::one();
    (0..=n)
        .map(|k| {
            let term = BigRational::from_integer(binom.clone()) * &p_pow[k] * &q_pow[n - k];
            binom = &binom * BigInt::from(n - k) / BigInt::from(k + 1);
            term
        })
        .collect()
}

fn coin_exact(n: usize, p: &BigRational, rule: &CoinRule) -> RationalDist {
    if n == 0 {
        return RationalDist::point(0);
    }
    let w = binomial_exact(n, p);
    match rule {
        CoinRule::AllSurvive | CoinRule::KeepOne if n == 1 => RationalDist::point(1),
        CoinRule::AllSurvive => {
            let mut y = w.clone();
            let zero = std::mem::replace(&mut y[0], BigRational::zero());
            y[n] += zero;
            RationalDist::new(0, y)
        }
        CoinRule::KeepOne => {
            let mut y = w.clone();
            let zero = std::mem::replace(&mut y[0], BigRational::zero());
            y[1] += zero;
            RationalDist::new(0, y)
        }
        CoinRule::Demon(nu) => {
            let keep = BigRational::one() - nu;
            let mut y: Vec<BigRational> = (0..=n)
                .map(|k| {
                    let next = w.get(k + 1).cloned().unwrap_or_else(BigRational::zero);
                    &keep * &w[k] + nu * next
                })
                .collect();
            // Pr(Y=0) = Pr(W=0) + nu Pr(W=1)
            y[0] = &w[0] + nu * w.get(1).cloned().unwrap_or_else(BigRational::zero);
            RationalDist::new(0, y)
        }
    }
}

/// Binomial weights built outward from the mode, normalized, so that no
/// log-gamma differences of large numbers are needed.
fn binomial_float(n: usize, p: f64) -> Vec<f64> {
    let q = 1.0 - p;
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as usize;
    let mut w = vec![0.0; n + 1];
    w[mode] = 1.0;
    let ratio_up = p / q;
    for k in mode..n {
        w[k + 1] = w[k] * ((n - k) as f64 / (k + 1) as f64) * ratio_up;
        if w[k + 1] < 1e-300 {
            break;
        }
    }
    for k in (1..=mode).rev() {
        w[k - 1] = w[k] * (k as f64 / (n - k + 1) as f64) / ratio_up;
        if w[k - 1] < 1e-300 {
            break;
        }
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

fn coin_float(n: usize, p: f64, rule: &CoinRule) -> Pmf {
    let w = binomial_float(n, p);
    let y = match rule {
        CoinRule::AllSurvive => {
            let mut y = w.clone();
            y[n] += y[0];
            y[0] = 0.0;
            y
        }
        CoinRule::KeepOne => {
            let mut y = w.clone();
            y[1] += y[0];
            y[0] = 0.0;
            y
        }
        CoinRule::Demon(nu) => {
            let nu = to_f64(nu);
            let mut y: Vec<f64> = (0..=n)
                .map(|k| (1.0 - nu) * w[k] + nu * w.get(k + 1).copied().unwrap_or(0.0))
                .collect();
            y[0] = w[0] + nu * w.get(1).copied().unwrap_or(0.0);
            y
        }
    };
    truncated_float(0, y)
}

/// Drops tail mass below [`TAIL_TRUNCATION`] on each side and renormalizes.
pub(crate) fn truncated_float(offset: usize, probs: Vec<f64>) -> Pmf {
    let mut lo = 0;
    let mut acc = 0.0;
    while lo < probs.len() && acc + probs[lo] < TAIL_TRUNCATION {
        acc += probs[lo];
        lo += 1;
    }
    let mut hi = probs.len();
    acc = 0.0;
    while hi > lo + 1 && acc + probs[hi - 1] < TAIL_TRUNCATION {
        acc += probs[hi - 1];
        hi -= 1;
    }
    let kept = &probs[lo..hi];
    let total: f64 = kept.iter().sum();
    Pmf::float(offset + lo, kept.iter().map(|p| p / total).collect())
}

/// Inverse-CDF sampler over a fixed law.
#[derive(Clone, Debug)]
pub struct Sampler {
    offset: usize,
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(pmf: &Pmf) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::InvalidParameter("empty law".into()));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = pmf
            .probs_f64()
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let last = cdf.len() - 1;
        cdf[last] = f64::INFINITY;
        Ok(Sampler { offset: pmf.offset(), cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.offset + self.cdf.partition_point(|&c| c <= u)
    }
}

/// User-supplied transition probabilities `P(i,j)`, `1 <= i <= max_state`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    rows: Vec<RationalDist>,
}

impl TransitionMatrix {
    /// Validates row-stochasticity, `P(i,j) = 0` for `j > i`, and `P(i,i) < 1`
    /// for `i >= 2`.
    pub fn new(rows: Vec<RationalDist>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Matrix("need at least row i = 1".into()));
        }
        for (i, row) in rows.iter().enumerate().skip(1) {
            if row.probs().is_empty() {
                return Err(Error::Matrix(format!("row {i} is missing")));
            }
            if row.probs().iter().any(|p| p.is_negative()) {
                return Err(Error::Matrix(format!("row {i} has a negative entry")));
            }
            if row.total() != BigRational::one() {
                return Err(Error::Matrix(format!("row {i} sums to {}", row.total())));
            }
            if row.max_value() > i {
                return Err(Error::Matrix(format!("row {i} moves up to state {}", row.max_value())));
            }
            if i >= 2 && row.get(i) == BigRational::one() {
                return Err(Error::Matrix(format!("row {i} never leaves state {i}")));
            }
        }
        Ok(TransitionMatrix { rows })
    }

    /// Reads `i,j,prob` rows (header optional); probabilities as decimals or `p/q`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pairs: Vec<(usize, usize, BigRational)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if lineno == 0 && fields.first().is_some_and(|f| f.parse::<usize>().is_err()) {
                continue;
            }
            let [i, j, prob] = fields[..] else {
                return Err(Error::Matrix(format!("line {}: expected i,j,prob", lineno + 1)));
            };
            let i: usize = i
                .parse()
                .map_err(|_| Error::Matrix(format!("line {}: bad state `{i}`", lineno + 1)))?;
            let j: usize = j
                .parse()
                .map_err(|_| Error::Matrix(format!("line {}: bad state `{j}`", lineno + 1)))?;
            if i == 0 {
                return Err(Error::Matrix(format!("line {}: rows start at i = 1", lineno + 1)));
            }
            if j > i {
                return Err(Error::Matrix(format!("line {}: P({i},{j}) with j > i", lineno + 1)));
            }
            pairs.push((i, j, rational::parse(prob)?));
        }
        let max_i = pairs.iter().map(|(i, _, _)| *i).max().unwrap_or(0);
        let mut dense: Vec<Vec<BigRational>> = vec![Vec::new(); max_i + 1];
        for (i, j, p) in pairs {
            let row = &mut dense[i];
            if row.len() <= j {
                row.resize(j + 1, BigRational::zero());
            }
            row[j] += p;
        }
        let mut rows: Vec<RationalDist> = dense.into_iter().map(|r| RationalDist::new(0, r)).collect();
        rows[0] = RationalDist::point(0);
        Self::new(rows)
    }

    pub fn max_state(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn reaches_zero(&self) -> bool {
        self.rows.iter().skip(1).any(|r| r.offset() == 0)
    }

    pub fn row(&self, i: usize) -> Result<RationalDist> {
        if i == 0 && self.reaches_zero() {
            return Ok(RationalDist::point(0));
        }
        self.rows
            .get(i)
            .filter(|_| i >= 1)
            .cloned()
            .ok_or_else(|| domain("n", i, "a state listed in the transition matrix"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn toy_rows() {
        let m = SurvivorModel::toy();
        assert_eq!(
            m.pmf(5).unwrap(),
            Pmf::Exact(RationalDist::new(2, vec![ratio(1, 2), ratio(1, 2)]))
        );
        assert_eq!(m.pmf(8).unwrap(), Pmf::Exact(RationalDist::point(4)));
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            assert_eq!(m.sample(8, &mut rng).unwrap(), 4);
        }
    }

    #[test]
    fn fair_coin_all_tails_keeps_everybody() {
        let d = SurvivorModel::fair_coin().pmf(3).unwrap();
        let d = d.exact().unwrap();
        assert_eq!(d.get(1), ratio(3, 8));
        assert_eq!(d.get(2), ratio(3, 8));
        assert_eq!(d.get(3), ratio(1, 4));
        assert_eq!(d.get(0), int(0));
    }

    #[test]
    fn emergency_exit_and_demon() {
        let p = ratio(1, 3);
        let m = SurvivorModel::coin_max_one(p.clone()).unwrap();
        let d = m.pmf(2).unwrap();
        // W ~ Bin(2,1/3): 4/9, 4/9, 1/9; zero goes to one.
        assert_eq!(d.prob(1).exact().cloned().unwrap(), ratio(8, 9));
        let demon = SurvivorModel::demon(p, ratio(1, 2)).unwrap();
        let d = demon.pmf(1).unwrap();
        // W ~ Bin(1,1/3); Y = max(W - I, 0)
        assert_eq!(d.prob(0).exact().cloned().unwrap(), ratio(2, 3) + ratio(1, 6));
        assert_eq!(d.prob(1).exact().cloned().unwrap(), ratio(1, 6));
        assert_eq!(demon.pmf(0).unwrap(), Pmf::Exact(RationalDist::point(0)));
        let shifted = demon.chain_pmf(2).unwrap();
        assert_eq!(shifted.prob(1).exact().cloned().unwrap(), ratio(5, 6));
        assert_eq!(shifted.prob(2).exact().cloned().unwrap(), ratio(1, 6));
    }

    #[test]
    fn parameter_validation() {
        assert!(SurvivorModel::biased_coin(int(0)).is_err());
        assert!(SurvivorModel::biased_coin(int(1)).is_err());
        assert!(SurvivorModel::demon(ratio(1, 2), ratio(3, 2)).is_err());
        assert!(SurvivorModel::demon(ratio(1, 2), int(1)).is_ok());
        assert!(matches!(
            SurvivorModel::from_name("nonsense", None, None, None),
            Err(Error::UnknownModel(_))
        ));
        assert!(SurvivorModel::fair_coin().pmf(0).is_err());
    }

    #[test]
    fn float_binomial_matches_exact_and_truncates() {
        let m = SurvivorModel::fair_coin().with_exact_cutoff(10);
        let exact = SurvivorModel::fair_coin().with_exact_cutoff(100).pmf(60).unwrap();
        let float = m.pmf(60).unwrap();
        assert!(!float.is_exact());
        assert!(float.offset() > 0);
        for k in float.offset()..=float.max_value() {
            let (a, b) = (exact.prob_f64(k), float.prob_f64(k));
            assert!((a - b).abs() < 1e-14 * a.max(1e-300) + 1e-16, "k={k}: {a} vs {b}");
        }
        assert!((float.total().to_f64() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_matrix_parsing_and_validation() {
        let csv = "i,j,prob\n1,1,1\n2,1,0.5\n2,2,1/2\n3,1,1/3\n3,2,2/3\n";
        let m = TransitionMatrix::from_csv(csv).unwrap();
        assert_eq!(m.max_state(), 3);
        assert!(!m.reaches_zero());
        assert_eq!(m.row(2).unwrap().get(2), ratio(1, 2));
        assert!(TransitionMatrix::from_csv("1,1,1\n2,1,0.4\n").is_err());
        assert!(TransitionMatrix::from_csv("1,1,1\n2,2,1\n").is_err());
        assert!(TransitionMatrix::from_csv("1,1,1\n2,3,1\n").is_err());
        assert!(TransitionMatrix::from_csv("1,1,1\n3,1,1\n").is_err());
        let model = SurvivorModel::explicit(m);
        assert_eq!(model.mean(3).unwrap(), Value::Exact(ratio(5, 3)));
        assert!(model.pmf(4).is_err());
    }
}
