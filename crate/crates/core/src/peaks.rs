//! Number of peaks of a uniformly random permutation.
//!
//! Three boundary conventions are supported:
//!
//! * `LinearI`: the two ends are never peaks (sentinels at `+inf`);
//! * `LinearII`: an end is a peak when it exceeds its single neighbour
//!   (sentinels at `-inf`);
//! * `Circular`: indices wrap around.
//!
//! Exact tables come from the count recurrence
//! `W(n,k) = (2k+2) W(n-1,k) + (n-2k) W(n-1,k-1)`, `W(1,0) = 1`, for linear-(i)
//! peaks. The other two variants follow from it: removing the maximum of a
//! circular list of `n+1` values leaves a linear-(i) list whose peaks are the
//! circular peaks minus one, and removing the minimum leaves a linear-(ii)
//! list with the same peaks. Hence `P_C(n,k) = P_I(n-1,k-1)` and
//! `P_II(n,k) = P_C(n+1,k) = P_I(n,k-1)`.
//!
//! The recurrence is checked against brute-force enumeration once per process
//! before any table is handed out.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use statrs::function::erf::erfc;

use crate::error::{domain, Error, Result};
use crate::law::RationalDist;
use crate::rational::ratio;

/// Default cap on exact tables; entries grow like `n!`.
pub const DEFAULT_TABLE_CAP: usize = 120;

/// Default crossover from exact rows to the Gaussian approximation.
pub const DEFAULT_EXACT_CUTOFF: usize = 75;

/// Largest `n` accepted by [`brute_force_peaks`].
pub const BRUTE_FORCE_MAX_N: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeakVariant {
    LinearI,
    LinearII,
    Circular,
}

impl PeakVariant {
    pub const ALL: [PeakVariant; 3] = [PeakVariant::LinearI, PeakVariant::LinearII, PeakVariant::Circular];

    /// Smallest and largest possible peak counts for `n >= 1` values.
    pub fn support(self, n: usize) -> (usize, usize) {
        match self {
            PeakVariant::LinearI => (0, n.saturating_sub(1) / 2),
            PeakVariant::LinearII => (1, n.div_ceil(2)),
            PeakVariant::Circular => (1, (n / 2).max(1)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PeakVariant::LinearI => "linear-i",
            PeakVariant::LinearII => "linear-ii",
            PeakVariant::Circular => "circular",
        }
    }
}

/// Exact peak-count distributions for `1 <= n <= max_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeakTable {
    variant: PeakVariant,
    max_n: usize,
    /// `counts[n][k]`: permutations of `n` values with `k` peaks. Row 0 unused.
    counts: Vec<Vec<BigUint>>,
    factorials: Vec<BigUint>,
}

impl PeakTable {
    pub fn variant(&self) -> PeakVariant {
        self.variant
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    /// Permutation count `W(n,k)` for this variant.
    pub fn count(&self, n: usize, k: usize) -> BigUint {
        self.counts
            .get(n)
            .and_then(|row| row.get(k))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    pub fn prob(&self, n: usize, k: usize) -> BigRational {
        assert!((1..=self.max_n).contains(&n), "row {n} outside table");
        BigRational::new(self.count(n, k).into(), self.factorials[n].clone().into())
    }

    pub fn row(&self, n: usize) -> RationalDist {
        assert!((1..=self.max_n).contains(&n), "row {n} outside table");
        let den: BigRational = BigRational::from_integer(self.factorials[n].clone().into());
        RationalDist::new(
            0,
            self.counts[n]
                .iter()
                .map(|c| BigRational::from_integer(c.clone().into()) / &den)
                .collect(),
        )
    }

    /// CSV with columns `n,k,numerator,denominator` (reduced fractions).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,numerator,denominator\n");
        for n in 1..=self.max_n {
            for k in 0..self.counts[n].len() {
                let p = self.prob(n, k);
                out.push_str(&format!("{n},{k},{},{}\n", p.numer(), p.denom()));
            }
        }
        out
    }
}

fn linear_i_counts(max_n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![Vec::new(), vec![BigUint::one()]];
    for n in 2..=max_n.max(1) {
        let prev = &rows[n - 1];
        let width = (n - 1) / 2 + 1;
        let mut row = vec![BigUint::zero(); width];
        for (k, slot) in row.iter_mut().enumerate() {
            if let Some(w) = prev.get(k) {
                *slot += w * BigUint::from(2 * k + 2);
            }
            if k >= 1 && n >= 2 * k {
                if let Some(w) = prev.get(k - 1) {
                    *slot += w * BigUint::from(n - 2 * k);
                }
            }
        }
        rows.push(row);
    }
    rows.truncate(max_n + 1);
    rows
}

fn counts_for(variant: PeakVariant, max_n: usize) -> Vec<Vec<BigUint>> {
    match variant {
        PeakVariant::LinearI => linear_i_counts(max_n),
        PeakVariant::LinearII => {
            // W_II(n,k) = W_I(n,k-1)
            linear_i_counts(max_n)
                .into_iter()
                .enumerate()
                .map(|(n, row)| {
                    if n == 0 {
                        return row;
                    }
                    std::iter::once(BigUint::zero()).chain(row).collect()
                })
                .collect()
        }
        PeakVariant::Circular => {
            // n! P_C(n,k) = n * (n-1)! P_I(n-1,k-1) for n >= 2; one peak when n = 1.
            let linear = linear_i_counts(max_n.saturating_sub(1).max(1));
            let mut rows = vec![Vec::new(), vec![BigUint::zero(), BigUint::one()]];
            for n in 2..=max_n {
                let row: Vec<BigUint> = std::iter::once(BigUint::zero())
                    .chain(linear[n - 1].iter().map(|w| w * BigUint::from(n)))
                    .collect();
                rows.push(row);
            }
            rows.truncate(max_n + 1);
            rows
        }
    }
}

fn factorials(max_n: usize) -> Vec<BigUint> {
    let mut f = vec![BigUint::one()];
    for n in 1..=max_n {
        let next = &f[n - 1] * BigUint::from(n);
        f.push(next);
    }
    f
}

/// Checks the count recurrence against enumeration for every variant and
/// `n <= 8`. Evaluated once per process.
pub fn recurrence_validated() -> bool {
    static CHECK: OnceLock<bool> = OnceLock::new();
    *CHECK.get_or_init(|| {
        PeakVariant::ALL.iter().all(|&variant| {
            let counts = counts_for(variant, 8);
            let facts = factorials(8);
            (1..=8).all(|n| {
                let den = BigRational::from_integer(facts[n].clone().into());
                let from_rec = RationalDist::new(
                    0,
                    counts[n]
                        .iter()
                        .map(|c| BigRational::from_integer(c.clone().into()) / &den)
                        .collect(),
                );
                brute_force_peaks(variant, n).map(|d| d == from_rec).unwrap_or(false)
            })
        })
    })
}

/// Exact table with the default cap.
pub fn build_peak_table(variant: PeakVariant, max_n: usize) -> Result<PeakTable> {
    build_peak_table_with_cap(variant, max_n, DEFAULT_TABLE_CAP)
}

pub fn build_peak_table_with_cap(variant: PeakVariant, max_n: usize, cap: usize) -> Result<PeakTable> {
    if max_n < 1 {
        return Err(domain("max_n", max_n, ">= 1"));
    }
    if max_n > cap {
        return Err(Error::Resource { requested: max_n, cap });
    }
    if !recurrence_validated() {
        return Err(Error::Config("peak recurrence disagrees with enumeration".into()));
    }
    Ok(PeakTable {
        variant,
        max_n,
        counts: counts_for(variant, max_n),
        factorials: factorials(max_n),
    })
}

fn count_peaks(variant: PeakVariant, xs: &[u8]) -> usize {
    let n = xs.len();
    if n == 1 {
        return match variant {
            PeakVariant::LinearI => 0,
            _ => 1,
        };
    }
    (0..n)
        .filter(|&i| {
            let (left, right) = match variant {
                PeakVariant::Circular => (Some(xs[(i + n - 1) % n]), Some(xs[(i + 1) % n])),
                _ => (i.checked_sub(1).map(|l| xs[l]), xs.get(i + 1).copied()),
            };
            // Missing neighbours are +inf for linear-(i) and -inf for linear-(ii).
            let beats = |nb: Option<u8>| match nb {
                Some(v) => xs[i] > v,
                None => variant == PeakVariant::LinearII,
            };
            beats(left) && beats(right)
        })
        .count()
}

/// Exact peak-count distribution by enumerating all `n!` permutations.
pub fn brute_force_peaks(variant: PeakVariant, n: usize) -> Result<RationalDist> {
    if n == 0 || n > BRUTE_FORCE_MAX_N {
        return Err(domain("n", n, "1..=10 for enumeration"));
    }
    let mut hist = vec![0u64; n + 1];
    let mut perm: Vec<u8> = (0..n as u8).collect();
    for_each_permutation(&mut perm, &mut |p| hist[count_peaks(variant, p)] += 1);
    let total: u64 = hist.iter().sum();
    Ok(RationalDist::new(
        0,
        hist.iter().map(|&c| ratio(c as i64, total as i64)).collect(),
    ))
}

/// Heap's algorithm, iterative form.
pub(crate) fn for_each_permutation<T, F: FnMut(&[T])>(items: &mut [T], visit: &mut F) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Mean of the peak count, with the variance when `n` is in its closed-form range.
#[derive(Clone, Debug, PartialEq)]
pub struct PeakMoments {
    pub mean: BigRational,
    pub variance: Option<BigRational>,
}

/// Closed-form mean and variance:
/// linear-(i) `(n-2)/3`, `2(n+1)/45` (n >= 2, n >= 4);
/// circular `n/3`, `2n/45` (n >= 3, n >= 5);
/// linear-(ii) as circular at `n+1`.
pub fn peak_moments(variant: PeakVariant, n: usize) -> Result<PeakMoments> {
    let n_i = n as i64;
    let (mean_from, var_from, mean, variance) = match variant {
        PeakVariant::LinearI => (2, 4, ratio(n_i - 2, 3), ratio(2 * (n_i + 1), 45)),
        PeakVariant::Circular => (3, 5, ratio(n_i, 3), ratio(2 * n_i, 45)),
        PeakVariant::LinearII => (2, 4, ratio(n_i + 1, 3), ratio(2 * (n_i + 1), 45)),
    };
    if n < mean_from {
        return Err(domain("n", n, "inside the closed-form moment range"));
    }
    Ok(PeakMoments { mean, variance: (n >= var_from).then_some(variance) })
}

/// Discretized normal approximation of a peak-count row.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianApprox {
    pub mean: f64,
    pub variance: f64,
    pub support_lo: usize,
    pub support_hi: usize,
}

fn upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

impl GaussianApprox {
    /// Mass on `[lo, hi]`, taken as normal CDF differences at `k +- 1/2` and
    /// renormalized over the support.
    pub fn pmf(&self) -> Vec<f64> {
        let sd = self.variance.sqrt();
        let mass = |k: usize| {
            let a = (k as f64 - 0.5 - self.mean) / sd;
            let b = (k as f64 + 0.5 - self.mean) / sd;
            // Difference of upper tails on the right, of lower tails on the left.
            if a >= 0.0 {
                upper_tail(a) - upper_tail(b)
            } else {
                upper_tail(-b) - upper_tail(-a)
            }
        };
        let raw: Vec<f64> = (self.support_lo..=self.support_hi).map(mass).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / total).collect()
    }

    pub fn mean_of_pmf(&self) -> f64 {
        self.pmf()
            .iter()
            .enumerate()
            .map(|(i, p)| (self.support_lo + i) as f64 * p)
            .sum()
    }
}

/// Gaussian row for `n` above `crossover`.
pub fn gaussian_row(variant: PeakVariant, n: usize, crossover: usize) -> Result<GaussianApprox> {
    if n <= crossover {
        return Err(domain("n", n, "above the exact/Gaussian crossover"));
    }
    let m = peak_moments(variant, n)?;
    let variance = m
        .variance
        .ok_or_else(|| domain("n", n, "inside the variance formula range"))?;
    let (lo, hi) = variant.support(n);
    Ok(GaussianApprox {
        mean: crate::rational::to_f64(&m.mean),
        variance: crate::rational::to_f64(&variance),
        support_lo: lo,
        support_hi: hi,
    })
}

/// Mean of the exact row as a rational, for cross-checks against `peak_moments`.
pub fn exact_row_mean(table: &PeakTable, n: usize) -> BigRational {
    table.row(n).mean()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn linear_i_small_rows_match_hand_counts() {
        let t = build_peak_table(PeakVariant::LinearI, 7).unwrap();
        assert_eq!(t.prob(3, 1), ratio(1, 3));
        assert_eq!(t.prob(5, 2), ratio(2, 15));
        assert_eq!(t.prob(7, 3), ratio(17, 315));
        assert_eq!(t.row(2), RationalDist::point(0));
        assert_eq!(t.row(1), RationalDist::point(0));
    }

    #[test]
    fn circular_table_row_seven() {
        let t = build_peak_table(PeakVariant::Circular, 7).unwrap();
        assert_eq!(t.prob(7, 1), ratio(2, 45));
        assert_eq!(t.prob(7, 2), ratio(26, 45));
        assert_eq!(t.prob(7, 3), ratio(17, 45));
        assert_eq!(t.row(1), RationalDist::point(1));
        assert_eq!(t.row(2), RationalDist::point(1));
    }

    #[test]
    fn brute_force_edge_cases() {
        assert_eq!(brute_force_peaks(PeakVariant::LinearI, 1).unwrap(), RationalDist::point(0));
        assert_eq!(
            brute_force_peaks(PeakVariant::LinearI, 4).unwrap(),
            RationalDist::new(0, vec![ratio(1, 3), ratio(2, 3)])
        );
        assert!(brute_force_peaks(PeakVariant::Circular, 11).is_err());
        assert!(brute_force_peaks(PeakVariant::Circular, 0).is_err());
    }

    #[test]
    fn caps_and_domains() {
        assert!(matches!(
            build_peak_table(PeakVariant::LinearI, 121),
            Err(Error::Resource { requested: 121, cap: 120 })
        ));
        assert!(build_peak_table(PeakVariant::LinearI, 0).is_err());
        assert!(peak_moments(PeakVariant::LinearI, 1).is_err());
        assert!(peak_moments(PeakVariant::Circular, 3).unwrap().variance.is_none());
        assert_eq!(peak_moments(PeakVariant::Circular, 3).unwrap().mean, int(1));
        assert!(gaussian_row(PeakVariant::LinearI, 75, 75).is_err());
    }

    #[test]
    fn gaussian_row_support_and_mass() {
        let g = gaussian_row(PeakVariant::LinearI, 76, 75).unwrap();
        assert_eq!(g.support_hi, 37);
        let total: f64 = g.pmf().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
