//! Closed forms for the toy halving model and the fair coin.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::f64::consts::{LN_2, PI};

use super::special::{gamma, zeta};
use crate::rational::int;
use statrs::function::erf::erfc;

/// Values of the toy model's limit objects at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToyClosedForms {
    /// `F(x)`: 0 below -1, `2 - 2^{-x}` on `[-1, 0]`, 1 above 0.
    pub f: f64,
    /// `phi(2^x) = 2^{x - floor x} - (x - floor x) - 1`.
    pub phi: f64,
    /// `psi_2(2^x) = |2^{1 + x - floor x} - 3|`.
    pub psi2: f64,
}

pub fn toy_closed_forms(x: f64) -> ToyClosedForms {
    let f = if x <= -1.0 {
        0.0
    } else if x >= 0.0 {
        1.0
    } else {
        2.0 - (-x).exp2()
    };
    let frac = x - x.floor();
    ToyClosedForms { f, phi: frac.exp2() - frac - 1.0, psi2: ((1.0 + frac).exp2() - 3.0).abs() }
}

fn floor_log2(n: u64) -> u32 {
    63 - n.leading_zeros()
}

fn pow2(i: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << i)
}

/// Exact `Pr(X_n <= j)` for the toy model, `n >= 1`.
pub fn toy_cdf_exact(n: u64, j: u32) -> BigRational {
    let n_r = int(n as i64);
    let lo = pow2(j);
    if n_r <= lo {
        BigRational::one()
    } else if n_r >= pow2(j + 1) {
        BigRational::zero()
    } else {
        int(2) - n_r / lo
    }
}

/// Exact `E X_n = floor(log2 n) + n / 2^{floor(log2 n)} - 1` for the toy model.
pub fn toy_mean_exact(n: u64) -> BigRational {
    let i = floor_log2(n);
    int(i as i64) + int(n as i64) / pow2(i) - int(1)
}

/// Exact probability that the toy model stopped at three players ends with two, `n >= 2`.
pub fn toy_pi2_exact(n: u64) -> BigRational {
    let i = floor_log2(n);
    let v = int(n as i64) * int(2) / pow2(i) - int(3);
    if v < BigRational::zero() {
        -v
    } else {
        v
    }
}

/// Limit distribution function of the fair-coin model.
pub fn fair_coin_f(x: f64) -> f64 {
    let u = (-x).exp2();
    if u == 0.0 {
        return 1.0;
    }
    u / u.exp_m1()
}

/// The constant term of [`fair_coin_phi`].
pub const FAIR_COIN_PHI_MEAN: f64 = 0.5;

/// Fluctuating part of the fair-coin mean, `E X_n ~ log2 n + phi(n)`,
/// with the Fourier series cut at `|k| <= l`.
pub fn fair_coin_phi(t: f64, l: usize) -> f64 {
    let u = t.log2();
    let mut sum = 0.0;
    for k in 1..=l {
        let chi = Complex64::new(0.0, 2.0 * PI * k as f64 / LN_2);
        let s = 1.0 - chi;
        let wave = Complex64::new(0.0, 2.0 * PI * k as f64 * u).exp();
        // the -k term is the complex conjugate
        sum += 2.0 * (zeta(s) * gamma(s) * wave).re;
    }
    FAIR_COIN_PHI_MEAN - sum / LN_2
}

/// Gumbel distribution function with the given mean and variance.
pub fn gumbel_cdf(x: f64, mean: f64, variance: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let beta = (6.0 * variance).sqrt() / PI;
    let mu = mean - EULER_GAMMA * beta;
    (-(-(x - mu) / beta).exp()).exp()
}

/// Normal distribution function with the given mean and variance.
pub fn normal_cdf(x: f64, mean: f64, variance: f64) -> f64 {
    0.5 * erfc(-(x - mean) / (2.0 * variance).sqrt())
}
