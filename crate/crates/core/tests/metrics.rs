use std::f64::consts::PI;

use electra_core::metrics::{
    dtv, dw, empirical_limit, fair_coin_f, fair_coin_phi, laplace_transform, mass_sup_distance,
    periodicity_reconstruct, periodicity_samples, IntegerLaw,
};
use electra_core::phase::compute_phase_table;
use electra_core::{Init, PeakVariant, PhaseConfig, PhaseTable, SurvivorModel};
use num_complex::Complex64;
use proptest::prelude::*;

fn fair(max_n: usize) -> PhaseTable {
    compute_phase_table(&SurvivorModel::fair_coin(), PhaseConfig::new(max_n)).unwrap()
}

fn toy(max_n: usize) -> PhaseTable {
    compute_phase_table(&SurvivorModel::toy(), PhaseConfig::new(max_n)).unwrap()
}

fn toy_f(x: f64) -> f64 {
    if x <= -1.0 {
        0.0
    } else if x >= 0.0 {
        1.0
    } else {
        2.0 - (-x).exp2()
    }
}

fn law() -> impl Strategy<Value = IntegerLaw> {
    (-5i64..5, prop::collection::vec(0.0f64..1.0, 1..8)).prop_filter_map("zero mass", |(o, w)| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| IntegerLaw::new(o, w.iter().map(|x| x / s).collect()).unwrap())
    })
}

proptest! {
    #[test]
    fn distance_axioms(a in law(), b in law(), c in law()) {
        let ab = dtv(&a, &b);
        prop_assert!((ab - dtv(&b, &a)).abs() < 1e-12);
        prop_assert!((dw(&a, &b) - dw(&b, &a)).abs() < 1e-12);
        prop_assert!(ab <= dw(&a, &b) + 1e-12);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
        prop_assert!(dtv(&a, &c) <= ab + dtv(&b, &c) + 1e-12);
        prop_assert!(dw(&a, &c) <= dw(&a, &b) + dw(&b, &c) + 1e-12);
        prop_assert!(dtv(&a, &a) == 0.0 && dw(&a, &a) == 0.0);
    }

    #[test]
    fn shifting_a_law_by_k_costs_k(a in law(), k in 0i64..6) {
        prop_assert!((dw(&a, &a.shifted(k)) - k as f64).abs() < 1e-9);
        prop_assert!((a.shifted(k).mean() - a.mean() - k as f64).abs() < 1e-9);
    }
}

#[test]
fn distances_between_points() {
    let a = IntegerLaw::point(2);
    let b = IntegerLaw::point(5);
    assert_eq!(dtv(&a, &b), 1.0);
    assert_eq!(dw(&a, &b), 3.0);
    assert!(IntegerLaw::new(0, vec![0.5, 0.4]).is_err());
    assert!(IntegerLaw::new(0, vec![1.5, -0.5]).is_err());
}

#[test]
fn toy_row_is_the_ceiling_law() {
    let table = toy(64);
    for n in [6usize, 11, 40, 64] {
        let row = IntegerLaw::from_phase_row(&table, n);
        let ceil = IntegerLaw::ceil_of(toy_f, (n as f64).log2(), 0.0);
        assert!(dtv(&row, &ceil) < 1e-12, "n={n}");
    }
}

#[test]
fn toy_laplace_transform_at_one() {
    // int e^x (F(x) - F(x-1)) dx on [-1, 1] with F(x) = 2 - 2^{-x} on [-1, 0]
    let a = 1.0 - std::f64::consts::LN_2;
    let e = 1f64.exp();
    let closed = 2.0 * (1.0 - 1.0 / e) - (1.0 - (-a).exp()) / a + 2.0 * (a.exp() - 1.0) / a - (e - 1.0);
    let steps = 200_000;
    let h = 2.0 / steps as f64;
    let g = |x: f64| x.exp() * (toy_f(x) - toy_f(x - 1.0));
    let trap: f64 = (0..steps).map(|i| 0.5 * h * (g(-1.0 + i as f64 * h) + g(-1.0 + (i + 1) as f64 * h))).sum();
    assert!((closed - trap).abs() < 1e-8);

    let samples = periodicity_samples(&toy(2048), 2.0, 256..=2048).unwrap();
    let psi = laplace_transform(&samples, Complex64::new(1.0, 0.0)).unwrap();
    assert!((psi.re - closed).abs() < 1e-3, "{} vs {closed}", psi.re);
    assert!(psi.im.abs() < 1e-15);
}

#[test]
fn fair_coin_transform() {
    let table = fair(2048);
    let samples = periodicity_samples(&table, 2.0, 256..=2048).unwrap();
    let at0 = laplace_transform(&samples, Complex64::new(0.0, 0.0)).unwrap();
    assert!((at0.re - 1.0).abs() < 0.02);
    let at1 = laplace_transform(&samples, Complex64::new(0.0, 2.0 * PI)).unwrap();
    assert!(at1.norm() < 1.0);
    let fit = periodicity_reconstruct(&samples, 5).unwrap();
    for x in [0.0, 0.25, 0.6] {
        assert!((fit.w1(x) - fit.w1(x + 3.0)).abs() < 1e-9);
    }
    // the fluctuation of the fair coin is tiny
    assert!((0..20).map(|i| fit.w1(i as f64 / 20.0).abs()).fold(0.0, f64::max) < 1e-3);
}

#[test]
fn toy_mean_reconstruction() {
    let table = toy(2048);
    let fit = periodicity_reconstruct(&periodicity_samples(&table, 2.0, 256..=2048).unwrap(), 5).unwrap();
    for n in (300..2048).step_by(97) {
        let t = (n as f64).log2();
        let frac = t - t.floor();
        // E X_n - log2 n = 2^frac - frac - 1 for the toy
        let truth = frac.exp2() - frac - 1.0;
        assert!((fit.reconstruct(t) - truth).abs() < 0.01, "n={n}");
    }
}

#[test]
fn collapse_onto_a_limit() {
    let toy = empirical_limit(&toy(1024), 2.0, 64..=1024).unwrap();
    // bins of width 0.05 on a slope of at most 2 ln 2
    assert!(toy.spread < 0.075);
    assert!(toy.points.iter().all(|p| (p.y - toy_f(p.x)).abs() < 1e-12));
    assert_eq!(toy.monotone_violations, 0);
    let coin = empirical_limit(&fair(1024), 2.0, 64..=1024).unwrap();
    let u = |x: f64| (-x).exp2();
    let f = |x: f64| u(x) / u(x).exp_m1();
    assert!(coin.points.iter().filter(|p| p.n >= 512).all(|p| (p.y - f(p.x)).abs() < 1e-3));
    let peaks = SurvivorModel::peaks(PeakVariant::LinearI);
    let std = compute_phase_table(&peaks, PhaseConfig::new(500)).unwrap();
    assert_eq!(empirical_limit(&std, 3.0, 5..=500).unwrap().monotone_violations, 0);
    let alt = compute_phase_table(&peaks, PhaseConfig::new(500).init(Init::AltCost)).unwrap();
    assert!(empirical_limit(&alt, 3.0, 5..=500).unwrap().monotone_violations > 0);
}

#[test]
fn fair_coin_rows_approach_the_limit() {
    let table = fair(2048);
    let d: Vec<f64> = [256, 512, 1024, 2048].iter().map(|n| mass_sup_distance(&table, *n, 2.0, fair_coin_f)).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
    assert!(d[3] < 2e-4);
}

#[test]
fn consecutive_rows_get_closer() {
    let table = fair(128);
    let dws: Vec<f64> = [16usize, 32, 64, 127]
        .iter()
        .map(|n| dw(&IntegerLaw::from_phase_row(&table, *n), &IntegerLaw::from_phase_row(&table, n + 1)))
        .collect();
    assert!(dws.windows(2).all(|w| w[1] < w[0]), "{dws:?}");
    for (n, d) in [16usize, 32, 64, 127].iter().zip(&dws) {
        assert!(*n as f64 * d < 2.0);
    }
}

#[test]
fn fair_coin_mean_matches_the_fourier_series() {
    let table = fair(1024);
    for n in [700usize, 1000, 1024] {
        let gap = table.x(n).to_f64() - (n as f64).log2() - fair_coin_phi(n as f64, 5);
        assert!(gap.abs() < 5e-3, "n={n}: {gap}");
    }
}
