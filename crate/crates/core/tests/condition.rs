use electra_core::condition::{
    check_all, check_concentration, check_mean_increment, check_moment, check_monotone, CheckConfig, Verdict,
};
use electra_core::rational::ratio;
use electra_core::{PeakVariant, SurvivorModel};

#[test]
fn monotone_dichotomy_at_one_half() {
    assert!(check_monotone(&SurvivorModel::fair_coin(), 200).unwrap().violations.is_empty());
    assert!(check_monotone(&SurvivorModel::toy(), 100).unwrap().violations.is_empty());
    for p in [ratio(1, 2), ratio(7, 10)] {
        assert!(check_monotone(&SurvivorModel::biased_coin(p).unwrap(), 100).unwrap().violations.is_empty());
    }
    for p in [ratio(3, 10), ratio(45, 100)] {
        assert!(!check_monotone(&SurvivorModel::biased_coin(p).unwrap(), 50).unwrap().violations.is_empty());
    }
}

#[test]
fn violations_can_be_reverified_from_the_pmfs() {
    let model = SurvivorModel::biased_coin(ratio(3, 10)).unwrap();
    for v in check_monotone(&model, 30).unwrap().violations {
        let gap = model.cdf(v.n + 1, v.k).unwrap().to_f64() - model.cdf(v.n, v.k).unwrap().to_f64();
        assert!((gap - v.gap).abs() < 1e-12);
    }
}

#[test]
fn fair_coin_increments() {
    let c = check_mean_increment(&SurvivorModel::fair_coin(), 500, 0.5, &CheckConfig::default()).unwrap();
    for (n, d) in &c.increments {
        // E Y_n = n/2 + n 2^{-n}
        let nf = *n as f64;
        let expect = 0.5 + (nf + 1.0) * (-(nf + 1.0)).exp2() - nf * (-nf).exp2();
        assert!((d - expect).abs() < 1e-12, "n={n}");
        if *n >= 30 {
            assert!((d - 0.5).abs() < 1e-6);
        }
    }
    assert_eq!(c.verdict(), Verdict::Pass);
}

#[test]
fn circular_increments_are_exactly_one_third() {
    let model = SurvivorModel::peaks(PeakVariant::Circular).with_exact_cutoff(101);
    let c = check_mean_increment(&model, 100, 1.0 / 3.0, &CheckConfig::default()).unwrap();
    for (n, d) in &c.increments {
        if *n >= 3 {
            assert!((d - 1.0 / 3.0).abs() < 1e-13, "n={n}");
        }
    }
}

#[test]
fn halving_fails_the_increment_check() {
    let c = check_mean_increment(&SurvivorModel::deterministic_halving(), 100, 0.5, &CheckConfig::default()).unwrap();
    assert_eq!(c.verdict(), Verdict::Fail);
    assert_eq!(c.max_deviation, 0.5);
}

#[test]
fn concentration_series() {
    let cfg = CheckConfig::default();
    let fair = check_concentration(&SurvivorModel::fair_coin(), 500, 0.5, &cfg).unwrap();
    assert_eq!(fair.verdict(), Verdict::Pass);
    let tail: Vec<f64> = fair.series.iter().filter(|(n, _)| *n >= 100).map(|(_, v)| *v).collect();
    assert!(tail.iter().all(|v| *v < 1e-3));
    let toy = check_concentration(&SurvivorModel::toy(), 500, 0.5, &cfg).unwrap();
    assert!(toy.series.iter().filter(|(n, _)| *n >= 17).all(|(_, v)| *v == 0.0));
    let peaks = check_concentration(&SurvivorModel::peaks(PeakVariant::LinearI), 120, 1.0 / 3.0, &cfg).unwrap();
    assert_eq!(peaks.series.len(), 120);
    assert!(peaks.series.iter().all(|(_, v)| v.is_finite() && *v >= 0.0));
}

#[test]
fn sixth_moments_are_bounded() {
    let cfg = CheckConfig::default();
    let fair = check_moment(&SurvivorModel::fair_coin(), 300, 0.5, 6, &cfg).unwrap();
    assert_eq!(fair.verdict(), Verdict::Pass);
    // binomial sixth central moment / n^3 tends to 15/64
    let last = fair.series.last().unwrap().1;
    assert!((last - 15.0 / 64.0).abs() < 0.01);
    let circ = check_moment(&SurvivorModel::peaks(PeakVariant::Circular), 120, 1.0 / 3.0, 6, &cfg).unwrap();
    assert_eq!(circ.verdict(), Verdict::Pass);
    assert!(check_moment(&SurvivorModel::fair_coin(), 10, 0.5, 5, &cfg).is_err());
}

#[test]
fn reports_are_reproducible() {
    let cfg = CheckConfig::default();
    let model = SurvivorModel::biased_coin(ratio(2, 5)).unwrap();
    let a = check_all(&model, 80, 0.4, &cfg).unwrap();
    let b = check_all(&model, 80, 0.4, &cfg).unwrap();
    assert_eq!(a.summary_line(), b.summary_line());
    assert_eq!(a.monotone.to_csv(), b.monotone.to_csv());
}

#[test]
fn short_ranges_are_inconclusive() {
    let r = check_all(&SurvivorModel::fair_coin(), 5, 0.5, &CheckConfig::default()).unwrap();
    assert_eq!(r.verdict(), Verdict::Inconclusive);
}
