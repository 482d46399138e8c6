use electra_core::phase::{compute_phase_table, ending_state_probs, mean_phases, occupancy_probs, occupancy_with_threshold};
use electra_core::rational::ratio;
use electra_core::{Init, PeakVariant, PhaseConfig, SurvivorModel, Value};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn linear_means_start_at_zero_and_one() {
    let t = compute_phase_table(&SurvivorModel::peaks(PeakVariant::LinearI), PhaseConfig::new(30)).unwrap();
    for (n, x) in [(0, 0), (1, 0), (2, 1), (3, 1), (4, 1)] {
        assert_eq!(t.x(n), &Value::Exact(ratio(x, 1)));
    }
    let m = mean_phases(&t);
    assert_eq!(m.max_discrepancy, 0.0);
}

#[test]
fn toy_mean_matches_log_plus_phi() {
    let t = compute_phase_table(&SurvivorModel::toy(), PhaseConfig::new(64)).unwrap();
    let x6 = 6f64.log2() + (6.0 / 4.0 - (6.0f64 / 4.0).log2() - 1.0);
    assert!((t.x(6).to_f64() - x6).abs() < 1e-14);
}

#[test]
fn deterministic_halving_counts_binary_digits() {
    let t = compute_phase_table(&SurvivorModel::deterministic_halving(), PhaseConfig::new(300)).unwrap();
    for n in 1..=300usize {
        let expect = (usize::BITS - 1 - n.leading_zeros()) as usize;
        assert_eq!(t.prob(n, expect), 1.0, "n={n}");
    }
}

#[test]
fn fair_coin_mean_routes_agree() {
    let t = compute_phase_table(&SurvivorModel::fair_coin(), PhaseConfig::new(200).column_eps(1e-13)).unwrap();
    assert!(mean_phases(&t).max_discrepancy < 1e-10);
}

#[test]
fn stochastic_monotonicity_under_standard_init() {
    for model in [
        SurvivorModel::fair_coin(),
        SurvivorModel::peaks(PeakVariant::LinearI),
        SurvivorModel::peaks(PeakVariant::Circular),
    ] {
        let t = compute_phase_table(&model, PhaseConfig::new(120)).unwrap();
        for n in 2..120 {
            for j in 0..=t.j_max() {
                assert!(t.cdf(n + 1, j) <= t.cdf(n, j) + 1e-12, "{} n={n} j={j}", model.name());
            }
        }
    }
}

#[test]
fn altcost_breaks_monotonicity() {
    let t = compute_phase_table(
        &SurvivorModel::peaks(PeakVariant::LinearI),
        PhaseConfig::new(60).init(Init::AltCost),
    )
    .unwrap();
    let witness = (2..60)
        .flat_map(|n| (0..=t.j_max()).map(move |j| (n, j)))
        .find(|&(n, j)| t.cdf(n + 1, j) > t.cdf(n, j) + 1e-12);
    // Pr(X_3 <= 1) = 1/3 > 0 = Pr(X_2 <= 1)
    assert_eq!(witness, Some((2, 1)));
}

#[test]
fn exact_rows_do_not_depend_on_the_cutoff() {
    for variant in [PeakVariant::LinearI, PeakVariant::Circular] {
        let a = compute_phase_table(&SurvivorModel::peaks(variant).with_exact_cutoff(75), PhaseConfig::new(75)).unwrap();
        let b = compute_phase_table(&SurvivorModel::peaks(variant).with_exact_cutoff(100), PhaseConfig::new(75)).unwrap();
        for n in 0..=75 {
            for j in 0..=a.j_max().max(b.j_max()) {
                assert_eq!(a.exact(n, j), b.exact(n, j));
            }
        }
    }
}

#[test]
fn mixed_regime_rows_are_laws() {
    let t = compute_phase_table(&SurvivorModel::peaks(PeakVariant::LinearI), PhaseConfig::new(300)).unwrap();
    assert_eq!(t.exact_upto(), 75);
    for n in 0..=300 {
        assert!(t.row_mass(n) > 1.0 - 1e-9, "n={n}");
    }
}

#[test]
fn toy_ending_states_at_three() {
    let e = ending_state_probs(&SurvivorModel::toy(), 300, 3).unwrap();
    assert_eq!(e.get(5, 2), &Value::Exact(ratio(1, 2)));
    assert_eq!(e.get(6, 2), &Value::Exact(ratio(0, 1)));
    for n in 2..=300 {
        assert_eq!(e.get(n, 1).to_f64(), 0.0);
        let total: f64 = (1..=3).map(|i| e.get(n, i).to_f64()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn linear_ending_states_at_two() {
    let e = ending_state_probs(&SurvivorModel::peaks(PeakVariant::LinearI), 7, 2).unwrap();
    // frozen from the exact recursion
    assert_eq!(e.get(7, 1), &Value::Exact(ratio(3, 7)));
    assert_eq!(e.get(7, 2), &Value::Exact(ratio(4, 7)));
    assert_eq!(e.get(6, 2), &Value::Exact(ratio(17, 45)));
}

#[test]
fn occupancy_identities() {
    for model in [SurvivorModel::peaks(PeakVariant::LinearI), SurvivorModel::peaks(PeakVariant::Circular), SurvivorModel::toy()] {
        for n in [7usize, 40, 90] {
            let occ = occupancy_probs(&model, n).unwrap();
            let t = compute_phase_table(&model, PhaseConfig::new(n)).unwrap();
            let x = t.x(n).to_f64();
            assert!((occ.phases_from_hits() - x).abs() < 1e-10, "{} n={n}", model.name());
            assert!((occ.phases_from_visits() - x).abs() < 1e-10);
            assert!((occ.phases_from_rounds() - x).abs() < 1e-8);
            assert!(occ.hits.iter().all(|q| (0.0..=1.0 + 1e-15).contains(&q.to_f64())));
        }
    }
    let occ = occupancy_probs(&SurvivorModel::peaks(PeakVariant::Circular), 7).unwrap();
    assert_eq!(occ.hits[1], Value::Exact(BigRational::one()));
}

#[test]
fn occupancy_with_self_loops() {
    let model = SurvivorModel::fair_coin();
    let occ = occupancy_with_threshold(&model, 50, 1, 1e-14).unwrap();
    let t = compute_phase_table(&model, PhaseConfig::new(50)).unwrap();
    assert!((occ.phases_from_visits() - t.x(50).to_f64()).abs() < 1e-12);
    assert!((occ.phases_from_rounds() - t.x(50).to_f64()).abs() < 1e-10);
}

#[test]
fn altcost_table_exact_values() {
    let t = compute_phase_table(
        &SurvivorModel::peaks(PeakVariant::LinearI),
        PhaseConfig::new(5).init(Init::AltCost),
    )
    .unwrap();
    assert_eq!(t.exact(2, 2), Some(ratio(1, 1)));
    assert_eq!(t.exact(4, 1), Some(ratio(2, 3)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Adding a dummy player turns absorption at zero into absorption at one.
    #[test]
    fn demon_dummy_shift(p_num in 1i64..10, nu_num in 0i64..10, n in 0usize..10) {
        let model = SurvivorModel::demon(ratio(p_num, 10), ratio(nu_num, 10)).unwrap();
        let raw = compute_phase_table(&model, PhaseConfig::new(10).threshold(0)).unwrap();
        let shifted = compute_phase_table(&model, PhaseConfig::new(11)).unwrap();
        for j in 0..=raw.j_max().max(shifted.j_max()) {
            prop_assert_eq!(raw.exact(n, j), shifted.exact(n + 1, j));
        }
    }

    #[test]
    fn ending_states_sum_to_one(a in 1usize..5, n in 1usize..60) {
        let e = ending_state_probs(&SurvivorModel::peaks(PeakVariant::Circular), n, a).unwrap();
        let total = (1..=a).fold(BigRational::from_integer(0.into()), |acc, i| acc + e.get(n, i).exact().unwrap().clone());
        prop_assert_eq!(total, BigRational::one());
    }

    #[test]
    fn exact_rows_have_exact_means(n in 2usize..60) {
        // a zero residual keeps every column of a finite-support law
        let t = compute_phase_table(&SurvivorModel::peaks(PeakVariant::LinearII), PhaseConfig::new(n).column_eps(0.0)).unwrap();
        prop_assert_eq!(t.x(n).exact(), t.x_columns(n).exact());
    }
}
