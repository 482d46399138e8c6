use electra_core::franklin::{
    c2_closed_form, conditional_exhaustive, conditional_second_round_check, estimate_c2, message_ratio,
    results_csv, rounds_histogram, run_election, run_trial, survival_ratios, SimConfig, Variant,
};
use electra_core::phase::compute_phase_table;
use electra_core::rational::ratio;
use electra_core::{PeakVariant, PhaseConfig, SurvivorModel};

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let config = SimConfig::new(Variant::RedrawLinearI, 50, 300, 17);
    let a = run_election(&config).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| run_election(&config).unwrap());
    assert_eq!(a, b);
    assert_eq!(results_csv(&config, &a), results_csv(&config, &b));
    let other = run_election(&SimConfig { seed: 18, ..config.clone() }).unwrap();
    assert_ne!(a, other);
}

#[test]
fn two_players_need_one_round() {
    for v in Variant::ALL {
        for t in 0..50 {
            let rec = run_trial(&SimConfig::new(v, 2, 50, 3), t, None);
            assert_eq!(rec.rounds, 1, "{v}");
            assert_eq!(rec.trace, vec![1]);
            assert_eq!(rec.messages, 4);
        }
    }
    assert!(SimConfig::new(Variant::TruePersistent, 1, 10, 0).validate().is_err());
    assert!(SimConfig::new(Variant::TruePersistent, 5, 0, 0).validate().is_err());
}

#[test]
fn traces_shrink_and_end_with_one_leader() {
    for v in Variant::ALL {
        for rec in run_election(&SimConfig::new(v, 40, 200, 9)).unwrap() {
            assert_eq!(*rec.trace.last().unwrap(), 1);
            assert!(rec.trace.windows(2).all(|w| w[1] < w[0]));
            assert_eq!(rec.messages, 2 * 40 * rec.rounds as u64);
        }
    }
}

#[test]
fn redraw_rounds_follow_the_phase_law() {
    let trials = 20_000u64;
    for (v, pv) in [
        (Variant::RedrawCircular, PeakVariant::Circular),
        (Variant::RedrawLinearI, PeakVariant::LinearI),
        (Variant::RedrawLinearII, PeakVariant::LinearII),
    ] {
        let table = compute_phase_table(&SurvivorModel::peaks(pv), PhaseConfig::new(30)).unwrap();
        let hist = rounds_histogram(&SimConfig::new(v, 30, trials, 5)).unwrap();
        for j in 0..hist.len().max(table.j_max() + 1) {
            let p = table.prob(30, j);
            let obs = hist.get(j).copied().unwrap_or(0) as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((obs - p).abs() <= 4.0 * sigma + 1e-3, "{v} j={j}: {obs} vs {p}");
        }
    }
}

#[test]
fn first_round_matches_circular_peak_counts() {
    // Pr(k peaks on a ring of 7), counted by brute force over 7! rings
    let mut counts = [0u64; 8];
    let mut perm: Vec<usize> = (0..7).collect();
    loop {
        let k = (0..7).filter(|&i| perm[i] > perm[(i + 6) % 7] && perm[i] > perm[(i + 1) % 7]).count();
        counts[k] += 1;
        // next lexicographic permutation
        let Some(i) = (0..6).rev().find(|&i| perm[i] < perm[i + 1]) else { break };
        let j = (i + 1..7).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    let total: u64 = counts.iter().sum();
    assert_eq!(total, 5040);

    let trials = 50_000u64;
    let config = SimConfig::new(Variant::TruePersistent, 7, trials, 11);
    let mut observed = [0u64; 8];
    for t in 0..trials {
        observed[run_trial(&config, t, Some(1)).trace[0] as usize] += 1;
    }
    let chi2: f64 = (1..8)
        .filter(|&k| counts[k] > 0)
        .map(|k| {
            let e = counts[k] as f64 / total as f64 * trials as f64;
            (observed[k] as f64 - e).powi(2) / e
        })
        .sum();
    // three cells (1, 2, 3 peaks), two degrees of freedom; 0.999 quantile is 13.8
    assert!(chi2 < 13.8, "chi2 = {chi2}");
}

#[test]
fn two_round_constant() {
    let local = {
        let e2 = std::f64::consts::E.powi(2);
        (3.0 * e2 * e2 - 48.0 * e2 + 233.0) / 384.0
    };
    assert!((c2_closed_form() - local).abs() < 1e-15);
    assert!((local - 0.109_686).abs() < 1e-5);
    let est = estimate_c2(Variant::TruePersistent, 2000, 4000, 21).unwrap();
    assert!(est.z_score(local).abs() < 4.0, "{est:?}");
}

#[test]
fn conditioning_on_four_survivors() {
    assert_eq!(conditional_exhaustive(), ratio(5, 17));
    let check = conditional_second_round_check(200_000, 4).unwrap();
    assert_eq!(check.exhaustive, ratio(5, 17));
    assert_ne!(check.redraw_exact, check.exhaustive);
    assert!(check.monte_carlo.z_score(5.0 / 17.0).abs() < 4.0);
    assert!(conditional_second_round_check(100, 4).is_err());
}

#[test]
fn message_and_survival_summaries() {
    let n = 300;
    let records = run_election(&SimConfig::new(Variant::TruePersistent, n, 400, 2)).unwrap();
    let ratio = message_ratio(&records, n);
    assert!((ratio.point - 1.0).abs() < 0.15, "{ratio:?}");
    let ratios = survival_ratios(&records, n);
    assert!((ratios[0].point - 1.0 / 3.0).abs() < 0.01);
}

#[test]
fn variant_names_round_trip() {
    for v in Variant::ALL {
        assert_eq!(v.name().parse::<Variant>().unwrap(), v);
    }
    assert!("fast".parse::<Variant>().is_err());
}
