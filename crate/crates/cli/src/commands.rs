use num_rational::BigRational;

use electra_core::condition::{check_all, CheckConfig, Verdict};
use electra_core::franklin::{
    c2_closed_form, conditional_second_round_check, estimate_c2, message_ratio, results_csv, run_election,
    summary_csv, survival_ratios, SimConfig, SimEstimate, Variant,
};
use electra_core::metrics::{dtv, periodicity_reconstruct, periodicity_samples, toy_cdf_exact, IntegerLaw, PlotData};
use electra_core::peaks::DEFAULT_EXACT_CUTOFF;
use electra_core::phase::{compute_phase_table, ending_state_probs};
use electra_core::rational::{ratio, to_f64};
use electra_core::{Init, Pmf, PhaseConfig, PhaseTable, SurvivorModel};

use crate::fixtures::{self, Fixture};
use crate::output::Output;
use crate::{
    figures, CheckArgs, Cli, CliError, Command, Estimate, FigureArgs, ModelName, Outcome, PeriodicityArgs,
    SimulateArgs, TableArgs,
};

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut out = Output::create(&cli.out)?;
    let (name, outcome) = match &cli.command {
        Command::Table(a) => ("table", table(a, &mut out)?),
        Command::Figure(a) => ("figure", figure(a, &mut out)?),
        Command::Check(a) => ("check", check(a, &mut out)?),
        Command::Simulate(a) => ("simulate", simulate(a, &mut out)?),
        Command::Periodicity(a) => ("periodicity", periodicity(a, &mut out)?),
    };
    let status = if outcome.passed { "ok" } else { "fail" };
    out.finish(name, cli, status, &outcome.summary)?;
    Ok(outcome)
}

fn pmf_csv(rows: &[Pmf], from: usize) -> String {
    let mut s = String::from("n,k,prob,numerator,denominator\n");
    for (n, row) in rows.iter().enumerate().skip(from) {
        for k in row.offset()..=row.max_value() {
            match row.exact() {
                Some(d) => {
                    let p = d.get(k);
                    s.push_str(&format!("{n},{k},{},{},{}\n", to_f64(&p), p.numer(), p.denom()));
                }
                None => s.push_str(&format!("{n},{k},{},,\n", row.prob_f64(k))),
            }
        }
    }
    s
}

/// Mismatches between a published table and the computed values.
fn compare(fixture: &Fixture, max_n: usize, value: impl Fn(usize, usize) -> Option<BigRational>) -> (usize, Vec<String>) {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in fixture.row_lo..=fixture.row_hi.min(max_n) {
        for col in 0..=fixture.col_hi {
            let (num, den) = fixture.expected(n, col);
            let want = ratio(num, den);
            checked += 1;
            match value(n, col) {
                Some(got) if got == want => {}
                Some(got) => bad.push(format!("{} ({n},{col}): expected {want}, got {got}", fixture.name)),
                None => bad.push(format!("{} ({n},{col}): no exact value", fixture.name)),
            }
        }
    }
    (checked, bad)
}

fn check_fixtures(args: &TableArgs, model: &SurvivorModel, rows: &[Pmf], t: &PhaseTable) -> Result<(usize, Vec<String>), CliError> {
    let init: Init = args.init.into();
    let pmf = |n: usize, k: usize| rows[n].exact().map(|d| d.get(k));
    let phase = |n: usize, j: usize| t.exact(n, j);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut add = |(c, b): (usize, Vec<String>)| {
        checked += c;
        bad.extend(b);
    };
    match args.model.model {
        ModelName::PeakLinearI => {
            add(compare(&fixtures::TABLE_LINEAR_PEAKS, args.max_n, pmf));
            if args.threshold == 1 {
                let f = if init == Init::Standard { &fixtures::TABLE_LINEAR_PHASES } else { &fixtures::TABLE_LINEAR_ALTCOST };
                add(compare(f, args.max_n, phase));
            }
        }
        ModelName::PeakCircular => {
            add(compare(&fixtures::TABLE_CIRCULAR_PEAKS, args.max_n, pmf));
            if args.threshold == 1 && init == Init::Standard {
                add(compare(&fixtures::TABLE_CIRCULAR_PHASES, args.max_n, phase));
            }
        }
        ModelName::Toy if args.threshold == 1 && init == Init::Standard => {
            for n in 1..=args.max_n {
                for j in 0..=t.j_max() {
                    let want = toy_cdf_exact(n as u64, j as u32);
                    checked += 1;
                    let ok = match t.cdf_exact(n, j) {
                        Some(got) => got == want,
                        None => (t.cdf(n, j) - to_f64(&want)).abs() < 1e-12,
                    };
                    if !ok {
                        bad.push(format!("toy cdf ({n},{j}): expected {want}, got {}", t.cdf(n, j)));
                    }
                }
            }
        }
        _ => {
            return Err(CliError::Usage(format!(
                "no reference tables for model {} with threshold {} and {} init",
                model.name(),
                args.threshold,
                init.name()
            )))
        }
    }
    Ok((checked, bad))
}

fn table(args: &TableArgs, out: &mut Output) -> Result<Outcome, CliError> {
    if args.max_n < 1 {
        return Err(CliError::Usage("--max-n must be at least 1".into()));
    }
    let model = args.model.build(None)?;
    let config = PhaseConfig::new(args.max_n).threshold(args.threshold).init(args.init.into()).column_eps(args.column_eps);
    let t = compute_phase_table(&model, config)?;
    let rows = model.rows(args.max_n)?;
    out.write("pmf.csv", &pmf_csv(&rows, if model.absorbing_state() == 0 { 0 } else { 1 }))?;
    out.write("phase.csv", &t.to_csv())?;
    out.write("phase_exact.csv", &t.to_exact_csv())?;
    let base = args.model.default_alpha().map_or(2.0, |a| 1.0 / a);
    out.write("means.csv", &t.means_csv(base))?;
    if args.threshold >= 1 {
        let ending = ending_state_probs(&model, args.max_n, args.threshold)?;
        let mut s = String::from("n,i,prob\n");
        for (n, row) in ending.probs.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                s.push_str(&format!("{n},{},{}\n", i + 1, v.to_f64()));
            }
        }
        out.write("ending.csv", &s)?;
    }
    let head = format!(
        "model={} max_n={} threshold={} init={} j_max={} exact_upto={}",
        model.name(),
        args.max_n,
        args.threshold,
        t.init().name(),
        t.j_max(),
        t.exact_upto()
    );
    if !args.check_fixtures {
        return Ok(Outcome { passed: true, summary: format!("DONE table {head}") });
    }
    let (checked, bad) = check_fixtures(args, &model, &rows, &t)?;
    for b in &bad {
        eprintln!("mismatch: {b}");
    }
    let verdict = if bad.is_empty() { "PASS" } else { "FAIL" };
    Ok(Outcome {
        passed: bad.is_empty(),
        summary: format!("{verdict} table {head} fixtures_checked={checked} mismatches={}", bad.len()),
    })
}

fn figure(args: &FigureArgs, out: &mut Output) -> Result<Outcome, CliError> {
    let fig = figures::render(args)?;
    out.write(&format!("{}.csv", args.id), &fig.data.to_csv())?;
    Ok(Outcome { passed: true, summary: format!("DONE figure {} rows={} {}", args.id, fig.data.rows.len(), fig.summary) })
}

fn check(args: &CheckArgs, out: &mut Output) -> Result<Outcome, CliError> {
    // peak rows above the default cutoff are Gaussian; keep the whole range exact
    let cutoff = args.model.model.is_peak().then(|| DEFAULT_EXACT_CUTOFF.max(args.n_max + 1));
    let model = args.model.build(cutoff)?;
    let alpha = args
        .alpha
        .or_else(|| args.model.default_alpha())
        .ok_or_else(|| CliError::Usage("--alpha is required for this model".into()))?;
    let config = CheckConfig {
        n0: args.n0,
        eps: args.eps,
        delta_exponent: args.delta_exponent,
        tail_bound: args.tail_bound,
        moment_bound: args.moment_bound,
        moment_p: args.moment_p,
    };
    let report = check_all(&model, args.n_max, alpha, &config)?;
    out.write("monotone.csv", &report.monotone.to_csv())?;
    out.write("increment.csv", &report.increment.to_csv())?;
    out.write("concentration.csv", &report.concentration.to_csv("weighted_tail"))?;
    out.write("moment.csv", &report.moment.to_csv("moment_ratio"))?;
    if let Some(v) = report.monotone.violations.first() {
        eprintln!("first monotonicity witness: n={} k={} gap={:e}", v.n, v.k, v.gap);
    }
    Ok(Outcome { passed: report.verdict() == Verdict::Pass, summary: report.summary_line() })
}

fn reference(name: &str, value: f64) -> SimEstimate {
    SimEstimate { statistic: name.into(), point: value, stderr: 0.0, trials: 0, histogram: None }
}

fn mean_of(name: &str, values: impl Iterator<Item = f64>) -> SimEstimate {
    let v: Vec<f64> = values.collect();
    let k = v.len() as f64;
    let mean = v.iter().sum::<f64>() / k;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    SimEstimate { statistic: name.into(), point: mean, stderr: (var / k).sqrt(), trials: v.len() as u64, histogram: None }
}

fn simulate(args: &SimulateArgs, out: &mut Output) -> Result<Outcome, CliError> {
    let variant: Variant = args.variant.into();
    match args.estimate {
        Estimate::Rounds => {
            let config = SimConfig { stop_threshold: args.threshold, ..SimConfig::new(variant, args.n, args.trials, args.seed) };
            let records = run_election(&config)?;
            out.write("results.csv", &results_csv(&config, &records))?;
            let mut rows = vec![
                (variant, args.n, mean_of("rounds", records.iter().map(|r| f64::from(r.rounds)))),
                (variant, args.n, mean_of("messages", records.iter().map(|r| r.messages as f64))),
                (variant, args.n, mean_of("active_sends", records.iter().map(|r| r.active_sends as f64))),
                (variant, args.n, message_ratio(&records, args.n)),
            ];
            rows.extend(survival_ratios(&records, args.n).into_iter().map(|e| (variant, args.n, e)));
            let mut extra = String::new();
            if let Some(pv) = variant.peak_variant() {
                let model = SurvivorModel::peaks(pv);
                let t = compute_phase_table(&model, PhaseConfig::new(args.n).threshold(args.threshold))?;
                let max_r = records.iter().map(|r| r.rounds as usize).max().unwrap_or(0);
                let mut hist = vec![0u64; max_r + 1];
                for r in &records {
                    hist[r.rounds as usize] += 1;
                }
                let d = dtv(&IntegerLaw::from_histogram(0, &hist), &IntegerLaw::from_phase_row(&t, args.n));
                rows.push((variant, args.n, reference("dtv_vs_exact", d)));
                extra = format!(" dtv_vs_exact={d:e}");
            }
            out.write("summary.csv", &summary_csv(&rows))?;
            Ok(Outcome {
                passed: true,
                summary: format!(
                    "DONE simulate variant={variant} n={} trials={} seed={} mean_rounds={} message_ratio={}{extra}",
                    args.n, args.trials, args.seed, rows[0].2.point, rows[3].2.point
                ),
            })
        }
        Estimate::C2 => {
            let e = estimate_c2(variant, args.n, args.trials, args.seed)?;
            let c2 = c2_closed_form();
            let summary = format!(
                "DONE simulate estimate=c2 variant={variant} n={} trials={} point={} stderr={:e} c2={c2:.10} z_c2={:.3} z_one_ninth={:.3}",
                args.n,
                args.trials,
                e.point,
                e.stderr,
                e.z_score(c2),
                e.z_score(1.0 / 9.0)
            );
            let rows = vec![
                (variant, args.n, e),
                (variant, args.n, reference("c2_closed_form", c2)),
                (variant, args.n, reference("one_ninth", 1.0 / 9.0)),
            ];
            out.write("summary.csv", &summary_csv(&rows))?;
            Ok(Outcome { passed: true, summary })
        }
        Estimate::Conditional => {
            let c = conditional_second_round_check(args.trials, args.seed)?;
            let exact = to_f64(&c.exhaustive);
            let summary = format!(
                "DONE simulate estimate=conditional exhaustive={} redraw_exact={} monte_carlo={} stderr={:e} events={} z={:.3}",
                c.exhaustive,
                c.redraw_exact,
                c.monte_carlo.point,
                c.monte_carlo.stderr,
                c.monte_carlo.trials,
                c.monte_carlo.z_score(exact)
            );
            let rows = vec![
                (Variant::TruePersistent, 8, c.monte_carlo.clone()),
                (Variant::TruePersistent, 8, reference("exhaustive", exact)),
                (Variant::RedrawCircular, 8, reference("redraw_exact", to_f64(&c.redraw_exact))),
            ];
            out.write("summary.csv", &summary_csv(&rows))?;
            Ok(Outcome { passed: true, summary })
        }
    }
}

fn periodicity(args: &PeriodicityArgs, out: &mut Output) -> Result<Outcome, CliError> {
    if args.n_min < 1 || args.n_min > args.max_n {
        return Err(CliError::Usage("need 1 <= --n-min <= --max-n".into()));
    }
    let model = args.model.build(None)?;
    let alpha = args
        .model
        .default_alpha()
        .ok_or_else(|| CliError::Usage("the explicit model has no default contraction factor".into()))?;
    let base = 1.0 / alpha;
    let t = compute_phase_table(&model, PhaseConfig::new(args.max_n).init(args.init.into()))?;
    let samples = periodicity_samples(&t, base, args.n_min..=args.max_n)?;
    let fit = periodicity_reconstruct(&samples, args.harmonics)?;
    let mut data = PlotData::new();
    let obs: Vec<(f64, f64)> = (args.n_min..=args.max_n)
        .map(|n| {
            let x = (n as f64).ln() / base.ln();
            (x, t.x(n).to_f64() - x)
        })
        .collect();
    let gap = obs.iter().map(|(x, y)| (fit.reconstruct(*x) - y).abs()).fold(0.0, f64::max);
    data.extend(obs.iter().map(|(x, _)| (*x, fit.reconstruct(*x))), "reconstruction");
    data.extend(obs, "observed");
    out.write("periodicity.csv", &data.to_csv())?;
    let mut coef = String::from("l,re,im\n");
    for l in -(args.harmonics as i64)..=args.harmonics as i64 {
        let c = fit.coefficient(l);
        coef.push_str(&format!("{l},{},{}\n", c.re, c.im));
    }
    out.write("coefficients.csv", &coef)?;
    let mass = fit.total_mass();
    let passed = (mass - 1.0).abs() <= args.mass_tolerance;
    Ok(Outcome {
        passed,
        summary: format!(
            "{} periodicity model={} n={}..{} harmonics={} mass={mass} m1={} sup_gap={gap:e}",
            if passed { "PASS" } else { "FAIL" },
            model.name(),
            args.n_min,
            args.max_n,
            args.harmonics,
            fit.m1()
        ),
    })
}
