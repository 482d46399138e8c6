//! Plot data for figures 1..12. Peak models use base-3 logarithms.

use std::ops::RangeInclusive;

use electra_core::metrics::{
    empirical_limit, gumbel_cdf, normal_cdf, periodicity_reconstruct, periodicity_samples, scatter, PlotData, Quantity,
};
use electra_core::phase::compute_phase_table;
use electra_core::{Init, PeakVariant, PhaseConfig, PhaseTable, SurvivorModel};

use crate::{CliError, FigureArgs};

const BASE: f64 = 3.0;
const MAX_N: usize = 500;

pub struct Figure {
    pub data: PlotData,
    pub summary: String,
}

pub const IDS: [&str; 12] =
    ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"];

fn log3(n: usize) -> f64 {
    (n as f64).ln() / BASE.ln()
}

fn table(variant: PeakVariant, init: Init, args: &FigureArgs) -> Result<PhaseTable, CliError> {
    let mut model = SurvivorModel::peaks(variant);
    if let Some(c) = args.exact_cutoff {
        model = model.with_exact_cutoff(c);
    }
    Ok(compute_phase_table(&model, PhaseConfig::new(MAX_N).init(init))?)
}

fn residuals(t: &PhaseTable, range: RangeInclusive<usize>) -> Vec<(f64, f64)> {
    range.map(|n| (log3(n), t.x(n).to_f64() - log3(n))).collect()
}

fn points(t: &PhaseTable, range: RangeInclusive<usize>, q: Quantity) -> Result<Vec<(f64, f64)>, CliError> {
    Ok(scatter(t, BASE, range, q)?.into_iter().map(|p| (p.x, p.y)).collect())
}

/// Mean and variance of `Z` from the sampled `F(x) - F(x - 1)`.
fn limit_moments(t: &PhaseTable, range: RangeInclusive<usize>) -> Result<(f64, f64), CliError> {
    let (_, mean, var) = periodicity_samples(t, BASE, range)?.moments();
    Ok((mean - 0.5, (var - 1.0 / 12.0).max(1e-6)))
}

fn reference_grid(points: &[(f64, f64)]) -> Vec<f64> {
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    (0..=400).map(|i| lo + (hi - lo) * i as f64 / 400.0).collect()
}

fn cdf_figure(variant: PeakVariant, init: Init, range: RangeInclusive<usize>, args: &FigureArgs) -> Result<Figure, CliError> {
    let t = table(variant, init, args)?;
    let obs = points(&t, range.clone(), Quantity::Cdf)?;
    let lim = empirical_limit(&t, BASE, range.clone())?;
    let mut data = PlotData::new();
    if args.reference {
        let (m, v) = limit_moments(&t, range)?;
        let grid = reference_grid(&obs);
        data.extend(grid.iter().map(|&x| (x, gumbel_cdf(x, m, v))), "gumbel_ref");
    }
    data.extend(obs, "observed");
    Ok(Figure {
        data,
        summary: format!("spread={:e} monotone_violations={}", lim.spread, lim.monotone_violations),
    })
}

fn mass_figure(variant: PeakVariant, init: Init, range: RangeInclusive<usize>, gauss: bool, args: &FigureArgs) -> Result<Figure, CliError> {
    let t = table(variant, init, args)?;
    let obs = points(&t, range.clone(), Quantity::Mass)?;
    let mut data = PlotData::new();
    if gauss && args.reference {
        let (m, v) = limit_moments(&t, range)?;
        let grid = reference_grid(&obs);
        data.extend(grid.iter().map(|&x| (x, normal_cdf(x, m, v) - normal_cdf(x - 1.0, m, v))), "gauss_ref");
    }
    let peak = obs.iter().map(|p| p.1).fold(0.0, f64::max);
    data.extend(obs, "observed");
    Ok(Figure { data, summary: format!("max_mass={peak:e}") })
}

fn reconstruction_figure(variant: PeakVariant, args: &FigureArgs) -> Result<Figure, CliError> {
    let t = table(variant, Init::Standard, args)?;
    let range = 50..=MAX_N;
    let samples = periodicity_samples(&t, BASE, range.clone())?;
    let fit = periodicity_reconstruct(&samples, args.harmonics)?;
    let obs = residuals(&t, range);
    let gap = obs.iter().map(|(x, y)| (fit.reconstruct(*x) - y).abs()).fold(0.0, f64::max);
    let mut data = PlotData::new();
    data.extend(obs.iter().map(|(x, _)| (*x, fit.reconstruct(*x))), "reconstruction");
    data.extend(obs, "observed");
    Ok(Figure {
        data,
        summary: format!("m1={} sup_gap={gap:e} mass={}", fit.m1(), fit.total_mass()),
    })
}

pub fn render(args: &FigureArgs) -> Result<Figure, CliError> {
    use PeakVariant::{Circular, LinearI};
    match args.id.as_str() {
        "fig1" => {
            let t = table(LinearI, Init::Standard, args)?;
            let obs = residuals(&t, 50..=MAX_N);
            let lo = obs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let hi = obs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let mut data = PlotData::new();
            data.extend(obs, "observed");
            Ok(Figure { data, summary: format!("residual_min={lo} residual_max={hi}") })
        }
        "fig2" => cdf_figure(LinearI, Init::Standard, 20..=MAX_N, args),
        "fig3" => mass_figure(LinearI, Init::Standard, 150..=MAX_N, true, args),
        "fig4" => mass_figure(LinearI, Init::Standard, 1..=40, false, args),
        "fig5" => cdf_figure(LinearI, Init::AltCost, 5..=MAX_N, &FigureArgs { reference: false, ..args.clone() }),
        "fig6" => mass_figure(LinearI, Init::AltCost, 5..=MAX_N, false, args),
        "fig7" => mass_figure(LinearI, Init::AltCost, 1..=100, false, args),
        "fig8" => reconstruction_figure(LinearI, args),
        "fig9" => cdf_figure(Circular, Init::Standard, 5..=MAX_N, args),
        "fig10" => {
            let mut data = PlotData::new();
            for (variant, tag) in [(Circular, "circular"), (LinearI, "linear")] {
                let t = table(variant, Init::Standard, args)?;
                data.extend(points(&t, 20..=MAX_N, Quantity::Cdf)?, tag);
            }
            Ok(Figure { data, summary: "series=circular,linear".into() })
        }
        "fig11" => mass_figure(Circular, Init::Standard, 1..=40, false, args),
        "fig12" => reconstruction_figure(Circular, args),
        other => Err(CliError::Usage(format!("unknown figure id {other:?}; expected one of {}", IDS.join(", ")))),
    }
}
