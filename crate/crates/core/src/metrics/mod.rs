//! Distances between integer laws, empirical limit functions and the
//! periodicity of the mean.

mod closed;
mod distance;
mod limit;
mod periodicity;
mod plot;
pub mod special;

pub use closed::{
    fair_coin_f, fair_coin_phi, gumbel_cdf, normal_cdf, toy_cdf_exact, toy_closed_forms, toy_mean_exact, toy_pi2_exact,
    ToyClosedForms, FAIR_COIN_PHI_MEAN,
};
pub use distance::{dtv, dw, IntegerLaw, MASS_TOLERANCE};
pub use limit::{
    cdf_sup_distance, empirical_limit, mass_sup_distance, scatter, EmpiricalLimit, LimitPoint, Quantity,
    MONOTONE_TOLERANCE, SPREAD_BIN_WIDTH,
};
pub use periodicity::{
    laplace_transform, periodicity_reconstruct, periodicity_samples, PeriodicityFit, Samples,
    DEFAULT_HARMONICS, DERIVATIVE_STEP, TIE_TOLERANCE,
};
pub use plot::PlotData;
