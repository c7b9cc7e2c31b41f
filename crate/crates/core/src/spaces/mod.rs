//! Gauges and norm evaluators for Lorentz, Marcinkiewicz and exponential
//! Orlicz spaces, and the Lorentz-space Kruglov criterion.

mod criterion;
mod epsilon;
mod gauge;
mod norms;

pub use criterion::{
    criterion_grid, dyadic_gauge_sum, kruglov_criterion, kruglov_criterion_capped, log_in_lorentz,
    CriterionEstimate, DIVERGENCE_CAP,
};
pub use epsilon::{build_epsilon_gauge, EpsilonGauge};
pub use gauge::{default_psi_parameter, ConcaveGauge, OrliczYoung, Tabulated, GAUGE_GRID};
pub use norms::{
    norm_explog, norm_lorentz, norm_marcinkiewicz, norm_orlicz, NormSpec, DEFAULT_TOL, MARCINKIEWICZ_GRID,
};
