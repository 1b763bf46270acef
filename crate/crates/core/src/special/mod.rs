//! Special functions: Mittag-Leffler, one-sided stable densities and the
//! density of the inverse stable subordinator.

pub mod gamma;
pub mod mittag_leffler;
pub mod stable;

pub use mittag_leffler::{ml_eval, ml_laplace_residual, mittag_leffler, MlParams};
pub use stable::{inverse_subordinator_density, stable_density, stable_density_scaled, StableDensity};
