pub mod app;
pub mod bernstein;
pub mod config;
pub mod error;
pub mod inverse;
pub mod principles;
pub mod quadrature;
pub mod solver;
pub mod spatial;
pub mod stochastic;
pub mod special;

pub use error::{Error, Result};
