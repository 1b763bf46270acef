//! Recovery of the time profile `ρ₁` of a separable source `ρ₁(t) ρ₂(x)` from
//! the trace `φ(·, x₀)` of the solution with zero initial datum.
//!
//! The trace is the Volterra convolution `φ(t, x₀) = ∫_0^t ρ₁(s) χ_{t-s}(x₀) ds`
//! with `χ_t(x₀) = (K_t ρ₂)(x₀)`, which blows up like `t^{α-1}` at zero.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::solver::{cell_weights, kernel_moments};
use crate::spatial::EigenSystem;
use crate::special::{mittag_leffler, StableDensity};

/// `χ_t(x₀)` on the grid `t_j = j·dt`, `j = 1..=m`, with the aggregated
/// product-integration weights used by the forward map and the inversion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChiKernel {
    pub x0: f64,
    pub alpha: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub method: String,
    /// Exponent of the blow-up `t^{α-1}` at zero.
    pub singularity_exponent: f64,
    /// `∫` of the kernel against the hat functions of lag cell `c`.
    pub lin_left: Vec<f64>,
    pub lin_right: Vec<f64>,
    /// `∫_{cΔ}^{(c+1)Δ} χ_r dr`.
    pub cell_mass: Vec<f64>,
    /// `sup|ρ₂|`, the scale against which a vanishing kernel is judged.
    pub rho2_sup: f64,
}

fn modal_weights(es: &EigenSystem, rho2: &[f64], x0: f64) -> Result<Vec<f64>> {
    if !es.domain.contains(x0) {
        return Err(Error::Domain(format!("observation point {x0} must be interior")));
    }
    if rho2.len() != es.domain.n_grid {
        return Err(Error::Parameter("rho2 must have one value per grid point".into()));
    }
    let c = es.coefficients(rho2);
    Ok(c.iter().zip(es.modes_at(x0)).map(|(c, p)| c * p).collect())
}

/// Spectral evaluation of `χ` on `steps` uniform cells of `[0, t_end]`.
pub fn chi_kernel(es: &EigenSystem, alpha: f64, rho2: &[f64], x0: f64, t_end: f64, steps: usize) -> Result<ChiKernel> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0,1], got {alpha}")));
    }
    if steps == 0 || !(t_end > 0.0) {
        return Err(Error::Parameter("kernel grid needs steps >= 1 and t_end > 0".into()));
    }
    let a = modal_weights(es, rho2, x0)?;
    let dt = t_end / steps as f64;
    let per_mode: Vec<(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> = (0..es.n_modes())
        .into_par_iter()
        .map(|k| -> Result<_> {
            let lam = es.lambdas[k];
            let w = cell_weights(alpha, lam, dt, steps)?;
            let mut p0 = Vec::with_capacity(steps + 1);
            let mut vals = Vec::with_capacity(steps);
            for j in 0..=steps {
                p0.push(kernel_moments(alpha, lam, j as f64 * dt)?.0);
                if j > 0 {
                    let t = j as f64 * dt;
                    vals.push(t.powf(alpha - 1.0) * mittag_leffler(alpha, alpha, -lam * t.powf(alpha))?);
                }
            }
            let mass = p0.windows(2).map(|p| p[1] - p[0]).collect();
            Ok((vals, w.left, w.right, mass))
        })
        .collect::<Result<_>>()?;
    let combine = |pick: &dyn Fn(&(Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Vec<f64> {
        let mut out = vec![0.0; steps];
        for (ak, m) in a.iter().zip(&per_mode) {
            for (o, v) in out.iter_mut().zip(pick(m)) {
                *o += ak * v;
            }
        }
        out
    };
    Ok(ChiKernel {
        x0,
        alpha,
        dt,
        times: (1..=steps).map(|j| j as f64 * dt).collect(),
        values: combine(&|m| &m.0),
        method: "spectral".into(),
        singularity_exponent: alpha - 1.0,
        lin_left: combine(&|m| &m.1),
        lin_right: combine(&|m| &m.2),
        cell_mass: combine(&|m| &m.3),
        rho2_sup: rho2.iter().fold(0.0, |m, v| m.max(v.abs())),
    })
}

impl ChiKernel {
    pub fn steps(&self) -> usize {
        self.times.len()
    }

    /// `∫_0^T χ_t dt`, finite despite the blow-up at zero.
    pub fn integral(&self) -> f64 {
        self.cell_mass.iter().sum()
    }
}

/// `χ_t(x₀)` via the subordination integral `t^{α-1} ∫ ω(w) (T_{tᵅw} ρ₂)(x₀) dw`
/// with `ω(w) = w^{-1/α} g₁(w^{-1/α})`; an independent check of [`chi_kernel`].
pub fn chi_subordination(es: &EigenSystem, alpha: f64, rho2: &[f64], x0: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel is singular at t = 0; need t > 0, got {t}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("subordination form needs alpha in (0,1), got {alpha}")));
    }
    let a = modal_weights(es, rho2, x0)?;
    let g = StableDensity::new(alpha)?;
    let ta = t.powf(alpha);
    let semigroup = |w: f64| a.iter().zip(&es.lambdas).map(|(a, l)| a * (-l * ta * w).exp()).sum::<f64>();
    let f = |w: f64| {
        if w <= 0.0 {
            return 0.0;
        }
        let x = w.powf(-1.0 / alpha);
        x * g.density(x).unwrap_or(0.0) * semigroup(w)
    };
    let opts = QuadOptions { abs_tol: 1e-14 * a.iter().map(|v| v.abs()).sum::<f64>(), rel_tol: 1e-9, max_intervals: 4000 };
    Ok(t.powf(alpha - 1.0) * integrate_to_infinity(f, 0.0, opts)?.value)
}

/// Pointwise `χ_t(x₀)`; `t = 0` is a domain error.
pub fn chi_at(es: &EigenSystem, alpha: f64, rho2: &[f64], x0: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("kernel is singular at t = 0; need t > 0, got {t}")));
    }
    let a = modal_weights(es, rho2, x0)?;
    let pre = t.powf(alpha - 1.0);
    a.iter().zip(&es.lambdas).map(|(a, l)| Ok(a * pre * mittag_leffler(alpha, alpha, -l * t.powf(alpha))?)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseDescriptor {
    /// Standard deviation relative to the sup norm of the clean trace.
    pub relative_level: f64,
    pub seed: u64,
}

/// Observed `φ(t_j, x₀)` on `t_j = j·dt`, `j = 0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationTrace {
    pub x0: f64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub noise: Option<NoiseDescriptor>,
}

impl ObservationTrace {
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.times.len();
        if m < 2 || self.values.len() != m || self.times[0] != 0.0 {
            return Err(Error::Parameter("trace needs matching times from 0 and values, at least two samples".into()));
        }
        let dt = self.dt();
        if self.times.iter().enumerate().any(|(j, t)| (t - j as f64 * dt).abs() > 1e-9 * dt.max(*t)) {
            return Err(Error::Parameter("trace times must be uniform".into()));
        }
        Ok(())
    }

    /// Adds Gaussian noise with standard deviation `level · sup|φ|`.
    pub fn with_noise(&self, relative_level: f64, seed: u64) -> Result<Self> {
        let sup = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let normal = Normal::new(0.0, relative_level * sup).map_err(|e| Error::Parameter(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = self.values.clone();
        for v in values.iter_mut().skip(1) {
            *v += normal.sample(&mut rng);
        }
        Ok(ObservationTrace { values, noise: Some(NoiseDescriptor { relative_level, seed }), ..self.clone() })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,value\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            let _ = writeln!(s, "{t:e},{v:e}");
        }
        s
    }

    pub fn from_csv(text: &str, x0: f64) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#')) {
            if line.starts_with("t,") {
                continue;
            }
            let mut it = line.split(',').map(|c| c.trim().parse::<f64>());
            match (it.next(), it.next()) {
                (Some(Ok(t)), Some(Ok(v))) => {
                    times.push(t);
                    values.push(v);
                }
                _ => return Err(Error::Parameter(format!("trace line {}: expected `t,value`", i + 1))),
            }
        }
        let tr = ObservationTrace { x0, times, values, noise: None };
        tr.validate()?;
        Ok(tr)
    }
}

/// Trace for `ρ₁` sampled on the kernel grid (`steps + 1` samples from 0),
/// linear between samples.
pub fn forward_observation(kernel: &ChiKernel, rho1: &[f64]) -> Result<ObservationTrace> {
    let m = kernel.steps();
    if rho1.len() != m + 1 {
        return Err(Error::Parameter(format!("rho1 needs {} samples, got {}", m + 1, rho1.len())));
    }
    let mut values = vec![0.0; m + 1];
    for (j, v) in values.iter_mut().enumerate().skip(1) {
        let mut acc = 0.0;
        for c in 0..j {
            acc += kernel.lin_left[c] * rho1[j - c] + kernel.lin_right[c] * rho1[j - c - 1];
        }
        *v = acc;
    }
    Ok(ObservationTrace { x0: kernel.x0, times: (0..=m).map(|j| j as f64 * kernel.dt).collect(), values, noise: None })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegMethod {
    None,
    Tikhonov,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regularization {
    pub method: RegMethod,
    /// Tikhonov weight; `None` selects it at the L-curve corner.
    #[serde(default)]
    pub strength: Option<f64>,
}

impl Regularization {
    pub fn none() -> Self {
        Regularization { method: RegMethod::None, strength: None }
    }

    pub fn tikhonov(strength: Option<f64>) -> Self {
        Regularization { method: RegMethod::Tikhonov, strength }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LCurvePoint {
    pub strength: f64,
    pub residual_norm: f64,
    pub seminorm: f64,
}

/// `ρ₁` as cell averages on `[jΔ, (j+1)Δ]`, reported at the cell midpoints.
#[derive(Debug, Clone, Serialize)]
pub struct Reconstruction {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub method: RegMethod,
    pub strength: f64,
    /// `‖A ρ - φ‖ / ‖φ‖` (absolute when the data vanish).
    pub residual: f64,
    pub condition_estimate: f64,
    pub path: Vec<LCurvePoint>,
}

impl Reconstruction {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,rho1\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            let _ = writeln!(s, "{t:e},{v:e}");
        }
        s
    }

    /// Relative discrete `L²` distance to `truth` sampled at the midpoints.
    pub fn relative_error(&self, truth: impl Fn(f64) -> f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (t, v) in self.times.iter().zip(&self.values) {
            let r = truth(*t);
            num += (v - r).powi(2);
            den += r * r;
        }
        (num / den).sqrt()
    }
}

/// Lower-triangular Toeplitz matrix of the cell-average discretization.
fn volterra_matrix(kernel: &ChiKernel) -> DMatrix<f64> {
    let m = kernel.steps();
    DMatrix::from_fn(m, m, |j, i| if i <= j { kernel.cell_mass[j - i] } else { 0.0 })
}

fn lcurve_corner(path: &[LCurvePoint]) -> usize {
    // maximum curvature of (log residual, log seminorm) against log strength
    let pts: Vec<(f64, f64)> = path.iter().map(|p| (p.residual_norm.max(1e-300).ln(), p.seminorm.max(1e-300).ln())).collect();
    let mut best = (path.len() / 2, f64::NEG_INFINITY);
    for k in 1..pts.len().saturating_sub(1) {
        let (x0, y0) = pts[k - 1];
        let (x1, y1) = pts[k];
        let (x2, y2) = pts[k + 1];
        let (dx, dy) = (0.5 * (x2 - x0), 0.5 * (y2 - y0));
        let (ddx, ddy) = (x2 - 2.0 * x1 + x0, y2 - 2.0 * y1 + y0);
        let kappa = (dx * ddy - dy * ddx) / (dx * dx + dy * dy).powf(1.5).max(1e-300);
        if kappa > best.1 {
            best = (k, kappa);
        }
    }
    best.0
}

/// Solves the first-kind Volterra system for `ρ₁`, directly or with
/// first-difference Tikhonov smoothing.
pub fn recover_rho1(obs: &ObservationTrace, kernel: &ChiKernel, reg: Regularization) -> Result<Reconstruction> {
    obs.validate()?;
    let m = kernel.steps();
    if obs.times.len() != m + 1 || (obs.dt() - kernel.dt).abs() > 1e-12 * kernel.dt || obs.x0 != kernel.x0 {
        return Err(Error::Parameter("observation and kernel must share x0 and the time grid".into()));
    }
    let scale = kernel.rho2_sup * kernel.dt.powf(kernel.alpha) / libm::tgamma(1.0 + kernel.alpha);
    let diag = kernel.cell_mass[0];
    if !(scale > 0.0) || diag.abs() <= 1e-10 * scale {
        return Err(Error::IllPosed(format!(
            "kernel vanishes near t = 0 at x0 = {} (first cell mass {diag:e} against {scale:e}); rho2 does not see x0",
            kernel.x0
        )));
    }
    let a = volterra_matrix(kernel);
    let b = DVector::from_iterator(m, obs.values[1..].iter().copied());
    let sv = a.singular_values();
    let condition_estimate = sv.max() / sv.min();
    let bnorm = b.norm();
    let rel = |r: &DVector<f64>| {
        let res = (&a * r - &b).norm();
        if bnorm > 0.0 { res / bnorm } else { res }
    };
    let midpoints: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) * kernel.dt).collect();
    match reg.method {
        RegMethod::None => {
            let x = a
                .solve_lower_triangular(&b)
                .ok_or_else(|| Error::IllPosed("triangular Volterra system is singular".into()))?;
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Numeric("non-finite reconstruction".into()));
            }
            Ok(Reconstruction {
                residual: rel(&x),
                times: midpoints,
                values: x.iter().copied().collect(),
                method: RegMethod::None,
                strength: 0.0,
                condition_estimate,
                path: Vec::new(),
            })
        }
        RegMethod::Tikhonov => {
            // first differences, with a unit row anchoring the first value
            let l = DMatrix::from_fn(m, m, |i, j| {
                if i == j {
                    if i == 0 { 1.0 } else { 1.0 / kernel.dt }
                } else if i == j + 1 {
                    -1.0 / kernel.dt
                } else {
                    0.0
                }
            });
            let ata = a.transpose() * &a;
            let ltl = l.transpose() * &l;
            let atb = a.transpose() * &b;
            let solve = |mu: f64| -> Result<DVector<f64>> {
                let lhs = &ata + &ltl * mu;
                lhs.cholesky().map(|c| c.solve(&atb)).ok_or_else(|| Error::Numeric(format!("Tikhonov system not positive definite at {mu:e}")))
            };
            let ata_scale = ata.diagonal().max();
            let ltl_scale = ltl.diagonal().max();
            let (strength, path) = match reg.strength {
                Some(mu) if mu > 0.0 => (mu, Vec::new()),
                Some(mu) => return Err(Error::Parameter(format!("Tikhonov strength must be positive, got {mu}"))),
                None => {
                    let base = ata_scale / ltl_scale;
                    let grid: Vec<f64> = (0..49).map(|k| base * 10f64.powf(-9.0 + 0.25 * k as f64)).collect();
                    let path = grid
                        .iter()
                        .map(|&mu| {
                            let x = solve(mu)?;
                            Ok(LCurvePoint { strength: mu, residual_norm: (&a * &x - &b).norm(), seminorm: (&l * &x).norm() })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (path[lcurve_corner(&path)].strength, path)
                }
            };
            let x = solve(strength)?;
            Ok(Reconstruction {
                residual: rel(&x),
                times: midpoints,
                values: x.iter().copied().collect(),
                method: RegMethod::Tikhonov,
                strength,
                condition_estimate,
                path,
            })
        }
    }
}
