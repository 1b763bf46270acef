//! Mittag-Leffler spectral solution of
//! `∂ᵅ_t φ + (Ψ(-Δ) + V) φ = F`, `φ(0) = φ₀`, and its Caputo self-check.
//!
//! Per mode, `c_n(t) = E_{α,1}(-λ_n tᵅ) ⟨φ_n, φ₀⟩ + ∫_0^t k_n(t-s) f_n(s) ds`
//! with `k_n(τ) = τ^{α-1} E_{α,α}(-λ_n τᵅ)` and `f_n = ⟨φ_n, F⟩`. The
//! Duhamel integral is evaluated by product integration: `f_n` is linear on
//! each cell of a uniform grid and the kernel moments are exact,
//!
//! ```text
//! ∫_0^τ k_n       = τᵅ E_{α,α+1}(-λ_n τᵅ)
//! ∫_0^τ k_n(r) r dr = τ^{α+1} (E_{α,α+1} - E_{α,α+2})(-λ_n τᵅ)
//! ```

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernstein::BernsteinFunction;
use crate::error::{Error, Result};
use crate::spatial::{l2_norm, Domain1D, EigenSystem, OperatorMode};
use crate::special::gamma::gamma;
use crate::special::mittag_leffler::{ml_eval, MlParams};

/// Scalar time profile `ρ₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeFunction {
    Constant { value: f64 },
    /// `a + b t`.
    Linear { a: f64, b: f64 },
    /// `sin²(π t / period)`.
    SineSquared { period: f64 },
    /// `scale · e^{-rate t}`.
    Exponential { scale: f64, rate: f64 },
    /// Narrow Gaussian bump `scale · exp(-(t-center)²/(2 width²))`.
    Bump { center: f64, width: f64, scale: f64 },
    /// Piecewise-linear samples at `k·dt`, `k = 0, 1, ...`; constant past the end.
    Samples { dt: f64, values: Vec<f64> },
}

impl TimeFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant { value } => *value,
            TimeFunction::Linear { a, b } => a + b * t,
            TimeFunction::SineSquared { period } => (std::f64::consts::PI * t / period).sin().powi(2),
            TimeFunction::Exponential { scale, rate } => scale * (-rate * t).exp(),
            TimeFunction::Bump { center, width, scale } => scale * (-(t - center).powi(2) / (2.0 * width * width)).exp(),
            TimeFunction::Samples { dt, values } => {
                if values.is_empty() {
                    return 0.0;
                }
                let s = (t / dt).max(0.0);
                let j = s.floor() as usize;
                if j + 1 >= values.len() {
                    return *values.last().expect("non-empty");
                }
                let f = s - j as f64;
                (1.0 - f) * values[j] + f * values[j + 1]
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            TimeFunction::SineSquared { period } => *period > 0.0,
            TimeFunction::Bump { width, .. } => *width > 0.0,
            TimeFunction::Samples { dt, .. } => *dt > 0.0,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid time function {self:?}")))
        }
    }
}

/// Right-hand side `F(t, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Source {
    Zero,
    /// `F(t, x) = ρ₁(t) ρ₂(x)`.
    Separable { rho1: TimeFunction, rho2: Vec<f64> },
    /// Grid values at increasing `times`, linear in between.
    Table { times: Vec<f64>, values: Vec<Vec<f64>> },
}

impl Source {
    pub fn is_zero(&self) -> bool {
        matches!(self, Source::Zero)
    }

    /// `F(t, ·)` on the grid.
    pub fn eval_grid(&self, t: f64, n: usize) -> Vec<f64> {
        match self {
            Source::Zero => vec![0.0; n],
            Source::Separable { rho1, rho2 } => {
                let r = rho1.eval(t);
                rho2.iter().map(|v| r * v).collect()
            }
            Source::Table { times, values } => {
                let j = times.partition_point(|&s| s <= t).clamp(1, times.len().max(2) - 1);
                if times.len() == 1 {
                    return values[0].clone();
                }
                let (t0, t1) = (times[j - 1], times[j]);
                let f = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
                values[j - 1].iter().zip(&values[j]).map(|(a, b)| (1.0 - f) * a + f * b).collect()
            }
        }
    }

    /// `f_n(s_i) = ⟨φ_n, F(s_i, ·)⟩`, mode-major.
    pub fn mode_profiles(&self, es: &EigenSystem, s: &[f64]) -> Vec<Vec<f64>> {
        let m = es.n_modes();
        match self {
            Source::Zero => vec![vec![0.0; s.len()]; m],
            Source::Separable { rho1, rho2 } => {
                let c = es.coefficients(rho2);
                let r: Vec<f64> = s.iter().map(|&t| rho1.eval(t)).collect();
                c.iter().map(|cn| r.iter().map(|ri| cn * ri).collect()).collect()
            }
            Source::Table { .. } => {
                let n = es.domain.n_grid;
                let per_time: Vec<Vec<f64>> = s.iter().map(|&t| es.coefficients(&self.eval_grid(t, n))).collect();
                (0..m).map(|k| per_time.iter().map(|c| c[k]).collect()).collect()
            }
        }
    }

    fn validate(&self, n: usize, horizon: f64) -> Result<()> {
        match self {
            Source::Zero => Ok(()),
            Source::Separable { rho1, rho2 } => {
                rho1.validate()?;
                if rho2.len() != n {
                    return Err(Error::Parameter(format!("rho2 has {} values for {n} grid points", rho2.len())));
                }
                Ok(())
            }
            Source::Table { times, values } => {
                if times.is_empty() || times.len() != values.len() || values.iter().any(|v| v.len() != n) {
                    return Err(Error::Parameter("source table shape does not match its times and grid".into()));
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) || times[0] > 0.0 || *times.last().expect("non-empty") < horizon {
                    return Err(Error::Parameter("source table times must increase and cover [0, T]".into()));
                }
                Ok(())
            }
        }
    }
}

/// Full problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub domain: Domain1D,
    pub psi: BernsteinFunction,
    pub potential: Vec<f64>,
    pub phi0: Vec<f64>,
    pub source: Source,
    /// Caputo order; `1` is the classical parabolic limit.
    pub alpha: f64,
    pub horizon: f64,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        let n = self.domain.n_grid;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Parameter(format!("alpha must lie in (0,1], got {}", self.alpha)));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::Parameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if self.phi0.len() != n || self.potential.len() != n {
            return Err(Error::Parameter("phi0 and potential must have one value per grid point".into()));
        }
        if self.potential.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::Parameter("potential must be nonnegative".into()));
        }
        self.source.validate(n, self.horizon)
    }

    /// Same instance with a different right-hand side.
    pub fn with_source(&self, source: Source) -> Self {
        ProblemSpec { source, ..self.clone() }
    }

    pub fn with_phi0(&self, phi0: Vec<f64>) -> Self {
        ProblemSpec { phi0, ..self.clone() }
    }

    pub fn with_potential(&self, potential: Vec<f64>) -> Self {
        ProblemSpec { potential, ..self.clone() }
    }
}

/// Uniform output grid `t_j = j·t_end/steps`; the Duhamel quadrature uses
/// `refine` cells per output step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_end: f64,
    pub steps: usize,
    #[serde(default = "default_refine")]
    pub refine: usize,
}

fn default_refine() -> usize {
    4
}

impl TimeGrid {
    pub fn uniform(t_end: f64, steps: usize) -> Self {
        TimeGrid { t_end, steps, refine: default_refine() }
    }

    pub fn with_refine(mut self, refine: usize) -> Self {
        self.refine = refine;
        self
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|j| j as f64 * self.dt()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    MonteCarlo,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionField {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    /// `values[j][i] = φ(t_j, x_i)`.
    pub values: Vec<Vec<f64>>,
    /// `coefficients[j][n] = c_n(t_j)`.
    pub coefficients: Vec<Vec<f64>>,
    pub method: Method,
    pub mode: OperatorMode,
    pub n_modes: usize,
    pub alpha: f64,
    pub quadrature: String,
    /// `‖φ₀‖² - Σ_n ⟨φ_n, φ₀⟩²`.
    pub truncation_tail: f64,
}

fn ml(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    ml_eval(MlParams { alpha, beta }, z)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("alpha must lie in (0,1], got {alpha}")))
    }
}

/// `S_t ψ = Σ_n E_{α,1}(-λ_n tᵅ) ⟨φ_n, ψ⟩ φ_n`.
pub fn apply_s(es: &EigenSystem, alpha: f64, t: f64, psi0: &[f64]) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("S_t needs t >= 0, got {t}")));
    }
    let c = es.coefficients(psi0);
    let m: Vec<f64> = c
        .iter()
        .zip(&es.lambdas)
        .map(|(c, l)| Ok(c * ml(alpha, 1.0, -l * t.powf(alpha))?))
        .collect::<Result<_>>()?;
    Ok(es.synthesize(&m))
}

/// `K_t ψ = Σ_n t^{α-1} E_{α,α}(-λ_n tᵅ) ⟨φ_n, ψ⟩ φ_n`.
pub fn apply_k(es: &EigenSystem, alpha: f64, t: f64, psi: &[f64]) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("K_t is singular at t = 0; need t > 0, got {t}")));
    }
    let c = es.coefficients(psi);
    let pre = t.powf(alpha - 1.0);
    let m: Vec<f64> = c
        .iter()
        .zip(&es.lambdas)
        .map(|(c, l)| Ok(c * pre * ml(alpha, alpha, -l * t.powf(alpha))?))
        .collect::<Result<_>>()?;
    Ok(es.synthesize(&m))
}

/// Product-integration weights for `∫_0^{jΔ} k(τ) g(τ) dτ` with `g` linear on
/// each cell `[iΔ, (i+1)Δ]`: `(left_i, right_i)` multiply `g(iΔ)` and `g((i+1)Δ)`.
#[derive(Debug, Clone)]
pub struct CellWeights {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

/// Kernel moments `(∫_0^τ k, ∫_0^τ k(r) r dr)` for `k(r) = r^{α-1}E_{α,α}(-λ rᵅ)`.
pub fn kernel_moments(alpha: f64, lambda: f64, tau: f64) -> Result<(f64, f64)> {
    if tau == 0.0 {
        return Ok((0.0, 0.0));
    }
    let ta = tau.powf(alpha);
    let z = -lambda * ta;
    let e1 = ml(alpha, alpha + 1.0, z)?;
    let e2 = ml(alpha, alpha + 2.0, z)?;
    Ok((ta * e1, tau * ta * (e1 - e2)))
}

/// Cell weights for the mode with eigenvalue `lambda` on `cells` cells of width `dt`.
pub fn cell_weights(alpha: f64, lambda: f64, dt: f64, cells: usize) -> Result<CellWeights> {
    let mut p0 = Vec::with_capacity(cells + 1);
    let mut p1 = Vec::with_capacity(cells + 1);
    for j in 0..=cells {
        let (a, b) = kernel_moments(alpha, lambda, j as f64 * dt)?;
        p0.push(a);
        p1.push(b);
    }
    let mut left = Vec::with_capacity(cells);
    let mut right = Vec::with_capacity(cells);
    for i in 0..cells {
        let (ta, tb) = (i as f64 * dt, (i + 1) as f64 * dt);
        let d0 = p0[i + 1] - p0[i];
        let d1 = p1[i + 1] - p1[i];
        left.push((tb * d0 - d1) / dt);
        right.push((d1 - ta * d0) / dt);
    }
    Ok(CellWeights { left, right })
}

/// `∫_0^{mΔ} k(mΔ - s) f(s) ds` for `f` sampled at `iΔ`.
fn duhamel(w: &CellWeights, f: &[f64], m: usize) -> f64 {
    let mut acc = 0.0;
    for c in 0..m {
        // lag cell [cΔ, (c+1)Δ] meets s = (m-c)Δ on the left, (m-c-1)Δ on the right
        acc += w.left[c] * f[m - c] + w.right[c] * f[m - c - 1];
    }
    acc
}

/// Spectral solution on a uniform time grid.
pub fn solve(spec: &ProblemSpec, es: &EigenSystem, grid: &TimeGrid) -> Result<SolutionField> {
    spec.validate()?;
    if es.domain != spec.domain {
        return Err(Error::Parameter("eigensystem was built on a different domain".into()));
    }
    if grid.steps == 0 || grid.refine == 0 || !(grid.t_end > 0.0) || grid.t_end > spec.horizon * (1.0 + 1e-12) {
        return Err(Error::Parameter(format!(
            "time grid must have steps, refine >= 1 and 0 < t_end <= T = {}, got {grid:?}",
            spec.horizon
        )));
    }
    let alpha = spec.alpha;
    let times = grid.times();
    let c0 = es.coefficients(&spec.phi0);
    let cells = grid.steps * grid.refine;
    let dt = grid.t_end / cells as f64;
    let fine: Vec<f64> = (0..=cells).map(|i| i as f64 * dt).collect();
    let profiles = if spec.source.is_zero() { None } else { Some(spec.source.mode_profiles(es, &fine)) };

    let per_mode: Vec<Vec<f64>> = (0..es.n_modes())
        .into_par_iter()
        .map(|k| -> Result<Vec<f64>> {
            let lam = es.lambdas[k];
            let mut out = Vec::with_capacity(times.len());
            for &t in &times {
                out.push(c0[k] * ml(alpha, 1.0, -lam * t.powf(alpha))?);
            }
            if let Some(p) = &profiles {
                let w = cell_weights(alpha, lam, dt, cells)?;
                for (j, o) in out.iter_mut().enumerate() {
                    *o += duhamel(&w, &p[k], j * grid.refine);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let coefficients: Vec<Vec<f64>> = (0..times.len()).map(|j| per_mode.iter().map(|m| m[j]).collect()).collect();
    let values: Vec<Vec<f64>> = coefficients.iter().map(|c| es.synthesize(c)).collect();
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite solution values".into()));
    }
    Ok(SolutionField {
        times,
        x: es.domain.points(),
        values,
        coefficients,
        method: Method::Spectral,
        mode: es.mode,
        n_modes: es.n_modes(),
        alpha,
        quadrature: format!("product-linear, {} cells of width {dt:e}", cells),
        truncation_tail: es.truncation_tail(&spec.phi0),
    })
}

/// Mode coefficients at a single time, with `cells` product-integration cells on `[0, t]`.
pub fn coefficients_at(spec: &ProblemSpec, es: &EigenSystem, t: f64, cells: usize) -> Result<Vec<f64>> {
    let alpha = spec.alpha;
    let c0 = es.coefficients(&spec.phi0);
    let mut out: Vec<f64> = c0
        .iter()
        .zip(&es.lambdas)
        .map(|(c, l)| Ok(c * ml(alpha, 1.0, -l * t.powf(alpha))?))
        .collect::<Result<_>>()?;
    if t > 0.0 && !spec.source.is_zero() {
        let dt = t / cells as f64;
        let s: Vec<f64> = (0..=cells).map(|i| i as f64 * dt).collect();
        let p = spec.source.mode_profiles(es, &s);
        for (k, o) in out.iter_mut().enumerate() {
            let w = cell_weights(alpha, es.lambdas[k], dt, cells)?;
            *o += duhamel(&w, &p[k], cells);
        }
    }
    Ok(out)
}

impl SolutionField {
    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    pub fn h(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn l2_norms(&self) -> Vec<f64> {
        let h = self.h();
        self.values.iter().map(|v| l2_norm(v, h)).collect()
    }

    /// Long-format CSV `t,x,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,x,value\n");
        for (t, row) in self.times.iter().zip(&self.values) {
            for (x, v) in self.x.iter().zip(row) {
                let _ = writeln!(s, "{t:e},{x:e},{v:e}");
            }
        }
        s
    }

    /// Value at `(t, x)` for a grid time, linear in `x`.
    pub fn value_at(&self, t: f64, x: f64, domain: &Domain1D) -> Option<f64> {
        let j = self.times.iter().position(|s| (s - t).abs() <= 1e-12 * t.abs().max(1.0))?;
        Some(domain.interpolate(&self.values[j], x))
    }

    pub fn summary(&self, es: &EigenSystem) -> FieldSummary {
        let norms = self.l2_norms();
        let lam1 = es.lambdas[0];
        let decay: Vec<f64> =
            self.times.iter().zip(&norms).map(|(t, n)| (1.0 + lam1 * t.powf(self.alpha)) * n).collect();
        FieldSummary {
            method: self.method,
            mode: self.mode,
            n_modes: self.n_modes,
            alpha: self.alpha,
            steps: self.times.len() - 1,
            quadrature: self.quadrature.clone(),
            truncation_tail: self.truncation_tail,
            lambda1: lam1,
            l2_norms: norms,
            decay_constant: decay.iter().cloned().fold(0.0, f64::max),
            min_value: self.values.iter().flatten().cloned().fold(f64::INFINITY, f64::min),
            max_value: self.values.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldSummary {
    pub method: Method,
    pub mode: OperatorMode,
    pub n_modes: usize,
    pub alpha: f64,
    pub steps: usize,
    pub quadrature: String,
    pub truncation_tail: f64,
    pub lambda1: f64,
    pub l2_norms: Vec<f64>,
    /// `max_t (1 + λ₁ tᵅ) ‖φ(t)‖₂`.
    pub decay_constant: f64,
    pub min_value: f64,
    pub max_value: f64,
}

/// Minimal number of steps for a trustworthy L1 residual.
pub const MIN_RESIDUAL_STEPS: usize = 32;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub alpha: f64,
    pub dt: f64,
    pub steps: usize,
    /// `‖∂ᵅ_t φ + Lφ - F‖₂` at every node `t_1, ..., t_N`.
    pub residuals: Vec<f64>,
    /// Max over nodes in `[T/2, T]`, where the L1 error has its asymptotic order.
    pub late_max: f64,
    pub reliable: bool,
}

/// L1 weights `b_j = (j+1)^{1-α} - j^{1-α}`.
fn l1_weights(alpha: f64, n: usize) -> Vec<f64> {
    let p = 1.0 - alpha;
    (0..n)
        .map(|j| if j == 0 { 1.0 } else { ((j + 1) as f64).powf(p) - (j as f64).powf(p) })
        .collect()
}

/// Applies the L1 Caputo scheme mode by mode and measures the equation residual.
pub fn caputo_residual(field: &SolutionField, es: &EigenSystem, spec: &ProblemSpec) -> Result<ResidualReport> {
    let steps = field.times.len() - 1;
    if steps < 2 {
        return Err(Error::Parameter("residual needs at least two time steps".into()));
    }
    let dt = field.dt();
    if field.times.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-9 * dt) {
        return Err(Error::Parameter("residual needs a uniform time grid".into()));
    }
    let alpha = field.alpha;
    let b = l1_weights(alpha, steps);
    let scale = dt.powf(-alpha) / gamma(2.0 - alpha);
    let f = spec.source.mode_profiles(es, &field.times);
    let mut residuals = Vec::with_capacity(steps);
    for m in 1..=steps {
        let mut sq = 0.0;
        for k in 0..field.n_modes {
            let mut d = 0.0;
            for j in 0..m {
                d += b[j] * (field.coefficients[m - j][k] - field.coefficients[m - j - 1][k]);
            }
            let r = scale * d + es.lambdas[k] * field.coefficients[m][k] - f[k][m];
            sq += r * r;
        }
        residuals.push(sq.sqrt());
    }
    let t_end = field.times[steps];
    let late_max = field.times[1..]
        .iter()
        .zip(&residuals)
        .filter(|(t, _)| **t >= 0.5 * t_end - 1e-12)
        .map(|(_, r)| *r)
        .fold(0.0, f64::max);
    Ok(ResidualReport { alpha, dt, steps, residuals, late_max, reliable: steps >= MIN_RESIDUAL_STEPS })
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceReport {
    pub gamma: f64,
    pub gamma_min: f64,
    pub times: Vec<f64>,
    /// `‖φ(t_k) - φ₀‖_{𝓗_{-γ}}` over the computed modes.
    pub distances: Vec<f64>,
    pub decreasing: bool,
    /// Part of `φ₀` outside the computed modes, in `L²`.
    pub truncation_floor: f64,
}

/// Distance of `φ(t)` to `φ₀` in the dual scale as `t ↓ 0` along `t_end·2^{-k}`.
pub fn initial_trace_convergence(field: &SolutionField, es: &EigenSystem, spec: &ProblemSpec, gamma: f64) -> Result<TraceReport> {
    let beta = spec.psi.lower_scaling_beta;
    let gamma_min = 1.0 / (4.0 * beta) - 1.0;
    if !(gamma > gamma_min) {
        return Err(Error::Parameter(format!("trace exponent gamma must exceed 1/(4β) - 1 = {gamma_min}, got {gamma}")));
    }
    let t_end = *field.times.last().expect("non-empty grid");
    let c0 = es.coefficients(&spec.phi0);
    let times: Vec<f64> = (1..=24).map(|k| t_end * 0.5f64.powi(k)).collect();
    let mut distances = Vec::with_capacity(times.len());
    for &t in &times {
        let c = coefficients_at(spec, es, t, 64)?;
        let d: f64 = c
            .iter()
            .zip(&c0)
            .zip(&es.lambdas)
            .map(|((a, b), l)| l.powf(-2.0 * gamma) * (a - b).powi(2))
            .sum();
        distances.push(d.sqrt());
    }
    let decreasing = distances.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    Ok(TraceReport { gamma, gamma_min, times, distances, decreasing, truncation_floor: es.truncation_tail(&spec.phi0).sqrt() })
}
