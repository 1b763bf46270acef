//! Catalog of Bernstein functions `Ψ` with `Ψ(0+) = 0`, their scaling
//! metadata, and numerical checks of the defining properties.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Catalog members, named by their shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BernsteinKind {
    /// `u^{ν/2}`, `ν ∈ (0,2]`.
    Fractional { nu: f64 },
    /// `(u + m^{2/ν})^{ν/2} - m`, `ν ∈ (0,2)`, `m > 0`.
    Relativistic { nu: f64, m: f64 },
    /// `u^{ν/2} + u^{ν̃/2}`, `ν, ν̃ ∈ (0,2]`.
    SumOfFractional { nu: f64, nu_tilde: f64 },
    /// `u^{ν/2} log(1+u)^{-ν̃/2}`, `ν ∈ (0,2]`, `ν̃ ∈ [0,ν)`.
    LogDamped { nu: f64, nu_tilde: f64 },
    /// `u^{ν/2} log(1+u)^{ν̃/2}`, `ν ∈ (0,2)`, `ν̃ ∈ (0,2-ν)`.
    LogBoosted { nu: f64, nu_tilde: f64 },
    /// `Ψ(u) = u`.
    ClassicalLaplacian,
}

/// Weak lower scaling: `Ψ(γu) ≥ c γ^μ Ψ(u)` for `u > θ`, `γ ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wlsc {
    pub mu_lower: f64,
    pub c_lower: f64,
    pub theta_lower: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BernsteinKind", into = "BernsteinKind")]
pub struct BernsteinFunction {
    pub kind: BernsteinKind,
    /// Drift `b` of the Lévy-Khintchine representation.
    pub drift_b: f64,
    /// Exponent `β` with `liminf Ψ(u)/u^β > 0`.
    pub lower_scaling_beta: f64,
    pub wlsc: Option<Wlsc>,
}

impl TryFrom<BernsteinKind> for BernsteinFunction {
    type Error = Error;
    fn try_from(kind: BernsteinKind) -> Result<Self> {
        BernsteinFunction::new(kind)
    }
}

impl From<BernsteinFunction> for BernsteinKind {
    fn from(f: BernsteinFunction) -> Self {
        f.kind
    }
}

fn in_range(name: &str, v: f64, lo_open: f64, hi: f64, hi_closed: bool) -> Result<()> {
    let ok = v > lo_open && if hi_closed { v <= hi } else { v < hi };
    if ok && v.is_finite() {
        Ok(())
    } else {
        let r = if hi_closed { "]" } else { ")" };
        Err(Error::Parameter(format!("{name}={v} outside ({lo_open}, {hi}{r}")))
    }
}

impl BernsteinFunction {
    /// Validates parameters and attaches the catalog's scaling metadata.
    pub fn new(kind: BernsteinKind) -> Result<Self> {
        use BernsteinKind::*;
        let wlsc = |mu: f64| Some(Wlsc { mu_lower: mu, c_lower: 1.0, theta_lower: 0.0 });
        let (drift_b, beta, w) = match kind {
            Fractional { nu } => {
                in_range("nu", nu, 0.0, 2.0, true)?;
                (if nu == 2.0 { 1.0 } else { 0.0 }, nu / 2.0, wlsc(nu / 2.0))
            }
            Relativistic { nu, m } => {
                in_range("nu", nu, 0.0, 2.0, false)?;
                in_range("m", m, 0.0, f64::INFINITY, false)?;
                (0.0, nu / 2.0, wlsc(nu / 2.0))
            }
            SumOfFractional { nu, nu_tilde } => {
                in_range("nu", nu, 0.0, 2.0, true)?;
                in_range("nu_tilde", nu_tilde, 0.0, 2.0, true)?;
                let b = if nu == 2.0 || nu_tilde == 2.0 { 1.0 } else { 0.0 };
                (b, nu.max(nu_tilde) / 2.0, wlsc(nu.min(nu_tilde) / 2.0))
            }
            LogDamped { nu, nu_tilde } => {
                in_range("nu", nu, 0.0, 2.0, true)?;
                if !(nu_tilde >= 0.0 && nu_tilde < nu) {
                    return Err(Error::Parameter(format!("nu_tilde={nu_tilde} outside [0, nu={nu})")));
                }
                (0.0, (nu - nu_tilde) / 2.0, wlsc((nu - nu_tilde) / 2.0))
            }
            LogBoosted { nu, nu_tilde } => {
                in_range("nu", nu, 0.0, 2.0, false)?;
                in_range("nu_tilde", nu_tilde, 0.0, 2.0 - nu, false)?;
                (0.0, nu / 2.0, wlsc(nu / 2.0))
            }
            ClassicalLaplacian => (1.0, 1.0, wlsc(1.0)),
        };
        Ok(BernsteinFunction { kind, drift_b, lower_scaling_beta: beta, wlsc: w })
    }

    pub fn fractional(nu: f64) -> Result<Self> {
        Self::new(BernsteinKind::Fractional { nu })
    }

    pub fn relativistic(nu: f64, m: f64) -> Result<Self> {
        Self::new(BernsteinKind::Relativistic { nu, m })
    }

    pub fn sum_of_fractional(nu: f64, nu_tilde: f64) -> Result<Self> {
        Self::new(BernsteinKind::SumOfFractional { nu, nu_tilde })
    }

    pub fn log_damped(nu: f64, nu_tilde: f64) -> Result<Self> {
        Self::new(BernsteinKind::LogDamped { nu, nu_tilde })
    }

    pub fn log_boosted(nu: f64, nu_tilde: f64) -> Result<Self> {
        Self::new(BernsteinKind::LogBoosted { nu, nu_tilde })
    }

    pub fn classical() -> Self {
        Self::new(BernsteinKind::ClassicalLaplacian).expect("no parameters to validate")
    }

    /// Replaces the WLSC triple, e.g. to probe a deliberately wrong exponent.
    pub fn with_wlsc(mut self, w: Wlsc) -> Self {
        self.wlsc = Some(w);
        self
    }

    /// Stable index `ν` when `Ψ(u) = u^{ν/2}` (classical counts as `ν = 2`).
    pub fn fractional_index(&self) -> Option<f64> {
        match self.kind {
            BernsteinKind::Fractional { nu } => Some(nu),
            BernsteinKind::ClassicalLaplacian => Some(2.0),
            _ => None,
        }
    }

    /// `Ψ(u)`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::Domain(format!("Bernstein functions are evaluated at u >= 0, got {u}")));
        }
        Ok(self.eval_unchecked(u))
    }

    pub(crate) fn eval_unchecked(&self, u: f64) -> f64 {
        use BernsteinKind::*;
        if u == 0.0 {
            return 0.0;
        }
        match self.kind {
            Fractional { nu } => u.powf(nu / 2.0),
            Relativistic { nu, m } => {
                let k = m.powf(2.0 / nu);
                m * ((nu / 2.0) * (u / k).ln_1p()).exp_m1()
            }
            SumOfFractional { nu, nu_tilde } => u.powf(nu / 2.0) + u.powf(nu_tilde / 2.0),
            LogDamped { nu, nu_tilde } => ((nu / 2.0) * u.ln() - (nu_tilde / 2.0) * u.ln_1p().ln()).exp(),
            LogBoosted { nu, nu_tilde } => ((nu / 2.0) * u.ln() + (nu_tilde / 2.0) * u.ln_1p().ln()).exp(),
            ClassicalLaplacian => u,
        }
    }
}

/// `Ψ(u)` for a catalog member.
pub fn psi_eval(psi: &BernsteinFunction, u: f64) -> Result<f64> {
    psi.eval(u)
}

#[derive(Debug, Clone, Serialize)]
pub struct SignViolation {
    pub order: usize,
    /// Left end of the stencil carrying the offending divided difference.
    pub u: f64,
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub order: usize,
    pub grid_points: usize,
    pub violations: Vec<SignViolation>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation_order(&self) -> Option<usize> {
        self.violations.iter().map(|v| v.order).min()
    }
}

/// Checks `f ≥ 0`, `f' ≥ 0`, `f'' ≤ 0`, ... up to `order` through divided
/// differences on `grid` (the n-th divided difference equals `f⁽ⁿ⁾(ξ)/n!`
/// inside its stencil).
pub fn check_complete_monotonicity(psi: &BernsteinFunction, grid: &[f64], order: usize) -> Result<MonotonicityReport> {
    check_complete_monotonicity_fn(|u| psi.eval_unchecked(u), grid, order)
}

/// As [`check_complete_monotonicity`] for an arbitrary function.
pub fn check_complete_monotonicity_fn<F: Fn(f64) -> f64>(f: F, grid: &[f64], order: usize) -> Result<MonotonicityReport> {
    if !(1..=4).contains(&order) {
        return Err(Error::Parameter(format!("monotonicity order must be in 1..=4, got {order}")));
    }
    if grid.len() < order + 1 || grid.windows(2).any(|w| !(w[1] > w[0])) || grid[0] <= 0.0 {
        return Err(Error::Parameter("grid must be positive, strictly increasing and long enough".into()));
    }
    let eps = f64::EPSILON;
    let mut dd: Vec<f64> = grid.iter().map(|&u| f(u)).collect();
    let mut err: Vec<f64> = dd.iter().map(|v| 4.0 * eps * v.abs()).collect();
    let mut violations = Vec::new();
    for (i, &v) in dd.iter().enumerate() {
        if v < -err[i] {
            violations.push(SignViolation { order: 0, u: grid[i], value: v, tolerance: err[i] });
        }
    }
    for n in 1..=order {
        let m = dd.len() - 1;
        let mut next = Vec::with_capacity(m);
        let mut next_err = Vec::with_capacity(m);
        for i in 0..m {
            let span = grid[i + n] - grid[i];
            next.push((dd[i + 1] - dd[i]) / span);
            next_err.push((err[i + 1] + err[i] + 2.0 * eps * (dd[i + 1].abs() + dd[i].abs())) / span);
        }
        dd = next;
        err = next_err;
        // required sign: (-1)^{n+1} f^{(n)} ≥ 0
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        for i in 0..dd.len() {
            let tol = 8.0 * err[i];
            if sign * dd[i] < -tol {
                violations.push(SignViolation { order: n, u: grid[i], value: dd[i], tolerance: tol });
            }
        }
    }
    Ok(MonotonicityReport { order, grid_points: grid.len(), violations })
}

#[derive(Debug, Clone, Serialize)]
pub struct HartmanWintnerReport {
    pub u_max: f64,
    /// `(u, Ψ(u²)/log u)` on the sampling grid.
    pub trajectory: Vec<(f64, f64)>,
    /// Grid point where the ratio is smallest; growth is assessed beyond it.
    pub threshold: f64,
    pub increasing_beyond_threshold: bool,
    /// Last ratio divided by the minimal one.
    pub growth_factor: f64,
    pub diverges: bool,
}

/// Tracks `Ψ(u²)/log u` on a log grid over `[2, u_max]`. Advisory: a finite
/// grid can only show sustained growth, not the limit itself.
pub fn check_hartman_wintner(psi: &BernsteinFunction, u_max: f64) -> Result<HartmanWintnerReport> {
    check_hartman_wintner_fn(|u| psi.eval_unchecked(u), u_max)
}

pub fn check_hartman_wintner_fn<F: Fn(f64) -> f64>(f: F, u_max: f64) -> Result<HartmanWintnerReport> {
    if !(u_max >= 1e3) || !u_max.is_finite() {
        return Err(Error::Parameter(format!("u_max must be at least 1e3, got {u_max}")));
    }
    let n = 240;
    let (l0, l1) = (2f64.ln(), u_max.ln());
    let trajectory: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let u = (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp();
            (u, f(u * u) / u.ln())
        })
        .collect();
    let (imin, &(threshold, rmin)) = trajectory
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty grid");
    let increasing = trajectory[imin..].windows(2).all(|w| w[1].1 >= w[0].1);
    let growth = trajectory[n - 1].1 / rmin;
    let diverges = increasing && threshold.ln() <= 0.75 * l1 && growth >= 1.5;
    Ok(HartmanWintnerReport {
        u_max,
        trajectory,
        threshold,
        increasing_beyond_threshold: increasing,
        growth_factor: growth,
        diverges,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WlscReport {
    pub wlsc: Wlsc,
    /// Largest `c` for which every sampled pair satisfies the inequality.
    pub observed_c: f64,
    pub worst_gamma: f64,
    pub worst_u: f64,
    /// Slope of `log min_u ratio` against `log γ` for `γ ≥ 10`; negative
    /// values mean no positive constant can work for all `γ`.
    pub gamma_trend_slope: f64,
    pub passed: bool,
}

/// Samples `γ ∈ [1, 1e4]` and `u ∈ (θ, 1e6]` and tests
/// `Ψ(γu) ≥ c γ^μ Ψ(u)` with the stored triple.
pub fn wlsc_verify(psi: &BernsteinFunction) -> Result<WlscReport> {
    let w = psi
        .wlsc
        .ok_or_else(|| Error::Parameter("WLSC parameters are not populated for this Bernstein function".into()))?;
    let gammas: Vec<f64> = (0..41).map(|i| 10f64.powf(4.0 * i as f64 / 40.0)).collect();
    let u_lo = (w.theta_lower * (1.0 + 1e-9)).max(1e-6);
    let us: Vec<f64> = (0..61)
        .map(|i| (u_lo.ln() + (1e6f64.ln() - u_lo.ln()) * i as f64 / 60.0).exp())
        .filter(|&u| u > w.theta_lower)
        .collect();
    let mut observed = f64::INFINITY;
    let (mut wg, mut wu) = (1.0, us[0]);
    let mut trend = Vec::new();
    for &g in &gammas {
        let mut row_min = f64::INFINITY;
        for &u in &us {
            let r = psi.eval_unchecked(g * u) / (g.powf(w.mu_lower) * psi.eval_unchecked(u));
            row_min = row_min.min(r);
            if r < observed {
                observed = r;
                wg = g;
                wu = u;
            }
        }
        if g >= 10.0 {
            trend.push((g.ln(), row_min.ln()));
        }
    }
    let slope = fit_slope(&trend);
    let passed = observed >= w.c_lower * (1.0 - 1e-9) && slope >= -0.01;
    Ok(WlscReport { wlsc: w, observed_c: observed, worst_gamma: wg, worst_u: wu, gamma_trend_slope: slope, passed })
}

fn fit_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// `min Ψ(u)/u^β` over a log grid on `[u_lo, u_hi]`.
pub fn lower_scaling_ratio(psi: &BernsteinFunction, u_lo: f64, u_hi: f64, samples: usize) -> f64 {
    let beta = psi.lower_scaling_beta;
    (0..samples)
        .map(|i| {
            let u = (u_lo.ln() + (u_hi.ln() - u_lo.ln()) * i as f64 / (samples - 1).max(1) as f64).exp();
            psi.eval_unchecked(u) / u.powf(beta)
        })
        .fold(f64::INFINITY, f64::min)
}
