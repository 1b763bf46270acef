//! One-sided α-stable law with Laplace transform `e^{-u^α}`, `0 < α < 1`.
//!
//! The density is evaluated from Zolotarev's integral representation in
//! Kanter's form,
//!
//! ```text
//! g₁(x) = α / ((1-α) π x) ∫_0^π y(φ) e^{-y(φ)} dφ,   y(φ) = A(φ) x^{-α/(1-α)},
//! A(φ)  = sin(αφ)^{α/(1-α)} sin((1-α)φ) / sin(φ)^{1/(1-α)},
//! ```
//!
//! whose integrand is bounded and unimodal. Integration runs over the
//! reflected angle `δ = π - φ`. Far in the tail, where the peak
//! of the integrand collapses onto `φ = π` below double resolution, the
//! convergent large-x series takes over.

use std::f64::consts::PI;

use super::gamma::{gamma, ln_gamma};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_breaks, QuadOptions};

const DENSITY_REL_TOL: f64 = 1e-12;
/// `x^α` beyond which the large-x series replaces the integral.
const TAIL_SWITCH: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableDensity {
    pub alpha: f64,
}

impl StableDensity {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Parameter(format!("stable index must lie in (0,1), got {alpha}")));
        }
        Ok(StableDensity { alpha })
    }

    /// `ln A(π - δ)`; the reflected angle keeps `sin φ` accurate where the
    /// integrand concentrates for large `x`.
    fn ln_kanter(&self, delta: f64) -> f64 {
        let a = self.alpha;
        let b = 1.0 - a;
        let phi = PI - delta;
        (a / b) * (a * phi).sin().ln() + (b * phi).sin().ln() - delta.sin().ln() / b
    }

    /// `δ ↦ ln y` is decreasing; returns the reflected angle where it crosses `level`.
    fn solve_angle(&self, ln_scale: f64, level: f64) -> Option<f64> {
        let g = |d: f64| self.ln_kanter(d) + ln_scale - level;
        let (mut lo, mut hi) = (1e-300, PI - 1e-12);
        if g(lo) <= 0.0 || g(hi) >= 0.0 {
            return None;
        }
        for _ in 0..2000 {
            let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Some(0.5 * (lo + hi))
    }

    fn break_points(&self, ln_scale: f64) -> Vec<f64> {
        let mut pts = vec![0.0];
        for level in [-5.0f64, -1.0, 0.0, 1.5, 3.5] {
            if let Some(p) = self.solve_angle(ln_scale, level) {
                pts.push(p);
            }
        }
        pts.push(PI);
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        // the algebraic tail beyond the last level spans decades of δ
        let mut out = vec![pts[0]];
        for w in pts.windows(2) {
            if w[0] > 0.0 {
                let mut p = w[0] * 4.0;
                while p < w[1] * 0.5 {
                    out.push(p);
                    p *= 4.0;
                }
            }
            out.push(w[1]);
        }
        out
    }

    /// `g₁(x)`.
    pub fn density(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("stable density needs x > 0, got {x}")));
        }
        let a = self.alpha;
        if x.powf(a) > TAIL_SWITCH {
            return Ok(self.tail_series(x));
        }
        let c = a / (1.0 - a);
        let ln_scale = -c * x.ln();
        let f = |d: f64| {
            let ly = self.ln_kanter(d) + ln_scale;
            let v = (ly - ly.exp()).exp();
            if v.is_finite() { v } else { 0.0 }
        };
        let pts = self.break_points(ln_scale);
        let r = integrate_breaks(f, &pts, QuadOptions { abs_tol: 1e-300, rel_tol: DENSITY_REL_TOL, max_intervals: 2000 })?;
        Ok((c / (PI * x) * r.value).max(0.0))
    }

    /// `P(ξ₁ ≤ x) = (1/π) ∫_0^π e^{-y(φ)} dφ`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        if !x.is_finite() {
            return Ok(1.0);
        }
        let c = self.alpha / (1.0 - self.alpha);
        let ln_scale = -c * x.ln();
        let f = |d: f64| {
            let y = (self.ln_kanter(d) + ln_scale).exp();
            (-y).exp()
        };
        let pts = self.break_points(ln_scale);
        let r = integrate_breaks(f, &pts, QuadOptions { abs_tol: 1e-300, rel_tol: DENSITY_REL_TOL, max_intervals: 2000 })?;
        Ok((r.value / PI).clamp(0.0, 1.0))
    }

    /// Convergent series `(1/π) Σ_k (-1)^{k+1} Γ(αk+1)/k! sin(παk) x^{-αk-1}`.
    pub fn tail_series(&self, x: f64) -> f64 {
        let a = self.alpha;
        let lnx = x.ln();
        let mut sum = 0.0;
        for k in 1..200 {
            let kf = k as f64;
            let lmag = ln_gamma(a * kf + 1.0).0 - ln_gamma(kf + 1.0).0 - (a * kf + 1.0) * lnx;
            let term = if k % 2 == 1 { 1.0 } else { -1.0 } * (PI * a * kf).sin() * lmag.exp();
            sum += term;
            if lmag.exp() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum / PI
    }

    /// `g_t(u) = t^{-1/α} g₁(t^{-1/α} u)`.
    pub fn density_at_time(&self, t: f64, u: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        let s = t.powf(-1.0 / self.alpha);
        Ok(s * self.density(s * u)?)
    }

    /// Empirical `c₁` in `g₁(x) ≤ c₁ (1+x)^{-1-α}`: supremum over a log grid on `[1e-3, 1e8]`.
    pub fn tail_constant(&self, samples: usize) -> Result<f64> {
        let (l0, l1) = (1e-3f64.ln(), 1e8f64.ln());
        let mut best = 0.0f64;
        for i in 0..samples {
            let x = (l0 + (l1 - l0) * i as f64 / (samples - 1).max(1) as f64).exp();
            best = best.max(self.density(x)? * (1.0 + x).powf(1.0 + self.alpha));
        }
        Ok(best)
    }

    /// `E[ξ₁^{-p}] = Γ(1+p/α)/Γ(1+p)` for `p > -α`.
    pub fn negative_moment(&self, p: f64) -> f64 {
        gamma(1.0 + p / self.alpha) / gamma(1.0 + p)
    }
}

/// `g₁(x)` for the one-sided stable law of index `alpha`.
pub fn stable_density(alpha: f64, x: f64) -> Result<f64> {
    StableDensity::new(alpha)?.density(x)
}

/// `g_t(u)` through the self-similar scaling.
pub fn stable_density_scaled(alpha: f64, t: f64, u: f64) -> Result<f64> {
    StableDensity::new(alpha)?.density_at_time(t, u)
}

/// Density of the inverse subordinator: `η_t(u) = (t/α) u^{-1-1/α} g₁(u^{-1/α} t)`.
pub fn inverse_subordinator_density(alpha: f64, t: f64, u: f64) -> Result<f64> {
    let g = StableDensity::new(alpha)?;
    if !(t > 0.0) || !(u > 0.0) {
        return Err(Error::Domain(format!("inverse subordinator density needs t > 0 and u > 0, got t={t}, u={u}")));
    }
    let s = u.powf(-1.0 / alpha);
    Ok(t / alpha * s / u * g.density(s * t)?)
}
