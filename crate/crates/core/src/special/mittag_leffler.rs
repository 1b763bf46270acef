//! Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ z^k / Γ(αk + β)` for real `z`.
//!
//! Three evaluation routes are combined:
//!
//! * the Taylor series, summed with Neumaier compensation, used for `z > 0`
//!   and for moderate negative `z` as long as the cancellation between terms
//!   stays below [`SERIES_CANCELLATION_LIMIT`];
//! * the algebraic asymptotic expansion `-Σ_k z^{-k}/Γ(β-αk)` for large
//!   negative `z` and `α < 1`, accepted only when its term envelope has
//!   dropped below round-off;
//! * inversion of the Laplace transform `s^{α-β}/(s^α - z)` on a Hankel
//!   contour collapsed onto the negative real axis, which leaves a real,
//!   non-oscillatory integral plus (for `1 < α < 2`) the residues of the two
//!   complex poles. Used whenever the other two routes decline.

use std::f64::consts::PI;

use super::gamma::{ln_gamma, rgamma};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_breaks, QuadOptions};

/// Largest `|z|` for which the series is attempted at negative `z`.
pub const SERIES_RADIUS: f64 = 5.0;
/// Maximal ratio `Σ|t_k| / |Σ t_k|` accepted from the series route.
pub const SERIES_CANCELLATION_LIMIT: f64 = 1e3;

const INTEGRAL_REL_TOL: f64 = 1e-13;
const MAX_SERIES_TERMS: usize = 200_000;

/// Parameters `(α, β)` of `E_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MlParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::Parameter(format!("Mittag-Leffler alpha must lie in (0,2), got {alpha}")));
        }
        if !beta.is_finite() {
            return Err(Error::Parameter(format!("Mittag-Leffler beta must be finite, got {beta}")));
        }
        Ok(MlParams { alpha, beta })
    }
}

/// Evaluates `E_{α,β}(z)`.
pub fn ml_eval(p: MlParams, z: f64) -> Result<f64> {
    let MlParams { alpha, beta } = MlParams::new(p.alpha, p.beta)?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("Mittag-Leffler argument must be finite, got {z}")));
    }
    if z == 0.0 {
        return Ok(rgamma(beta));
    }
    if alpha == 1.0 {
        return alpha_one(beta, z);
    }
    if z > 0.0 {
        return series(alpha, beta, z).map(|s| s.value);
    }
    let x = -z;
    // peak term magnitude grows like exp(x^{1/α})
    if x <= SERIES_RADIUS && x.powf(1.0 / alpha) < 40.0 {
        if let Ok(s) = series(alpha, beta, z) {
            if s.abs_sum <= SERIES_CANCELLATION_LIMIT * s.value.abs() {
                return Ok(s.value);
            }
        }
    }
    if alpha < 1.0 {
        if let Some(v) = asymptotic(alpha, beta, x) {
            return Ok(v);
        }
    }
    laplace_route(alpha, beta, x)
}

/// Convenience wrapper validating `(α, β)` on every call.
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    ml_eval(MlParams::new(alpha, beta)?, z)
}

/// Result of the compensated Taylor summation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesSum {
    pub value: f64,
    /// `Σ |t_k|`, the cancellation yardstick.
    pub abs_sum: f64,
    pub terms: usize,
}

/// Taylor series with Neumaier-compensated accumulation.
pub fn series(alpha: f64, beta: f64, z: f64) -> Result<SeriesSum> {
    let (mut sum, mut comp, mut abs_sum) = (0.0f64, 0.0f64, 0.0f64);
    let lnz = z.abs().ln();
    let mut zk = 1.0f64;
    let mut small_run = 0;
    for k in 0..MAX_SERIES_TERMS {
        let arg = alpha * k as f64 + beta;
        let term = if zk.abs() < 1e300 && zk.abs() > 1e-300 && arg < 170.0 {
            zk * rgamma(arg)
        } else {
            let r = rgamma_log(arg);
            match r {
                None => 0.0,
                Some((lr, sr)) => {
                    let sz = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                    sz * sr * (k as f64 * lnz + lr).exp()
                }
            }
        };
        if !term.is_finite() {
            return Err(Error::eval(
                "Mittag-Leffler series",
                format!("overflow at term {k} for alpha={alpha}, beta={beta}, z={z}"),
            ));
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        abs_sum += term.abs();
        zk *= z;
        // terms decrease once Γ(αk+β) outgrows |z|^k; require a short run of
        // negligible terms past that point
        let past_peak = arg > 1.0 && alpha * arg.ln() > lnz;
        if past_peak && term.abs() <= 1e-18 * (sum + comp).abs().max(1e-300) {
            small_run += 1;
            if small_run >= 3 {
                let value = sum + comp;
                if !value.is_finite() {
                    break;
                }
                return Ok(SeriesSum { value, abs_sum, terms: k + 1 });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::eval(
        "Mittag-Leffler series",
        format!("no convergence within {MAX_SERIES_TERMS} terms for alpha={alpha}, beta={beta}, z={z}"),
    ))
}

fn rgamma_log(x: f64) -> Option<(f64, f64)> {
    if x <= 0.0 && x == x.floor() {
        return None;
    }
    let (l, s) = ln_gamma(x);
    Some((-l, s))
}

/// Asymptotic expansion for `z = -x`, `x → ∞`, `0 < α < 1`.
///
/// Returns `None` unless the term envelope `x^{-k} Γ(1-β+αk)/π` reaches
/// `1e-17` of the running sum while still decreasing.
pub fn asymptotic(alpha: f64, beta: f64, x: f64) -> Option<f64> {
    if !(alpha < 1.0) || x <= 1.0 {
        return None;
    }
    let lnx = x.ln();
    let mut sum = 0.0;
    let mut prev_env = f64::INFINITY;
    for k in 1..80 {
        let kf = k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * (-kf * lnx).exp() * rgamma(beta - alpha * kf);
        sum += term;
        let a = 1.0 - beta + alpha * kf;
        if a <= 0.0 {
            continue;
        }
        let env = (-kf * lnx + ln_gamma(a).0).exp() / PI;
        if env > prev_env {
            return None;
        }
        prev_env = env;
        if sum != 0.0 && env <= 1e-17 * sum.abs() {
            return Some(sum);
        }
    }
    None
}

/// Hankel-contour route for `z = -x < 0`, `α ≠ 1`.
pub fn laplace_route(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if alpha == 1.0 {
        return alpha_one(beta, -x);
    }
    if beta >= 1.0 + alpha {
        // E_{α,β}(z) = (E_{α,β-α}(z) - 1/Γ(β-α)) / z
        let lower = laplace_route(alpha, beta - alpha, x)?;
        return Ok((lower - rgamma(beta - alpha)) / (-x));
    }
    let mut value = cut_integral(alpha, beta, x)?;
    if alpha > 1.0 {
        let r = x.powf(1.0 / alpha);
        let th = PI / alpha;
        value += 2.0 / alpha * r.powf(1.0 - beta) * (r * th.cos()).exp() * (th * (1.0 - beta) + r * th.sin()).cos();
    }
    Ok(value)
}

/// `(1/(πα)) ∫_0^∞ e^{-ρ^{1/α}} ρ^{(1-β)/α} (ρ sin πβ - x sin π(α-β)) / |ρ + x e^{iπα}|² dρ`
fn cut_integral(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    let e = (1.0 - beta) / alpha;
    // ρ = v^m absorbs the integrable endpoint singularity when e < 0
    let m = if e < 0.0 { 1.0 / (1.0 + e) } else { 1.0 };
    let (sb, sab) = ((PI * beta).sin(), (PI * (alpha - beta)).sin());
    let (cpa, spa) = ((PI * alpha).cos(), (PI * alpha).sin());
    let inv_alpha = 1.0 / alpha;
    let rho_max = 750f64.powf(alpha);
    let f = |v: f64| {
        let (rho, jac) = if m == 1.0 { (v, v.powf(e)) } else { (v.powf(m), m) };
        let num = rho * sb - x * sab;
        let shifted = rho + x * cpa;
        let den = shifted * shifted + (x * spa) * (x * spa);
        let damp = (-rho.powf(inv_alpha)).exp();
        if damp == 0.0 { 0.0 } else { damp * jac * num / den }
    };
    let to_v = |rho: f64| if m == 1.0 { rho } else { rho.powf(1.0 / m) };
    let mut pts = vec![0.0];
    for r in [0.25 * x, x * cpa.abs(), x, 4.0 * x, 1.0] {
        if r > 0.0 && r < rho_max {
            pts.push(to_v(r));
        }
    }
    pts.push(to_v(rho_max));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: INTEGRAL_REL_TOL, max_intervals: 4000 };
    let r = integrate_breaks(f, &pts, opts)?;
    Ok(r.value / (PI * alpha))
}

fn alpha_one(beta: f64, z: f64) -> Result<f64> {
    if beta == 1.0 {
        return Ok(z.exp());
    }
    if z > 0.0 {
        return series(1.0, beta, z).map(|s| s.value);
    }
    if -z <= SERIES_RADIUS {
        let s = series(1.0, beta, z)?;
        if s.abs_sum <= SERIES_CANCELLATION_LIMIT * s.value.abs() {
            return Ok(s.value);
        }
    }
    if beta < 1.0 {
        return Ok(rgamma(beta) + z * alpha_one(beta + 1.0, z)?);
    }
    // E_{1,β}(z) = (1/Γ(β)) ∫_0^1 exp(z (1 - v^{1/(β-1)})) dv,  β > 1
    let p = 1.0 / (beta - 1.0);
    let x = -z;
    let f = |v: f64| (z * (1.0 - v.powf(p))).exp();
    let mut pts = vec![0.0];
    for k in [1.0, 10.0, 40.0] {
        if k < x {
            pts.push((1.0 - k / x).powf(beta - 1.0));
        }
    }
    pts.push(1.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let r = integrate_breaks(f, &pts, QuadOptions::rel(INTEGRAL_REL_TOL))?;
    Ok(rgamma(beta) * r.value)
}

/// Empirical constant in `|E_{α,β}(-s)| ≤ C/(1+s)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DecayBound {
    pub constant: f64,
    pub argmax: f64,
    pub samples: usize,
}

/// Supremum of `(1+s)|E_{α,β}(-s)|` over `s = 0` and a log grid on `[1e-6, s_max]`.
pub fn decay_constant(p: MlParams, s_max: f64, samples: usize) -> Result<DecayBound> {
    let mut best = (rgamma(p.beta).abs(), 0.0);
    let (l0, l1) = (1e-6f64.ln(), s_max.ln());
    for i in 0..samples {
        let s = (l0 + (l1 - l0) * i as f64 / (samples - 1).max(1) as f64).exp();
        let v = (1.0 + s) * ml_eval(p, -s)?.abs();
        if v > best.0 {
            best = (v, s);
        }
    }
    Ok(DecayBound { constant: best.0, argmax: best.1, samples: samples + 1 })
}

/// `|∫_0^H e^{-st} E_{α,1}(-λt^α) dt - s^{α-1}/(s^α+λ)|`.
pub fn ml_laplace_residual(alpha: f64, lambda: f64, s: f64, horizon: f64) -> Result<f64> {
    let p = MlParams::new(alpha, 1.0)?;
    if !(horizon > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    if !(s > lambda.max(0.0).powf(1.0 / alpha)) {
        return Err(Error::Domain(format!("transform variable s={s} must exceed lambda^(1/alpha)")));
    }
    let f = |t: f64| {
        let v = ml_eval(p, -lambda * t.powf(alpha)).unwrap_or(f64::NAN);
        (-s * t).exp() * v
    };
    // geometric break points resolve the t^α cusp at the origin
    let mut pts = vec![0.0];
    let mut b = horizon.min(1.0 / s) * 1e-8;
    while b < horizon {
        pts.push(b);
        b *= 10.0;
    }
    pts.push(horizon);
    let r = integrate_breaks(f, &pts, QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_intervals: 4000 })?;
    if !r.value.is_finite() {
        return Err(Error::eval("Laplace residual quadrature", "non-finite integrand"));
    }
    let exact = s.powf(alpha - 1.0) / (s.powf(alpha) + lambda);
    Ok((r.value - exact).abs())
}
