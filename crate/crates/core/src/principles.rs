//! Numerical checks of the qualitative properties of the solution: positivity,
//! comparison, the ABP bound, stability in the data and long-time decay.
//!
//! The constants in the underlying estimates are existential, so the checks
//! report empirical constants and pass when they stay below configured caps.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::{ProblemSpec, SolutionField, Source, TimeFunction};
use crate::spatial::{l2_norm, Domain1D, EigenSystem};

/// Grid point realizing the worst margin of a check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub t: f64,
    pub x: f64,
    pub value: f64,
    pub margin: f64,
}

/// Outcome of one check. A failing report always carries a witness.
#[derive(Debug, Clone, Serialize)]
pub struct PrincipleReport {
    pub id: String,
    pub instance: String,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub tolerances: BTreeMap<String, f64>,
    pub metrics: BTreeMap<String, f64>,
}

impl PrincipleReport {
    fn new(id: &str, instance: &str) -> Self {
        PrincipleReport {
            id: id.to_string(),
            instance: instance.to_string(),
            pass: true,
            witness: None,
            tolerances: BTreeMap::new(),
            metrics: BTreeMap::new(),
        }
    }

    fn tol(mut self, k: &str, v: f64) -> Self {
        self.tolerances.insert(k.to_string(), v);
        self
    }

    fn metric(&mut self, k: &str, v: f64) {
        self.metrics.insert(k.to_string(), v);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Aggregate of a suite of checks.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub passed: usize,
    pub failed: Vec<String>,
    pub reports: Vec<PrincipleReport>,
}

pub fn aggregate(reports: Vec<PrincipleReport>) -> Verdict {
    let failed: Vec<String> = reports.iter().filter(|r| !r.pass).map(|r| format!("{}:{}", r.id, r.instance)).collect();
    Verdict { pass: failed.is_empty(), passed: reports.len() - failed.len(), failed, reports }
}

fn check_shape(field: &SolutionField) -> Result<()> {
    if field.times.len() < 2 || field.values.len() != field.times.len() || field.x.len() < 2 {
        return Err(Error::Parameter("solution field needs at least two times and two grid points".into()));
    }
    Ok(())
}

/// Minimum of `φ` over grid times `t ≥ t_min` (all grid points are interior).
fn minimum_from(field: &SolutionField, t_min: f64) -> Option<Witness> {
    let mut best: Option<Witness> = None;
    for (t, row) in field.times.iter().zip(&field.values) {
        if *t < t_min {
            continue;
        }
        for (x, v) in field.x.iter().zip(row) {
            if best.is_none_or(|b| *v < b.value) {
                best = Some(Witness { t: *t, x: *x, value: *v, margin: *v });
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityOptions {
    pub strict: bool,
    /// First time of the strict window; `None` means `T/100`.
    pub t_min: Option<f64>,
    /// Slack of the weak check.
    pub tol: f64,
}

impl Default for PositivityOptions {
    fn default() -> Self {
        PositivityOptions { strict: true, t_min: None, tol: 1e-10 }
    }
}

/// Smallest value of `φ` over interior points and grid times `t ≥ t_min`.
pub fn positivity_margin(field: &SolutionField, t_min: f64) -> Option<f64> {
    minimum_from(field, t_min).map(|w| w.value)
}

/// Weak check `min φ ≥ -tol` on `t > 0`; strict check `min φ > 0` on `t ≥ t_min`.
pub fn check_positivity(field: &SolutionField, instance: &str, opts: PositivityOptions) -> Result<PrincipleReport> {
    check_shape(field)?;
    let t_end = *field.times.last().expect("non-empty");
    let t_min = opts.t_min.unwrap_or(t_end / 100.0);
    let mut r = if opts.strict {
        PrincipleReport::new("positivity_strict", instance).tol("t_min", t_min)
    } else {
        PrincipleReport::new("positivity_weak", instance).tol("tol", opts.tol)
    };
    let start = if opts.strict { t_min } else { field.times[1] };
    let w = minimum_from(field, start).ok_or_else(|| Error::Parameter(format!("no grid time at or after {start}")))?;
    r.pass = if opts.strict { w.value > 0.0 } else { w.value >= -opts.tol };
    r.metric("min_value", w.value);
    r.witness = Some(w);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComparisonMode {
    /// Ordered data `(φ₀, F)` with a common potential: `φ¹ ≥ φ²`.
    Data,
    /// Ordered potentials `V₁ ≥ V₂` with common nonnegative data: `φ¹ ≤ φ²`.
    Potential,
}

fn same_setup(a: &ProblemSpec, b: &ProblemSpec) -> bool {
    a.domain == b.domain && a.psi == b.psi && a.alpha == b.alpha && a.horizon == b.horizon
}

fn ge_all(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn usage(msg: &str) -> Error {
    Error::Usage(format!("comparison pair misconfigured: {msg}"))
}

/// Grid-wise ordering check for a pair of solutions.
pub fn check_comparison(
    spec1: &ProblemSpec,
    spec2: &ProblemSpec,
    f1: &SolutionField,
    f2: &SolutionField,
    mode: ComparisonMode,
    tol: f64,
) -> Result<PrincipleReport> {
    check_shape(f1)?;
    if !same_setup(spec1, spec2) {
        return Err(usage("domain, Bernstein function, order and horizon must agree"));
    }
    if f1.times != f2.times || f1.x != f2.x {
        return Err(usage("fields are on different grids"));
    }
    let n = spec1.domain.n_grid;
    let src_ge = |a: &Source, b: &Source| f1.times.iter().all(|&t| ge_all(&a.eval_grid(t, n), &b.eval_grid(t, n)));
    let (id, sign) = match mode {
        ComparisonMode::Data => {
            if spec1.potential != spec2.potential {
                return Err(usage("data mode needs a common potential"));
            }
            if !ge_all(&spec1.phi0, &spec2.phi0) || !src_ge(&spec1.source, &spec2.source) {
                return Err(usage("data mode needs phi0_1 >= phi0_2 and F_1 >= F_2"));
            }
            ("comparison_data", 1.0)
        }
        ComparisonMode::Potential => {
            if spec1.phi0 != spec2.phi0 || spec1.source != spec2.source {
                return Err(usage("potential mode needs common data"));
            }
            let zero = Source::Zero;
            if spec1.phi0.iter().any(|v| *v < 0.0) || !src_ge(&spec1.source, &zero) {
                return Err(usage("potential mode needs nonnegative data"));
            }
            if !ge_all(&spec1.potential, &spec2.potential) {
                return Err(usage("potential mode needs V_1 >= V_2"));
            }
            ("comparison_potential", -1.0)
        }
    };
    let mut r = PrincipleReport::new(id, "pair").tol("tol", tol);
    // margin = sign·(φ¹ - φ²) must stay above -tol
    let mut worst: Option<Witness> = None;
    for (j, t) in f1.times.iter().enumerate() {
        for (i, x) in f1.x.iter().enumerate() {
            let m = sign * (f1.values[j][i] - f2.values[j][i]);
            if worst.is_none_or(|w| m < w.margin) {
                worst = Some(Witness { t: *t, x: *x, value: f1.values[j][i], margin: m });
            }
        }
    }
    let w = worst.expect("non-empty grid");
    r.pass = w.margin >= -tol;
    r.metric("min_margin", w.margin);
    r.witness = Some(w);
    Ok(r)
}

/// Smallest admissible exponent `d/(2μ̲) + 1/α`, from the stored WLSC data.
pub fn abp_threshold(spec: &ProblemSpec, dim: usize) -> Result<f64> {
    let w = spec
        .psi
        .wlsc
        .ok_or_else(|| Error::Parameter("ABP check needs lower scaling metadata for the Bernstein function".into()))?;
    Ok(dim as f64 / (2.0 * w.mu_lower) + 1.0 / spec.alpha)
}

/// `‖F⁺‖_{L^p((0,T)×D)}` by the trapezoid rule in time and the grid sum in space.
pub fn source_lp_norm(source: &Source, domain: &Domain1D, times: &[f64], p: f64) -> f64 {
    let h = domain.h();
    let slice: Vec<f64> = times
        .iter()
        .map(|&t| source.eval_grid(t, domain.n_grid).iter().map(|v| v.max(0.0).powf(p)).sum::<f64>() * h)
        .collect();
    let total: f64 = times.windows(2).zip(slice.windows(2)).map(|(t, s)| 0.5 * (t[1] - t[0]) * (s[0] + s[1])).sum();
    total.powf(1.0 / p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbpOptions {
    pub p: f64,
    pub dim: usize,
    /// Cap on the implied constant.
    pub cap: f64,
    pub tol: f64,
}

/// ABP bound `max φ⁺ ≤ ‖φ₀⁺‖_∞ + C ‖F⁺‖_p` with the implied constant `Ĉ`.
pub fn check_abp(spec: &ProblemSpec, field: &SolutionField, instance: &str, opts: AbpOptions) -> Result<PrincipleReport> {
    check_shape(field)?;
    let threshold = abp_threshold(spec, opts.dim)?;
    if !(opts.p > threshold) {
        return Err(Error::Parameter(format!("ABP exponent p = {} must exceed the threshold {threshold}", opts.p)));
    }
    let mut r = PrincipleReport::new("abp", instance).tol("cap", opts.cap).tol("tol", opts.tol).tol("p", opts.p);
    let mut worst = Witness { t: 0.0, x: field.x[0], value: f64::NEG_INFINITY, margin: 0.0 };
    for (t, row) in field.times.iter().zip(&field.values) {
        for (x, v) in field.x.iter().zip(row) {
            if *v > worst.value {
                worst = Witness { t: *t, x: *x, value: *v, margin: 0.0 };
            }
        }
    }
    let lhs = worst.value.max(0.0);
    let phi0_sup = spec.phi0.iter().fold(0.0f64, |m, v| m.max(*v));
    let f_norm = source_lp_norm(&spec.source, &spec.domain, &field.times, opts.p);
    let excess = (lhs - phi0_sup).max(0.0);
    let c_hat = if f_norm > 0.0 { excess / f_norm } else { 0.0 };
    r.pass = if f_norm > 0.0 { c_hat <= opts.cap } else { lhs <= phi0_sup + opts.tol };
    worst.margin = if f_norm > 0.0 { opts.cap - c_hat } else { phi0_sup + opts.tol - lhs };
    r.witness = Some(worst);
    r.metric("threshold", threshold);
    r.metric("lhs", lhs);
    r.metric("phi0_sup", phi0_sup);
    r.metric("source_lp", f_norm);
    r.metric("c_hat", c_hat);
    Ok(r)
}

/// `max_t ‖φ¹(t) - φ²(t)‖₂`, with the time of the maximum.
fn max_difference(f1: &SolutionField, f2: &SolutionField) -> (f64, f64) {
    let h = f1.h();
    let mut best = (0.0, f1.times[0]);
    for (j, t) in f1.times.iter().enumerate() {
        let d: Vec<f64> = f1.values[j].iter().zip(&f2.values[j]).map(|(a, b)| a - b).collect();
        let n = l2_norm(&d, h);
        if n > best.0 {
            best = (n, *t);
        }
    }
    best
}

fn sup_source_norm(s: &Source, n: usize, h: f64, times: &[f64]) -> f64 {
    times.iter().map(|&t| l2_norm(&s.eval_grid(t, n), h)).fold(0.0, f64::max)
}

/// Data-side bracket of the stability estimate, with its `𝔄` factor.
pub fn stability_bracket(spec1: &ProblemSpec, spec2: &ProblemSpec, times: &[f64]) -> (f64, f64) {
    let (n, h) = (spec1.domain.n_grid, spec1.domain.h());
    let a = [
        l2_norm(&spec1.phi0, h),
        l2_norm(&spec2.phi0, h),
        sup_source_norm(&spec1.source, n, h, times),
        sup_source_norm(&spec2.source, n, h, times),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let dv = spec1.potential.iter().zip(&spec2.potential).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let dphi: Vec<f64> = spec1.phi0.iter().zip(&spec2.phi0).map(|(a, b)| a - b).collect();
    let df = times
        .iter()
        .map(|&t| {
            let d: Vec<f64> =
                spec1.source.eval_grid(t, n).iter().zip(spec2.source.eval_grid(t, n)).map(|(a, b)| a - b).collect();
            l2_norm(&d, h)
        })
        .fold(0.0, f64::max);
    (a * dv + l2_norm(&dphi, h) + df, a)
}

/// Ratio of the solution difference to the data bracket; identical data must
/// give identical solutions.
pub fn check_stability(
    spec1: &ProblemSpec,
    spec2: &ProblemSpec,
    f1: &SolutionField,
    f2: &SolutionField,
    cap: f64,
) -> Result<PrincipleReport> {
    check_shape(f1)?;
    if !same_setup(spec1, spec2) || f1.times != f2.times || f1.x != f2.x {
        return Err(Error::Usage("stability pair must share domain, Bernstein function, order, horizon and grids".into()));
    }
    let mut r = PrincipleReport::new("stability", "pair").tol("cap", cap).tol("zero_tol", 1e-12);
    let (lhs, t_at) = max_difference(f1, f2);
    let (rhs0, a) = stability_bracket(spec1, spec2, &f1.times);
    let ratio = if rhs0 > 0.0 { lhs / rhs0 } else { 0.0 };
    r.pass = if rhs0 > 0.0 { ratio <= cap } else { lhs <= 1e-12 };
    r.witness = Some(Witness { t: t_at, x: f64::NAN, value: lhs, margin: if rhs0 > 0.0 { cap - ratio } else { 1e-12 - lhs } });
    r.metric("lhs", lhs);
    r.metric("rhs0", rhs0);
    r.metric("data_scale", a);
    r.metric("ratio", ratio);
    Ok(r)
}

/// Least-squares line through `(ln ε, ln y)`: slope and `R²`.
pub fn loglog_fit(eps: &[f64], y: &[f64]) -> (f64, f64) {
    let xs: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

/// Long-time decay: `(1 + λ₁ tᵅ) ‖φ(t)‖₂` must stay bounded, judged by max/median.
pub fn check_decay(field: &SolutionField, es: &EigenSystem, instance: &str, max_over_median: f64) -> Result<PrincipleReport> {
    check_shape(field)?;
    let lam1 = es.lambdas[0];
    let norms = field.l2_norms();
    let prod: Vec<f64> =
        field.times.iter().zip(&norms).skip(1).map(|(t, n)| (1.0 + lam1 * t.powf(field.alpha)) * n).collect();
    let mut sorted = prod.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let (jmax, cmax) = prod.iter().enumerate().fold((0, f64::NEG_INFINITY), |b, (j, v)| if *v > b.1 { (j, *v) } else { b });
    let ratio = if median > 0.0 { cmax / median } else if cmax > 0.0 { f64::INFINITY } else { 1.0 };
    let mut r = PrincipleReport::new("decay", instance).tol("max_over_median", max_over_median);
    r.pass = ratio.is_finite() && ratio <= max_over_median;
    r.witness = Some(Witness { t: field.times[jmax + 1], x: f64::NAN, value: cmax, margin: max_over_median - ratio });
    r.metric("empirical_constant", cmax);
    r.metric("median", median);
    r.metric("ratio", ratio);
    r.metric("lambda1", lam1);
    Ok(r)
}

/// Random smooth profile: a few bumps vanishing at the boundary, nonnegative
/// when `nonnegative` is set.
pub fn random_profile<R: Rng + ?Sized>(domain: &Domain1D, nonnegative: bool, rng: &mut R) -> Vec<f64> {
    let (a, b) = (domain.a, domain.b);
    let bumps: Vec<(f64, f64, f64)> = (0..rng.random_range(1..=4))
        .map(|_| {
            let c = a + (b - a) * rng.random_range(0.1..0.9);
            let w = (b - a) * rng.random_range(0.05..0.3);
            let s = if nonnegative { rng.random_range(0.2..1.0) } else { rng.random_range(-1.0..1.0) };
            (c, w, s)
        })
        .collect();
    domain
        .points()
        .iter()
        .map(|&x| {
            let edge = ((x - a) * (b - x)) / ((b - a) * (b - a) / 4.0);
            edge * bumps.iter().map(|(c, w, s)| s * (-((x - c) / w).powi(2)).exp()).sum::<f64>()
        })
        .collect()
}

/// Random nonnegative separable source `ρ₁(t) ρ₂(x)`.
pub fn random_separable_source<R: Rng + ?Sized>(domain: &Domain1D, horizon: f64, rng: &mut R) -> Source {
    let rho1 = match rng.random_range(0..3) {
        0 => TimeFunction::Constant { value: rng.random_range(0.2..2.0) },
        1 => TimeFunction::SineSquared { period: horizon * rng.random_range(0.5..2.0) },
        _ => TimeFunction::Bump {
            center: horizon * rng.random_range(0.1..0.9),
            width: horizon * rng.random_range(0.05..0.3),
            scale: rng.random_range(0.5..3.0),
        },
    };
    Source::Separable { rho1, rho2: random_profile(domain, true, rng) }
}
