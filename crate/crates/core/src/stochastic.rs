//! Monte Carlo for the time-changed, killed subordinate Brownian motion.
//!
//! With `Ψ(u) = u^{ν/2}` the spatial process is `X = B_S`, `B` a Brownian
//! motion with generator `Δ` and `S` a `ν/2`-stable subordinator. The
//! solution at `(t, x)` is
//!
//! ```text
//! E_x[w(η_t) φ₀(X_{η_t}); τ_D > η_t]
//!   + ∫_0^t (t-s)^{α-1} ∫_0^∞ ω(w) E_x[w(l) F(s, X_l); τ_D > l]|_{l=(t-s)ᵅw} dw ds
//! ```
//!
//! with `w(l) = exp(-∫_0^l V(X_r) dr)` and `ω(w) = w^{-1/α} g₁(w^{-1/α})`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bernstein::{BernsteinFunction, BernsteinKind};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, integrate, QuadOptions};
use crate::solver::{ProblemSpec, Source};
use crate::spatial::Domain1D;
use crate::special::stable::StableDensity;

/// Seed plus the rule deriving an independent stream per `(group, path)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngSpec {
    pub fn new(master_seed: u64) -> Self {
        RngSpec { master_seed }
    }

    /// Stream for path `path` of sample group `group`; independent of how
    /// paths are distributed over workers.
    pub fn substream(&self, group: u64, path: u64) -> ChaCha8Rng {
        let mut s = splitmix(self.master_seed ^ splitmix(group.wrapping_mul(0xD6E8_FEB8_6659_FD93) ^ splitmix(path)));
        let mut seed = [0u8; 32];
        for chunk in seed.chunks_mut(8) {
            s = splitmix(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        ChaCha8Rng::from_seed(seed)
    }
}

fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

/// One draw of `ξ₁` (Kanter's representation).
pub fn sample_stable_unit<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let u = PI * open01(rng);
    let w: f64 = Exp1.sample(rng);
    let b = 1.0 - alpha;
    let ln_a = (alpha / b) * (alpha * u).sin().ln() + (b * u).sin().ln() - u.sin().ln() / b;
    ((ln_a - w.ln()) * b / alpha).exp()
}

/// One draw of `ξ_t`, using `ξ_t ≡ t^{1/α} ξ₁`.
pub fn sample_stable_subordinator<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> Result<f64> {
    check_index(alpha)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("subordinator time must be positive, got {t}")));
    }
    Ok(t.powf(1.0 / alpha) * sample_stable_unit(alpha, rng))
}

/// One draw of `η_t ≡ (t/ξ₁)^α`.
pub fn sample_inverse_subordinator<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> Result<f64> {
    check_index(alpha)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("inverse subordinator time must be positive, got {t}")));
    }
    Ok((t / sample_stable_unit(alpha, rng)).powf(alpha))
}

fn check_index(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("stable index must lie in (0,1), got {alpha}")))
    }
}

/// Stable index `ν` of a simulable Bernstein function.
pub fn simulable_index(psi: &BernsteinFunction) -> Result<f64> {
    match psi.kind {
        BernsteinKind::Fractional { nu } => Ok(nu),
        BernsteinKind::ClassicalLaplacian => Ok(2.0),
        other => Err(Error::UnsupportedMode(format!("path simulation needs a fractional Bernstein function, got {other:?}"))),
    }
}

/// Grid potential as a function on `D`, flat beyond the outermost nodes.
#[derive(Debug, Clone)]
struct GridFunction<'a> {
    domain: &'a Domain1D,
    values: &'a [f64],
}

impl GridFunction<'_> {
    fn flat(&self, x: f64) -> f64 {
        let n = self.values.len();
        let s = (x - self.domain.a) / self.domain.h() - 1.0;
        if s <= 0.0 {
            return self.values[0];
        }
        if s >= (n - 1) as f64 {
            return self.values[n - 1];
        }
        let j = s.floor() as usize;
        let f = s - j as f64;
        (1.0 - f) * self.values[j] + f * self.values[j + 1]
    }
}

/// Increment sampler for `X = B_S`.
#[derive(Debug, Clone, Copy)]
struct Increments {
    /// `ν/2`; `1` means `S_t = t`.
    sub_index: f64,
}

impl Increments {
    fn new(nu: f64) -> Self {
        Increments { sub_index: nu / 2.0 }
    }

    fn step<R: Rng + ?Sized>(&self, dt: f64, rng: &mut R) -> f64 {
        let ds = if self.sub_index >= 1.0 {
            dt
        } else {
            dt.powf(1.0 / self.sub_index) * sample_stable_unit(self.sub_index, rng)
        };
        let z: f64 = StandardNormal.sample(rng);
        (2.0 * ds).sqrt() * z
    }
}

/// State of a path at a requested operational time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSnapshot {
    pub alive: bool,
    pub position: f64,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct PathStats {
    steps: u64,
    abs_jump_sum: f64,
    boundary_skips: u64,
    exit_time: Option<f64>,
    truncated: bool,
}

/// Simulates one path from `x0` on the grid `kh` refined by the sorted
/// `horizons`, recording the state at each horizon. Exit is checked at every
/// grid time; the potential is integrated with the left-endpoint rule.
fn run_path<R: Rng + ?Sized>(
    domain: &Domain1D,
    inc: Increments,
    v: &GridFunction,
    x0: f64,
    horizons: &[f64],
    h: f64,
    max_steps: u64,
    rng: &mut R,
    out: &mut Vec<PathSnapshot>,
) -> PathStats {
    out.clear();
    let mut st = PathStats::default();
    let (mut t, mut x, mut log_w) = (0.0f64, x0, 0.0f64);
    let mut k = 0u64;
    let mut alive = domain.contains(x0);
    let diam = domain.diameter();
    for &target in horizons {
        while alive && t < target {
            if st.steps >= max_steps {
                st.truncated = true;
                alive = false;
                break;
            }
            // t lies in [k h, (k+1) h)
            let next = (k + 1) as f64 * h;
            let end = next.min(target);
            let dt = end - t;
            log_w -= v.flat(x) * dt;
            let dx = inc.step(dt, rng);
            st.steps += 1;
            st.abs_jump_sum += dx.abs();
            if dx.abs() > diam {
                st.boundary_skips += 1;
            }
            x += dx;
            t = end;
            if end == next {
                k += 1;
            }
            if !domain.contains(x) {
                alive = false;
                st.exit_time = Some(t);
            }
        }
        out.push(PathSnapshot { alive, position: x, weight: log_w.exp() });
    }
    st
}

/// Record of a single killed path.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PathRecord {
    pub exited: bool,
    pub exit_time: Option<f64>,
    pub terminal: f64,
    pub weight: f64,
    pub steps: u64,
    pub mean_jump: f64,
    pub boundary_skips: u64,
}

/// Simulates `X = B_S` from `x0` until `horizon` (operational time) or exit.
pub fn simulate_killed_path<R: Rng + ?Sized>(
    domain: &Domain1D,
    psi: &BernsteinFunction,
    potential: &[f64],
    x0: f64,
    horizon: f64,
    h: f64,
    rng: &mut R,
) -> Result<PathRecord> {
    check_path_args(domain, potential, x0, horizon, h)?;
    let inc = Increments::new(simulable_index(psi)?);
    let v = GridFunction { domain, values: potential };
    let mut snap = Vec::with_capacity(1);
    let st = run_path(domain, inc, &v, x0, &[horizon], h, u64::MAX, rng, &mut snap);
    Ok(PathRecord {
        exited: !snap[0].alive,
        exit_time: st.exit_time,
        terminal: snap[0].position,
        weight: snap[0].weight,
        steps: st.steps,
        mean_jump: if st.steps > 0 { st.abs_jump_sum / st.steps as f64 } else { 0.0 },
        boundary_skips: st.boundary_skips,
    })
}

fn check_path_args(domain: &Domain1D, potential: &[f64], x0: f64, horizon: f64, h: f64) -> Result<()> {
    if !domain.contains(x0) {
        return Err(Error::Domain(format!("start point {x0} is not interior")));
    }
    if potential.len() != domain.n_grid || potential.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Parameter("potential must be nonnegative with one value per grid point".into()));
    }
    if !(horizon > 0.0) || !(h > 0.0) {
        return Err(Error::Parameter(format!("horizon and step must be positive, got {horizon}, {h}")));
    }
    Ok(())
}

/// Seeded ensemble of killed paths started at `x0`.
#[derive(Debug, Clone, Serialize)]
pub struct PathEnsemble {
    pub n_paths: usize,
    pub h: f64,
    pub horizon: f64,
    pub x0: f64,
    pub seed: u64,
    pub records: Vec<PathRecord>,
}

impl PathEnsemble {
    /// `P(τ_D > u)` estimates at the given operational times (`u ≤ horizon`).
    pub fn survival(&self, us: &[f64]) -> Vec<f64> {
        us.iter()
            .map(|&u| {
                let alive = self.records.iter().filter(|r| r.exit_time.is_none_or(|e| e > u)).count();
                alive as f64 / self.n_paths as f64
            })
            .collect()
    }

    /// `E[min(τ_D, horizon)^k]`.
    pub fn exit_moment(&self, k: i32) -> f64 {
        self.records.iter().map(|r| r.exit_time.unwrap_or(self.horizon).powi(k)).sum::<f64>() / self.n_paths as f64
    }

    pub fn diagnostics(&self) -> EnsembleDiagnostics {
        let n = self.n_paths as f64;
        EnsembleDiagnostics {
            n_paths: self.n_paths,
            h: self.h,
            exited_fraction: self.records.iter().filter(|r| r.exited).count() as f64 / n,
            mean_jump: self.records.iter().map(|r| r.mean_jump).sum::<f64>() / n,
            boundary_skips: self.records.iter().map(|r| r.boundary_skips).sum(),
            mean_weight: self.records.iter().map(|r| r.weight).sum::<f64>() / n,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleDiagnostics {
    pub n_paths: usize,
    pub h: f64,
    pub exited_fraction: f64,
    pub mean_jump: f64,
    pub boundary_skips: u64,
    pub mean_weight: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_ensemble(
    domain: &Domain1D,
    psi: &BernsteinFunction,
    potential: &[f64],
    x0: f64,
    horizon: f64,
    h: f64,
    n_paths: usize,
    rng: RngSpec,
) -> Result<PathEnsemble> {
    check_path_args(domain, potential, x0, horizon, h)?;
    simulable_index(psi)?;
    let records = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut r = rng.substream(0, p as u64);
            simulate_killed_path(domain, psi, potential, x0, horizon, h, &mut r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathEnsemble { n_paths, h, horizon, x0, seed: rng.master_seed, records })
}

/// Quadrature nodes `w_q` and weights `ω_q` for `∫_0^∞ ω(w) G(w) dw`.
///
/// Bins of equal `ω`-mass; each node is the `ω`-weighted mean of its bin, so
/// the rule is exact for affine `G`.
#[derive(Debug, Clone, Serialize)]
pub struct TimeChangeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `∫ω` computed numerically; equals `1/Γ(α)`.
    pub mass: f64,
}

pub fn time_change_rule(alpha: f64, n_nodes: usize) -> Result<TimeChangeRule> {
    if alpha == 1.0 {
        return Ok(TimeChangeRule { nodes: vec![1.0], weights: vec![1.0], mass: 1.0 });
    }
    check_index(alpha)?;
    if n_nodes == 0 {
        return Err(Error::Parameter("time-change rule needs at least one node".into()));
    }
    let g = StableDensity::new(alpha)?;
    let omega = |w: f64| if w <= 0.0 { 0.0 } else { w.powf(-1.0 / alpha) * g.density(w.powf(-1.0 / alpha)).unwrap_or(0.0) };
    // tabulate the cumulative mass on a fine grid covering the bulk
    let w_hi = 60.0 * crate::special::gamma::gamma(1.0 + alpha).recip().max(1.0);
    let m = 600;
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-10, max_intervals: 200 };
    let edges: Vec<f64> = (0..=m).map(|i| w_hi * (i as f64 / m as f64).powi(2)).collect();
    let mut cum = vec![0.0];
    let mut first = vec![0.0];
    for wdw in edges.windows(2) {
        let c0 = integrate(omega, wdw[0], wdw[1], opts)?.value;
        let c1 = integrate(|w| w * omega(w), wdw[0], wdw[1], opts)?.value;
        cum.push(cum.last().expect("non-empty") + c0);
        first.push(first.last().expect("non-empty") + c1);
    }
    let mass = *cum.last().expect("non-empty");
    let locate = |target: f64| -> (f64, f64) {
        // cumulative mass and first moment at the quantile, linear within a cell
        let j = cum.partition_point(|&c| c < target).clamp(1, m);
        let f = ((target - cum[j - 1]) / (cum[j] - cum[j - 1])).clamp(0.0, 1.0);
        (target, first[j - 1] + f * (first[j] - first[j - 1]))
    };
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut weights = Vec::with_capacity(n_nodes);
    let mut prev = (0.0, 0.0);
    for q in 1..=n_nodes {
        let cur = locate(mass * q as f64 / n_nodes as f64);
        let wq = cur.0 - prev.0;
        nodes.push((cur.1 - prev.1) / wq);
        weights.push(wq);
        prev = cur;
    }
    Ok(TimeChangeRule { nodes, weights, mass })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_paths: usize,
    /// Operational time step.
    pub h: f64,
    pub master_seed: u64,
    /// Reuse the same streams for every instance sharing the seed.
    #[serde(default = "yes")]
    pub common_random_numbers: bool,
    #[serde(default = "default_w_nodes")]
    pub w_nodes: usize,
    #[serde(default = "default_s_nodes")]
    pub s_nodes: usize,
    /// Per-path step budget; exhausted paths are dropped from the estimate and flagged.
    #[serde(default = "default_max_steps")]
    pub max_steps_per_path: u64,
}

fn yes() -> bool {
    true
}
fn default_w_nodes() -> usize {
    32
}
fn default_s_nodes() -> usize {
    16
}
fn default_max_steps() -> u64 {
    10_000_000
}

impl McConfig {
    pub fn new(n_paths: usize, h: f64, master_seed: u64) -> Self {
        McConfig {
            n_paths,
            h,
            master_seed,
            common_random_numbers: true,
            w_nodes: default_w_nodes(),
            s_nodes: default_s_nodes(),
            max_steps_per_path: default_max_steps(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub t: f64,
    pub x: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub term1: f64,
    pub term1_stderr: f64,
    pub term2: f64,
    pub term2_stderr: f64,
    pub n_paths: usize,
    pub h: f64,
    pub seed: u64,
    /// Paths stopped by the step budget (excluded from the estimate).
    pub truncated_paths: usize,
}

impl McEstimate {
    pub fn partial(&self) -> bool {
        self.truncated_paths > 0
    }
}

fn spec_fingerprint(spec: &ProblemSpec) -> u64 {
    let digest = Sha256::digest(serde_json::to_vec(spec).unwrap_or_default());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Per-path contributions at one point.
#[derive(Clone, Copy, Default)]
struct PathValue {
    term1: f64,
    term2: f64,
    truncated: bool,
}

fn mean_se(xs: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = xs.clone().sum::<f64>() / nf;
    let var = xs.map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0).max(1.0);
    (mean, (var / nf).sqrt())
}

/// Two-term Monte Carlo estimate of the solution at each `(t, x)`.
///
/// Points sharing `x` share paths: one `ξ₁` per path gives `η_t = (t/ξ₁)^α`
/// for every requested `t`, and the path is advanced through all horizons.
pub fn estimate_solution_mc(spec: &ProblemSpec, points: &[(f64, f64)], mc: &McConfig) -> Result<Vec<McEstimate>> {
    spec.validate()?;
    let nu = simulable_index(&spec.psi)?;
    if mc.n_paths < 2 || !(mc.h > 0.0) {
        return Err(Error::Parameter("Monte Carlo needs n_paths >= 2 and h > 0".into()));
    }
    for &(t, x) in points {
        if !(t > 0.0 && t <= spec.horizon) || !spec.domain.contains(x) {
            return Err(Error::Domain(format!("probe ({t}, {x}) must satisfy 0 < t <= T and x interior")));
        }
    }
    let alpha = spec.alpha;
    let domain = &spec.domain;
    let inc = Increments::new(nu);
    let v = GridFunction { domain, values: &spec.potential };
    let rule = if spec.source.is_zero() { None } else { Some(time_change_rule(alpha, mc.w_nodes)?) };
    let rng = RngSpec::new(if mc.common_random_numbers {
        mc.master_seed
    } else {
        mc.master_seed ^ spec_fingerprint(spec)
    });

    let mut xs: Vec<f64> = points.iter().map(|p| p.1).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut out = vec![None; points.len()];
    for (gi, &x0) in xs.iter().enumerate() {
        let idx: Vec<usize> = (0..points.len()).filter(|&i| points[i].1 == x0).collect();
        let ts: Vec<f64> = idx.iter().map(|&i| points[i].0).collect();
        let t2: Vec<Term2Layout> = match &rule {
            Some(r) => ts.iter().map(|&t| Term2Layout::new(t, alpha, mc.s_nodes, r)).collect(),
            None => Vec::new(),
        };
        let values: Vec<Vec<PathValue>> = (0..mc.n_paths)
            .into_par_iter()
            .map(|p| {
                let mut r = rng.substream(gi as u64, p as u64);
                let xi = if alpha < 1.0 { sample_stable_unit(alpha, &mut r) } else { 1.0 };
                let mut hz: Vec<(f64, usize, usize)> = Vec::new();
                for (k, &t) in ts.iter().enumerate() {
                    let eta = if alpha < 1.0 { (t / xi).powf(alpha) } else { t };
                    hz.push((eta, k, usize::MAX));
                    if let Some(l) = t2.get(k) {
                        for (j, &hor) in l.horizons.iter().enumerate() {
                            hz.push((hor, k, j));
                        }
                    }
                }
                hz.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
                let horizons: Vec<f64> = hz.iter().map(|e| e.0).collect();
                let mut snaps = Vec::with_capacity(horizons.len());
                let st = run_path(domain, inc, &v, x0, &horizons, mc.h, mc.max_steps_per_path, &mut r, &mut snaps);
                let mut vals = vec![PathValue { truncated: st.truncated, ..Default::default() }; ts.len()];
                for (e, s) in hz.iter().zip(&snaps) {
                    if !s.alive {
                        continue;
                    }
                    let (k, j) = (e.1, e.2);
                    if j == usize::MAX {
                        vals[k].term1 = s.weight * domain.interpolate(&spec.phi0, s.position);
                    } else {
                        let l = &t2[k];
                        vals[k].term2 += l.coef[j] * s.weight * l.source_at(j, s.position, &spec.source, domain);
                    }
                }
                vals
            })
            .collect();
        for (k, &i) in idx.iter().enumerate() {
            let kept: Vec<PathValue> = values.iter().map(|v| v[k]).filter(|v| !v.truncated).collect();
            let n = kept.len();
            let truncated = mc.n_paths - n;
            if n < 2 {
                return Err(Error::Numeric(format!("step budget exhausted on all but {n} paths at x = {x0}")));
            }
            let (m1, s1) = mean_se(kept.iter().map(|v| v.term1), n);
            let (m2, s2) = mean_se(kept.iter().map(|v| v.term2), n);
            let (m, s) = mean_se(kept.iter().map(|v| v.term1 + v.term2), n);
            out[i] = Some(McEstimate {
                t: ts[k],
                x: x0,
                estimate: m,
                stderr: s,
                term1: m1,
                term1_stderr: s1,
                term2: m2,
                term2_stderr: s2,
                n_paths: n,
                h: mc.h,
                seed: mc.master_seed,
                truncated_paths: truncated,
            });
        }
    }
    Ok(out.into_iter().map(|e| e.expect("every point is assigned to a group")).collect())
}

/// Deterministic part of the term-2 quadrature at one `(t, x)`.
struct Term2Layout {
    horizons: Vec<f64>,
    /// Combined outer × inner weight per horizon.
    coef: Vec<f64>,
    /// Source time `s_i` per horizon.
    s_of: Vec<f64>,
}

impl Term2Layout {
    // σ = (t-s)^α turns the singular weight into dσ/α and leaves an integrand smooth in σ
    fn new(t: f64, alpha: f64, s_nodes: usize, rule: &TimeChangeRule) -> Self {
        let (gx, gw) = gauss_legendre(s_nodes.max(1));
        let half = 0.5 * t.powf(alpha);
        let mut horizons = Vec::new();
        let mut coef = Vec::new();
        let mut s_of = Vec::new();
        for (&x, &wg) in gx.iter().zip(&gw) {
            let sigma = half * (1.0 + x);
            for (&w, &om) in rule.nodes.iter().zip(&rule.weights) {
                horizons.push(sigma * w);
                coef.push(half * wg * om / alpha);
                s_of.push(t - sigma.powf(1.0 / alpha));
            }
        }
        Term2Layout { horizons, coef, s_of }
    }

    fn source_at(&self, j: usize, x: f64, source: &Source, domain: &Domain1D) -> f64 {
        match source {
            Source::Zero => 0.0,
            Source::Separable { rho1, rho2 } => rho1.eval(self.s_of[j]) * domain.interpolate(rho2, x),
            Source::Table { .. } => domain.interpolate(&source.eval_grid(self.s_of[j], domain.n_grid), x),
        }
    }
}

/// CSV with columns `t,x,estimate,stderr,n_paths,h,seed`.
pub fn estimates_to_csv(est: &[McEstimate]) -> String {
    let mut s = String::from("t,x,estimate,stderr,n_paths,h,seed\n");
    for e in est {
        let _ = writeln!(s, "{:e},{:e},{:e},{:e},{},{:e},{}", e.t, e.x, e.estimate, e.stderr, e.n_paths, e.h, e.seed);
    }
    s
}
