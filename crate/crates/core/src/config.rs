//! Run configuration: a TOML document with one section per stage.
//!
//! Every field is checked before any computation starts, and unknown keys are
//! rejected, so a configuration error never surfaces halfway through a run.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bernstein::BernsteinFunction;
use crate::error::{Error, Result};
use crate::inverse::Regularization;
use crate::principles::{abp_threshold, ComparisonMode};
use crate::solver::{ProblemSpec, Source, TimeFunction, TimeGrid};
use crate::spatial::{Domain1D, OperatorMode};
use crate::stochastic::{simulable_index, McConfig};

/// Grid function described in closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Zero,
    Constant { value: f64 },
    /// `scale · 4(x-a)(b-x)/(b-a)²`, peak `scale` at the midpoint.
    Parabola { scale: f64 },
    Bump { center: f64, width: f64, scale: f64 },
    /// `scale · sin(kπ(x-a)/(b-a))`.
    SineMode { k: u32, scale: f64 },
    /// `scale · cos(π(x-m)/(b-a))^power` with `m` the midpoint.
    CosinePower { power: f64, scale: f64 },
    Indicator { lo: f64, hi: f64, value: f64 },
    Values { values: Vec<f64> },
}

impl Profile {
    pub fn sample(&self, d: &Domain1D) -> Result<Vec<f64>> {
        let (a, b) = (d.a, d.b);
        let len = b - a;
        let xs = d.points();
        let f = |g: &dyn Fn(f64) -> f64| xs.iter().map(|&x| g(x)).collect::<Vec<f64>>();
        Ok(match self {
            Profile::Zero => vec![0.0; d.n_grid],
            Profile::Constant { value } => vec![*value; d.n_grid],
            Profile::Parabola { scale } => f(&|x| scale * 4.0 * (x - a) * (b - x) / (len * len)),
            Profile::Bump { center, width, scale } => {
                if !(*width > 0.0) {
                    return Err(Error::Config(format!("bump width must be positive, got {width}")));
                }
                f(&|x| scale * (-((x - center) / width).powi(2)).exp())
            }
            Profile::SineMode { k, scale } => f(&|x| scale * (*k as f64 * PI * (x - a) / len).sin()),
            Profile::CosinePower { power, scale } => f(&|x| scale * (PI * (x - 0.5 * (a + b)) / len).cos().max(0.0).powf(*power)),
            Profile::Indicator { lo, hi, value } => f(&|x| if x >= *lo && x <= *hi { *value } else { 0.0 }),
            Profile::Values { values } => {
                if values.len() != d.n_grid {
                    return Err(Error::Config(format!("profile has {} values for {} grid points", values.len(), d.n_grid)));
                }
                values.clone()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSection {
    Zero,
    Separable { rho1: TimeFunction, rho2: Profile },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub a: f64,
    pub b: f64,
    pub n_grid: usize,
}

fn zero_profile() -> Profile {
    Profile::Zero
}
fn zero_source() -> SourceSection {
    SourceSection::Zero
}
fn jump_mode() -> OperatorMode {
    OperatorMode::RestrictedJumpKernel
}
fn four() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub domain: DomainSection,
    pub psi: BernsteinFunction,
    #[serde(default = "jump_mode")]
    pub operator: OperatorMode,
    pub alpha: f64,
    pub horizon: f64,
    /// Defaults to `min(n_grid / 2, 200)`.
    #[serde(default)]
    pub n_modes: Option<usize>,
    pub steps: usize,
    #[serde(default = "four")]
    pub refine: usize,
    #[serde(default = "zero_profile")]
    pub potential: Profile,
    pub phi0: Profile,
    #[serde(default = "zero_source")]
    pub source: SourceSection,
}

impl ProblemSection {
    pub fn n_modes(&self) -> usize {
        self.n_modes.unwrap_or((self.domain.n_grid / 2).clamp(1, 200))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    #[default]
    Spectral,
    MonteCarlo,
    Both,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub n_paths: usize,
    pub h: f64,
    pub master_seed: u64,
    /// `(t, x)` points to estimate.
    pub probes: Vec<[f64; 2]>,
    #[serde(default = "yes")]
    pub common_random_numbers: bool,
    #[serde(default)]
    pub w_nodes: Option<usize>,
    #[serde(default)]
    pub s_nodes: Option<usize>,
    #[serde(default)]
    pub max_steps_per_path: Option<u64>,
}

impl McSection {
    pub fn mc_config(&self) -> McConfig {
        let mut c = McConfig::new(self.n_paths, self.h, self.master_seed);
        c.common_random_numbers = self.common_random_numbers;
        if let Some(w) = self.w_nodes {
            c.w_nodes = w;
        }
        if let Some(s) = self.s_nodes {
            c.s_nodes = s;
        }
        if let Some(m) = self.max_steps_per_path {
            c.max_steps_per_path = m;
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    /// Used when neither `--out-dir` nor the environment names a directory.
    #[serde(default)]
    pub dir: Option<String>,
    #[serde(default = "yes")]
    pub field_csv: bool,
    #[serde(default = "yes")]
    pub eigensystem: bool,
    #[serde(default = "yes")]
    pub plot_script: bool,
}

impl Default for OutputsSection {
    fn default() -> Self {
        OutputsSection { dir: None, field_csv: true, eigensystem: true, plot_script: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityChannel {
    Potential,
    InitialDatum,
    Source,
}

fn tol_pos() -> f64 {
    1e-10
}
fn ten() -> f64 {
    10.0
}
fn hundred() -> f64 {
    100.0
}
fn tol_fine() -> f64 {
    1e-9
}

/// Principle checks; each instance derived from the base problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    Positivity {
        #[serde(default = "yes")]
        strict: bool,
        #[serde(default)]
        t_min: Option<f64>,
        #[serde(default = "tol_pos")]
        tol: f64,
    },
    Decay {
        #[serde(default = "ten")]
        max_over_median: f64,
    },
    Abp {
        p: f64,
        #[serde(default = "hundred")]
        cap: f64,
        #[serde(default = "tol_fine")]
        tol: f64,
    },
    /// Data mode lowers `φ₀` by `shift`; potential mode raises `V` by `shift`.
    Comparison {
        mode: ComparisonModeName,
        shift: f64,
        #[serde(default = "tol_fine")]
        tol: f64,
    },
    Stability {
        channel: StabilityChannel,
        eps: f64,
        #[serde(default = "ten")]
        cap: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonModeName {
    Data,
    Potential,
}

impl From<ComparisonModeName> for ComparisonMode {
    fn from(m: ComparisonModeName) -> Self {
        match m {
            ComparisonModeName::Data => ComparisonMode::Data,
            ComparisonModeName::Potential => ComparisonMode::Potential,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesizeSection {
    pub rho1: TimeFunction,
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseSection {
    pub x0: f64,
    pub steps: usize,
    pub rho2: Profile,
    /// Observed trace `t,value`, relative to the config file.
    #[serde(default)]
    pub trace: Option<String>,
    /// Generates the trace instead of reading it.
    #[serde(default)]
    pub synthesize: Option<SynthesizeSection>,
    pub regularization: Regularization,
    /// Known `ρ₁` for the error summary.
    #[serde(default)]
    pub truth: Option<TimeFunction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemSection,
    #[serde(default)]
    pub method: MethodChoice,
    #[serde(default)]
    pub mc: Option<McSection>,
    #[serde(default)]
    pub outputs: OutputsSection,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub inverse: Option<InverseSection>,
}

fn cfg_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl RunConfig {
    /// Parses and validates; every failure is a [`Error::Config`].
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn domain(&self) -> Result<Domain1D> {
        let d = &self.problem.domain;
        Domain1D::new(d.a, d.b, d.n_grid).map_err(cfg_err)
    }

    pub fn spec(&self) -> Result<ProblemSpec> {
        let p = &self.problem;
        let domain = self.domain()?;
        let source = match &p.source {
            SourceSection::Zero => Source::Zero,
            SourceSection::Separable { rho1, rho2 } => Source::Separable { rho1: rho1.clone(), rho2: rho2.sample(&domain)? },
        };
        let spec = ProblemSpec {
            domain,
            psi: p.psi,
            potential: p.potential.sample(&domain)?,
            phi0: p.phi0.sample(&domain)?,
            source,
            alpha: p.alpha,
            horizon: p.horizon,
        };
        spec.validate().map_err(cfg_err)?;
        Ok(spec)
    }

    pub fn time_grid(&self) -> TimeGrid {
        TimeGrid::uniform(self.problem.horizon, self.problem.steps).with_refine(self.problem.refine)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.problem;
        let spec = self.spec()?;
        if p.n_modes() == 0 || p.n_modes() > p.domain.n_grid {
            return Err(Error::Config(format!("n_modes must lie in 1..={}, got {}", p.domain.n_grid, p.n_modes())));
        }
        if p.steps == 0 || p.refine == 0 {
            return Err(Error::Config("steps and refine must be at least 1".into()));
        }
        if matches!(self.method, MethodChoice::MonteCarlo | MethodChoice::Both) {
            let mc = self.mc.as_ref().ok_or_else(|| Error::Config("Monte Carlo needs an [mc] section".into()))?;
            simulable_index(&p.psi).map_err(cfg_err)?;
            if mc.n_paths < 2 || !(mc.h > 0.0) || mc.probes.is_empty() {
                return Err(Error::Config("[mc] needs n_paths >= 2, h > 0 and at least one probe".into()));
            }
            for [t, x] in &mc.probes {
                if !(*t > 0.0 && *t <= p.horizon) || !spec.domain.contains(*x) {
                    return Err(Error::Config(format!("probe ({t}, {x}) must satisfy 0 < t <= horizon and x interior")));
                }
            }
        }
        for c in &self.checks {
            match c {
                CheckSpec::Decay { .. } if !spec.source.is_zero() => {
                    return Err(Error::Config("decay check needs a zero source".into()));
                }
                CheckSpec::Abp { p: exponent, .. } => {
                    let th = abp_threshold(&spec, 1).map_err(cfg_err)?;
                    if !(*exponent > th) {
                        return Err(Error::Config(format!("ABP exponent p = {exponent} must exceed the threshold {th}")));
                    }
                }
                CheckSpec::Comparison { shift, .. } if !(*shift > 0.0) => {
                    return Err(Error::Config(format!("comparison shift must be positive, got {shift}")));
                }
                CheckSpec::Stability { eps, .. } if !(*eps > 0.0) => {
                    return Err(Error::Config(format!("stability eps must be positive, got {eps}")));
                }
                CheckSpec::Positivity { t_min: Some(t), .. } if !(*t > 0.0 && *t <= p.horizon) => {
                    return Err(Error::Config(format!("t_min must lie in (0, horizon], got {t}")));
                }
                _ => {}
            }
        }
        if let Some(inv) = &self.inverse {
            if !spec.domain.contains(inv.x0) || inv.steps == 0 {
                return Err(Error::Config("[inverse] needs an interior x0 and steps >= 1".into()));
            }
            if inv.trace.is_some() == inv.synthesize.is_some() {
                return Err(Error::Config("[inverse] needs exactly one of `trace` or `synthesize`".into()));
            }
            inv.rho2.sample(&spec.domain)?;
        }
        Ok(())
    }
}
