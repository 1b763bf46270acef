//! Command pipelines behind the `fraccauchy` binary.
//!
//! Every command is a pure function of its [`Invocation`] to an in-memory set
//! of artifacts, which is what makes manifest replay byte-exact: the manifest
//! stores the invocation and a digest of every artifact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bernstein::BernsteinFunction;
use crate::config::{CheckSpec, MethodChoice, Profile, RunConfig, StabilityChannel};
use crate::error::{Error, Result};
use crate::inverse::{chi_kernel, forward_observation, recover_rho1, ObservationTrace};
use crate::principles::{
    aggregate, check_abp, check_comparison, check_decay, check_positivity, check_stability, AbpOptions,
    PositivityOptions, PrincipleReport,
};
use crate::solver::{coefficients_at, solve, ProblemSpec, SolutionField, Source, TimeFunction};
use crate::spatial::{build_operator, eigensystem, Domain1D, EigenSystem, OperatorMode};
use crate::stochastic::{estimate_solution_mc, estimates_to_csv, time_change_rule, McEstimate};

pub const MANIFEST_NAME: &str = "manifest.json";

/// Exit status for an error: configuration and usage problems are `2`,
/// numerical failures `3`.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Usage(_) | Error::Io(_) | Error::Serialization(_) => 2,
        _ => 3,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenArgs {
    pub modes: usize,
    pub a: f64,
    pub b: f64,
    pub n_grid: usize,
    pub psi: BernsteinFunction,
    pub operator: OperatorMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    Run,
    Solve,
    Simulate,
    Verify,
    Invert,
    Eigensystem(EigenArgs),
}

/// Everything a command reads: the command, the config text and any input
/// files it references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Invocation {
    pub command: Command,
    #[serde(default)]
    pub config: Option<String>,
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
}

impl Invocation {
    /// Config-driven command; reads files the config references relative to `base`.
    pub fn from_config_file(command: Command, path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg = RunConfig::parse(&text)?;
        let mut inputs = BTreeMap::new();
        if let Some(trace) = cfg.inverse.as_ref().and_then(|i| i.trace.clone()) {
            let p = path.parent().unwrap_or(Path::new(".")).join(&trace);
            let body = fs::read_to_string(&p).map_err(|e| Error::Config(format!("cannot read trace {}: {e}", p.display())))?;
            inputs.insert(trace, body);
        }
        Ok(Invocation { command, config: Some(text), inputs })
    }

    fn run_config(&self) -> Result<RunConfig> {
        let text = self.config.as_deref().ok_or_else(|| Error::Usage("command needs a config".into()))?;
        RunConfig::parse(text)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub artifacts: BTreeMap<String, String>,
    pub exit_code: i32,
    /// Human-readable lines for standard output.
    pub summary: Vec<String>,
}

impl Outcome {
    fn put(&mut self, name: &str, body: String) {
        self.artifacts.insert(name.to_string(), body);
    }

    fn json<T: Serialize>(&mut self, name: &str, v: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.put(name, s);
        Ok(())
    }
}

pub fn execute(inv: &Invocation) -> Result<Outcome> {
    match &inv.command {
        Command::Eigensystem(args) => eigen_command(args),
        Command::Run => {
            let cfg = inv.run_config()?;
            let mut out = Outcome::default();
            let spectral = matches!(cfg.method, MethodChoice::Spectral | MethodChoice::Both) || !cfg.checks.is_empty();
            let base = if spectral { Some(spectral_stage(&cfg, &mut out)?) } else { None };
            if cfg.method != MethodChoice::Spectral {
                mc_stage(&cfg, base.as_ref().map(|b| &b.0), &mut out)?;
            }
            if !cfg.checks.is_empty() {
                let (es, field) = base.as_ref().expect("checks imply a spectral solve");
                checks_stage(&cfg, es, field, &mut out)?;
            }
            if cfg.inverse.is_some() {
                invert_stage(&cfg, inv, &mut out)?;
            }
            Ok(out)
        }
        Command::Solve => {
            let cfg = inv.run_config()?;
            let mut out = Outcome::default();
            spectral_stage(&cfg, &mut out)?;
            Ok(out)
        }
        Command::Simulate => {
            let cfg = inv.run_config()?;
            let mut out = Outcome::default();
            let es = if cfg.method == MethodChoice::Both { Some(spectral_stage(&cfg, &mut out)?.0) } else { None };
            mc_stage(&cfg, es.as_ref(), &mut out)?;
            Ok(out)
        }
        Command::Verify => {
            let cfg = inv.run_config()?;
            let mut out = Outcome::default();
            let spec = cfg.spec()?;
            let (es, field) = solve_instance(&cfg, &spec)?;
            checks_stage(&cfg, &es, &field, &mut out)?;
            Ok(out)
        }
        Command::Invert => {
            let cfg = inv.run_config()?;
            let mut out = Outcome::default();
            invert_stage(&cfg, inv, &mut out)?;
            Ok(out)
        }
    }
}

fn solve_instance(cfg: &RunConfig, spec: &ProblemSpec) -> Result<(EigenSystem, SolutionField)> {
    let op = build_operator(spec.domain, spec.psi, &spec.potential, cfg.problem.operator)?;
    let es = eigensystem(&op, cfg.problem.n_modes())?;
    let field = solve(spec, &es, &cfg.time_grid())?;
    Ok((es, field))
}

fn spectral_stage(cfg: &RunConfig, out: &mut Outcome) -> Result<(EigenSystem, SolutionField)> {
    let spec = cfg.spec()?;
    let (es, field) = solve_instance(cfg, &spec)?;
    if cfg.outputs.field_csv {
        out.put("solution.csv", field.to_csv());
        if cfg.outputs.plot_script {
            out.put("plot_solution.py", PLOT_SCRIPT.to_string());
        }
    }
    if cfg.outputs.eigensystem {
        out.put("eigensystem.csv", es.to_csv());
    }
    let summary = field.summary(&es);
    out.summary.push(format!(
        "spectral: {} modes, lambda1 = {:.8}, max |phi| = {:.6e}",
        es.n_modes(),
        summary.lambda1,
        summary.max_value.abs().max(summary.min_value.abs())
    ));
    out.json("summary.json", &summary)?;
    Ok((es, field))
}

/// Spectral value at an arbitrary `(t, x)` with the run's cell width.
fn spectral_at(cfg: &RunConfig, spec: &ProblemSpec, es: &EigenSystem, t: f64, x: f64) -> Result<f64> {
    let dt = cfg.problem.horizon / (cfg.problem.steps * cfg.problem.refine) as f64;
    let cells = ((t / dt).ceil() as usize).max(1);
    let c = coefficients_at(spec, es, t, cells)?;
    Ok(c.iter().zip(es.modes_at(x)).map(|(c, p)| c * p).sum())
}

#[derive(Serialize)]
struct McDiagnostics<'a> {
    n_paths: usize,
    h: f64,
    master_seed: u64,
    common_random_numbers: bool,
    w_nodes: usize,
    s_nodes: usize,
    time_change_mass: Option<f64>,
    partial: bool,
    estimates: &'a [McEstimate],
}

fn mc_stage(cfg: &RunConfig, es: Option<&EigenSystem>, out: &mut Outcome) -> Result<()> {
    let section = cfg.mc.as_ref().ok_or_else(|| Error::Config("Monte Carlo needs an [mc] section".into()))?;
    let mc = section.mc_config();
    let spec = cfg.spec()?;
    let probes: Vec<(f64, f64)> = section.probes.iter().map(|p| (p[0], p[1])).collect();
    let est = estimate_solution_mc(&spec, &probes, &mc)?;
    let partial = est.iter().any(|e| e.partial());
    let mass = if spec.source.is_zero() || spec.alpha == 1.0 { None } else { Some(time_change_rule(spec.alpha, mc.w_nodes)?.mass) };
    out.json(
        "mc_diagnostics.json",
        &McDiagnostics {
            n_paths: mc.n_paths,
            h: mc.h,
            master_seed: mc.master_seed,
            common_random_numbers: mc.common_random_numbers,
            w_nodes: mc.w_nodes,
            s_nodes: mc.s_nodes,
            time_change_mass: mass,
            partial,
            estimates: &est,
        },
    )?;
    match es {
        Some(es) => {
            let mut s = String::from("t,x,spectral,estimate,stderr,n_paths,h,seed\n");
            for e in &est {
                let v = spectral_at(cfg, &spec, es, e.t, e.x)?;
                let _ = writeln!(s, "{:e},{:e},{:e},{:e},{:e},{},{:e},{}", e.t, e.x, v, e.estimate, e.stderr, e.n_paths, e.h, e.seed);
                out.summary.push(format!("(t={}, x={}): spectral {v:.6} | mc {:.6} +- {:.6}", e.t, e.x, e.estimate, e.stderr));
            }
            out.put("comparison.csv", s);
        }
        None => {
            for e in &est {
                out.summary.push(format!("(t={}, x={}): mc {:.6} +- {:.6}", e.t, e.x, e.estimate, e.stderr));
            }
            out.put("mc.csv", estimates_to_csv(&est));
        }
    }
    if partial {
        out.summary.push("warning: step budget exhausted on some paths; estimates are partial".into());
    }
    Ok(())
}

fn perturbation(domain: &Domain1D) -> Result<Vec<f64>> {
    Profile::Parabola { scale: 1.0 }.sample(domain)
}

fn check_reports(cfg: &RunConfig, es: &EigenSystem, field: &SolutionField) -> Result<Vec<PrincipleReport>> {
    let spec = cfg.spec()?;
    let d = spec.domain;
    let mut reports = Vec::new();
    for (k, c) in cfg.checks.iter().enumerate() {
        let tag = format!("check{k}");
        let r = match c {
            CheckSpec::Positivity { strict, t_min, tol } => {
                check_positivity(field, &tag, PositivityOptions { strict: *strict, t_min: *t_min, tol: *tol })?
            }
            CheckSpec::Decay { max_over_median } => check_decay(field, es, &tag, *max_over_median)?,
            CheckSpec::Abp { p, cap, tol } => check_abp(&spec, field, &tag, AbpOptions { p: *p, dim: 1, cap: *cap, tol: *tol })?,
            CheckSpec::Comparison { mode, shift, tol } => {
                let (s1, s2) = match mode {
                    crate::config::ComparisonModeName::Data => {
                        (spec.clone(), spec.with_phi0(spec.phi0.iter().map(|v| v - shift).collect()))
                    }
                    crate::config::ComparisonModeName::Potential => {
                        (spec.with_potential(spec.potential.iter().map(|v| v + shift).collect()), spec.clone())
                    }
                };
                let (_, f1) = solve_instance(cfg, &s1)?;
                let (_, f2) = solve_instance(cfg, &s2)?;
                check_comparison(&s1, &s2, &f1, &f2, (*mode).into(), *tol)?
            }
            CheckSpec::Stability { channel, eps, cap } => {
                let bump = perturbation(&d)?;
                let s2 = match channel {
                    StabilityChannel::Potential => spec.with_potential(spec.potential.iter().map(|v| v + eps).collect()),
                    StabilityChannel::InitialDatum => {
                        spec.with_phi0(spec.phi0.iter().zip(&bump).map(|(v, b)| v + eps * b).collect())
                    }
                    StabilityChannel::Source => spec.with_source(perturbed_source(&spec.source, &bump, *eps)),
                };
                let (_, f2) = solve_instance(cfg, &s2)?;
                check_stability(&spec, &s2, field, &f2, *cap)?
            }
        };
        reports.push(PrincipleReport { instance: tag, ..r });
    }
    Ok(reports)
}

/// `F + ε ρ₁ ρ̃` for a separable `F`, `F + ε ρ̃` otherwise.
pub fn perturbed_source(source: &Source, bump: &[f64], eps: f64) -> Source {
    match source {
        Source::Separable { rho1, rho2 } => {
            Source::Separable { rho1: rho1.clone(), rho2: rho2.iter().zip(bump).map(|(r, b)| r + eps * b).collect() }
        }
        Source::Zero => Source::Separable { rho1: TimeFunction::Constant { value: 1.0 }, rho2: bump.iter().map(|b| eps * b).collect() },
        Source::Table { times, values } => Source::Table {
            times: times.clone(),
            values: values.iter().map(|row| row.iter().zip(bump).map(|(v, b)| v + eps * b).collect()).collect(),
        },
    }
}

fn checks_stage(cfg: &RunConfig, es: &EigenSystem, field: &SolutionField, out: &mut Outcome) -> Result<()> {
    let reports = check_reports(cfg, es, field)?;
    for r in &reports {
        out.summary.push(format!("{} [{}]: {}", r.id, r.instance, if r.pass { "pass" } else { "FAIL" }));
    }
    out.json("reports.json", &reports)?;
    let verdict = aggregate(reports);
    if !verdict.pass {
        out.exit_code = 1;
    }
    #[derive(Serialize)]
    struct VerdictFile<'a> {
        pass: bool,
        passed: usize,
        failed: &'a [String],
    }
    out.json("verdict.json", &VerdictFile { pass: verdict.pass, passed: verdict.passed, failed: &verdict.failed })
}

#[derive(Serialize)]
struct InversionSummary {
    x0: f64,
    steps: usize,
    method: crate::inverse::RegMethod,
    strength: f64,
    residual: f64,
    condition_estimate: f64,
    kernel_integral: f64,
    noise: Option<crate::inverse::NoiseDescriptor>,
    relative_error: Option<f64>,
    path: Vec<crate::inverse::LCurvePoint>,
}

fn invert_stage(cfg: &RunConfig, inv: &Invocation, out: &mut Outcome) -> Result<()> {
    let section = cfg.inverse.as_ref().ok_or_else(|| Error::Config("invert needs an [inverse] section".into()))?;
    let spec = cfg.spec()?;
    let op = build_operator(spec.domain, spec.psi, &spec.potential, cfg.problem.operator)?;
    let es = eigensystem(&op, cfg.problem.n_modes())?;
    let rho2 = section.rho2.sample(&spec.domain)?;
    let kernel = chi_kernel(&es, spec.alpha, &rho2, section.x0, spec.horizon, section.steps)?;
    let obs = match (&section.synthesize, &section.trace) {
        (Some(syn), _) => {
            let samples: Vec<f64> = (0..=section.steps).map(|j| syn.rho1.eval(j as f64 * kernel.dt)).collect();
            let clean = forward_observation(&kernel, &samples)?;
            if syn.noise > 0.0 { clean.with_noise(syn.noise, syn.seed)? } else { clean }
        }
        (None, Some(path)) => {
            let body = inv.inputs.get(path).ok_or_else(|| Error::Config(format!("trace input `{path}` not provided")))?;
            ObservationTrace::from_csv(body, section.x0).map_err(|e| Error::Config(e.to_string()))?
        }
        (None, None) => return Err(Error::Config("[inverse] needs a trace or a synthesize block".into())),
    };
    let rec = recover_rho1(&obs, &kernel, section.regularization)?;
    let relative_error = section.truth.as_ref().map(|t| rec.relative_error(|s| t.eval(s)));
    let mut k_csv = String::from("t,chi\n");
    for (t, v) in kernel.times.iter().zip(&kernel.values) {
        let _ = writeln!(k_csv, "{t:e},{v:e}");
    }
    out.put("kernel.csv", k_csv);
    out.put("observation.csv", obs.to_csv());
    out.put("reconstruction.csv", rec.to_csv());
    out.summary.push(format!(
        "inversion: residual {:.3e}, strength {:.3e}{}",
        rec.residual,
        rec.strength,
        relative_error.map(|e| format!(", relative L2 error {e:.4}")).unwrap_or_default()
    ));
    out.json(
        "inversion.json",
        &InversionSummary {
            x0: section.x0,
            steps: section.steps,
            method: rec.method,
            strength: rec.strength,
            residual: rec.residual,
            condition_estimate: rec.condition_estimate,
            kernel_integral: kernel.integral(),
            noise: obs.noise.clone(),
            relative_error,
            path: rec.path,
        },
    )
}

fn eigen_command(args: &EigenArgs) -> Result<Outcome> {
    let d = Domain1D::new(args.a, args.b, args.n_grid).map_err(|e| Error::Usage(e.to_string()))?;
    if args.modes == 0 || args.modes > args.n_grid {
        return Err(Error::Usage(format!("--modes must lie in 1..={}", args.n_grid)));
    }
    let op = build_operator(d, args.psi, &vec![0.0; args.n_grid], args.operator)?;
    let es = eigensystem(&op, args.modes)?;
    let mut out = Outcome::default();
    let len = args.b - args.a;
    let classical = args.psi.kind == crate::bernstein::BernsteinKind::ClassicalLaplacian;
    for (k, l) in es.lambdas.iter().enumerate() {
        let n = (k + 1) as f64;
        if classical {
            let exact = (n * std::f64::consts::PI / len).powi(2);
            out.summary.push(format!("{:>3} {l:.10} {exact:.10} {:+.3e}", k + 1, (l - exact) / exact));
        } else {
            out.summary.push(format!("{:>3} {l:.10}", k + 1));
        }
    }
    out.put("eigensystem.csv", es.to_csv());
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub invocation: Invocation,
    pub exit_code: i32,
    /// SHA-256 of each artifact.
    pub artifacts: BTreeMap<String, String>,
}

fn digest(body: &str) -> String {
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl Manifest {
    pub fn new(inv: &Invocation, out: &Outcome) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            invocation: inv.clone(),
            exit_code: out.exit_code,
            artifacts: out.artifacts.iter().map(|(k, v)| (k.clone(), digest(v))).collect(),
        }
    }
}

/// Writes every artifact and the manifest into `dir`.
pub fn write_outcome(dir: &Path, inv: &Invocation, out: &Outcome) -> Result<Manifest> {
    fs::create_dir_all(dir)?;
    for (name, body) in &out.artifacts {
        fs::write(dir.join(name), body)?;
    }
    let m = Manifest::new(inv, out);
    let mut text = serde_json::to_string_pretty(&m)?;
    text.push('\n');
    fs::write(dir.join(MANIFEST_NAME), text)?;
    Ok(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub identical: bool,
    pub mismatched: Vec<String>,
    pub exit_code_matches: bool,
}

/// Re-executes the manifest's invocation into `dir` and compares digests.
pub fn replay(manifest_path: &Path, dir: &Path) -> Result<ReplayReport> {
    let text = fs::read_to_string(manifest_path)?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad manifest: {e}")))?;
    let out = execute(&m.invocation)?;
    let fresh = write_outcome(dir, &m.invocation, &out)?;
    let mut mismatched: Vec<String> = m
        .artifacts
        .iter()
        .filter(|(k, v)| fresh.artifacts.get(*k) != Some(*v))
        .map(|(k, _)| k.clone())
        .collect();
    mismatched.extend(fresh.artifacts.keys().filter(|k| !m.artifacts.contains_key(*k)).cloned());
    let exit_code_matches = fresh.exit_code == m.exit_code;
    Ok(ReplayReport { identical: mismatched.is_empty() && exit_code_matches, mismatched, exit_code_matches })
}

const PLOT_SCRIPT: &str = r#"# Renders solution.csv (columns t,x,value) as time slices and a heat map.
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

src = sys.argv[1] if len(sys.argv) > 1 else "solution.csv"
rows = defaultdict(list)
with open(src) as fh:
    for r in csv.DictReader(fh):
        rows[float(r["t"])].append((float(r["x"]), float(r["value"])))
times = sorted(rows)
fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4))
for t in times[:: max(1, len(times) // 8)]:
    xs, vs = zip(*sorted(rows[t]))
    ax0.plot(xs, vs, label=f"t={t:.3g}")
ax0.set_xlabel("x")
ax0.set_ylabel("phi")
ax0.legend(fontsize=7)
grid = [[v for _, v in sorted(rows[t])] for t in times]
xs = [x for x, _ in sorted(rows[times[0]])]
im = ax1.imshow(grid, aspect="auto", origin="lower", extent=[xs[0], xs[-1], times[0], times[-1]])
ax1.set_xlabel("x")
ax1.set_ylabel("t")
fig.colorbar(im, ax=ax1)
fig.tight_layout()
fig.savefig(src.rsplit(".", 1)[0] + ".png", dpi=120)
"#;
