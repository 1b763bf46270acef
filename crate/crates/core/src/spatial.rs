//! Discretizations of `Ψ(-Δ) + V` on an interval with zero exterior data, and
//! their eigensystems.
//!
//! Grid functions live on the interior nodes `x_i = a + i h`, `i = 1..=n`.
//! The inner product is `⟨u, v⟩ = h Σ u_i v_i`, so eigenvectors approximate
//! continuum-normalized eigenfunctions.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bernstein::{BernsteinFunction, BernsteinKind};
use crate::error::{Error, Result};
use crate::special::gamma::{gamma, rgamma};

pub const FIXTURE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain1D {
    pub a: f64,
    pub b: f64,
    pub n_grid: usize,
    /// Exterior-cone regularity marker; always true for intervals.
    #[serde(default = "yes")]
    pub regularity_flag: bool,
}

fn yes() -> bool {
    true
}

impl Domain1D {
    pub fn new(a: f64, b: f64, n_grid: usize) -> Result<Self> {
        let d = Domain1D { a, b, n_grid, regularity_flag: true };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.b) || !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::Parameter(format!("interval needs a < b, got ({}, {})", self.a, self.b)));
        }
        if self.n_grid < 8 {
            return Err(Error::Parameter(format!("n_grid must be at least 8, got {}", self.n_grid)));
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / (self.n_grid + 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.h();
        (1..=self.n_grid).map(|i| self.a + i as f64 * h).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.a && x < self.b
    }

    /// Index of the interior node nearest to `x`.
    pub fn nearest_index(&self, x: f64) -> Result<usize> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("point {x} is not inside ({}, {})", self.a, self.b)));
        }
        let i = ((x - self.a) / self.h()).round() as isize;
        Ok((i.clamp(1, self.n_grid as isize) - 1) as usize)
    }

    /// Piecewise-linear interpolation of a grid function, zero at both ends.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        if !self.contains(x) {
            return 0.0;
        }
        let s = (x - self.a) / self.h();
        let j = s.floor() as usize;
        let f = s - j as f64;
        let at = |k: usize| if k == 0 || k > self.n_grid { 0.0 } else { values[k - 1] };
        (1.0 - f) * at(j) + f * at(j + 1)
    }

    pub fn diameter(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorMode {
    /// Singular-integral discretization of the killed jump generator.
    RestrictedJumpKernel,
    /// `Ψ` applied to the 3-point Dirichlet Laplacian.
    SpectralOfDirichletLaplacian,
}

impl OperatorMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorMode::RestrictedJumpKernel => "restricted_jump_kernel",
            OperatorMode::SpectralOfDirichletLaplacian => "spectral_of_dirichlet_laplacian",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub mode: OperatorMode,
    pub domain: Domain1D,
    pub psi: BernsteinFunction,
    pub potential: Vec<f64>,
    /// Operator without the potential.
    base: DMatrix<f64>,
    /// Analytic eigenpairs of `base`, when available.
    base_eigen: Option<(Vec<f64>, DMatrix<f64>)>,
}

/// Eigenvalues of the 3-point Dirichlet Laplacian, ascending.
pub fn dirichlet_laplacian_eigenvalues(domain: &Domain1D) -> Vec<f64> {
    let n = domain.n_grid;
    let h = domain.h();
    (1..=n).map(|k| 4.0 / (h * h) * (k as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2)).collect()
}

/// Euclidean-orthonormal sine eigenvectors of the 3-point Laplacian.
fn dirichlet_laplacian_vectors(n: usize) -> DMatrix<f64> {
    let c = (2.0 / (n + 1) as f64).sqrt();
    DMatrix::from_fn(n, n, |i, k| c * (((i + 1) * (k + 1)) as f64 * PI / (n + 1) as f64).sin())
}

/// Normalizing constant of `(-Δ)^s` in one dimension: `4^s Γ(1/2+s) / (√π |Γ(-s)|)`.
pub fn fractional_laplacian_constant(s: f64) -> f64 {
    4f64.powf(s) * gamma(0.5 + s) * rgamma(-s).abs() / PI.sqrt()
}

/// Coefficients `A_k`, `k = 1..=K`, in units of `h = 1`, such that
/// `(-Δ)^s u(x_i) ≈ C h^{-2s} Σ_k A_k (2u_i - u_{i+k} - u_{i-k})`.
///
/// `[0, h]` uses the quadratic behaviour of the second difference; beyond it
/// the second difference is interpolated linearly between nodes, and past
/// `K h` it is the constant `2 u_i`.
pub fn jump_kernel_weights(s: f64, k_max: usize) -> Vec<f64> {
    let mut a = vec![0.0; k_max + 1];
    a[1] += 1.0 / (2.0 - 2.0 * s);
    let p = 1.0 - 2.0 * s;
    for k in 1..k_max {
        let (zl, zr) = (k as f64, (k + 1) as f64);
        let i0 = (zl.powf(-2.0 * s) - zr.powf(-2.0 * s)) / (2.0 * s);
        let r = (zr / zl).ln();
        // ∫ z^{-2s}, continuous through s = 1/2
        let i1 = if p == 0.0 { r } else { zl.powf(p) * (p * r).exp_m1() / p };
        a[k] += zr * i0 - i1;
        a[k + 1] += i1 - zl * i0;
    }
    a[k_max] += (k_max as f64).powf(-2.0 * s) / (2.0 * s);
    a
}

fn restricted_jump_matrix(domain: &Domain1D, nu: f64) -> DMatrix<f64> {
    let n = domain.n_grid;
    let h = domain.h();
    if nu == 2.0 {
        // local limit: -u''
        let c = 1.0 / (h * h);
        return DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0 * c,
            1 => -c,
            _ => 0.0,
        });
    }
    let s = nu / 2.0;
    let k_max = n + 1;
    let a = jump_kernel_weights(s, k_max);
    let scale = fractional_laplacian_constant(s) * h.powf(-2.0 * s);
    let diag = 2.0 * scale * a[1..].iter().sum::<f64>();
    DMatrix::from_fn(n, n, |i, j| {
        let k = i.abs_diff(j);
        if k == 0 {
            diag
        } else {
            -scale * a[k]
        }
    })
}

fn check_potential(domain: &Domain1D, v: &[f64]) -> Result<()> {
    if v.len() != domain.n_grid {
        return Err(Error::Parameter(format!("potential has {} values for {} grid points", v.len(), domain.n_grid)));
    }
    if let Some((i, x)) = v.iter().enumerate().find(|(_, x)| !(**x >= 0.0) || !x.is_finite()) {
        return Err(Error::Parameter(format!("potential must be finite and nonnegative, V[{i}] = {x}")));
    }
    Ok(())
}

/// Assembles `Ψ(-Δ) + V` in the requested mode.
pub fn build_operator(domain: Domain1D, psi: BernsteinFunction, v: &[f64], mode: OperatorMode) -> Result<DiscreteOperator> {
    domain.validate()?;
    check_potential(&domain, v)?;
    let (base, base_eigen) = match mode {
        OperatorMode::SpectralOfDirichletLaplacian => {
            let lap = dirichlet_laplacian_eigenvalues(&domain);
            let u = dirichlet_laplacian_vectors(domain.n_grid);
            let lam: Vec<f64> = lap.iter().map(|&l| psi.eval(l)).collect::<Result<_>>()?;
            let scaled = DMatrix::from_fn(u.nrows(), u.ncols(), |i, k| u[(i, k)] * lam[k]);
            let mut m = &scaled * u.transpose();
            symmetrize(&mut m);
            (m, Some((lam, u)))
        }
        OperatorMode::RestrictedJumpKernel => {
            let nu = match psi.kind {
                BernsteinKind::Fractional { nu } => nu,
                BernsteinKind::ClassicalLaplacian => 2.0,
                other => {
                    return Err(Error::UnsupportedMode(format!(
                        "restricted_jump_kernel needs a fractional Bernstein function, got {other:?}"
                    )))
                }
            };
            (restricted_jump_matrix(&domain, nu), None)
        }
    };
    Ok(DiscreteOperator { mode, domain, psi, potential: v.to_vec(), base, base_eigen })
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

impl DiscreteOperator {
    /// Full matrix `base + diag(V)`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = self.base.clone();
        for (i, v) in self.potential.iter().enumerate() {
            m[(i, i)] += v;
        }
        m
    }

    pub fn potential_sup(&self) -> f64 {
        self.potential.iter().fold(0.0, |m, v| m.max(*v))
    }

    fn constant_potential(&self) -> Option<f64> {
        let c = self.potential[0];
        self.potential.iter().all(|&v| v == c).then_some(c)
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let x = DVector::from_column_slice(u);
        let y = self.matrix() * x;
        y.iter().copied().collect()
    }
}

/// Lowest eigenpairs with eigenvectors orthonormal in the `h`-weighted product.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EigenSystem {
    pub version: u32,
    pub mode: OperatorMode,
    pub domain: Domain1D,
    pub psi: BernsteinFunction,
    pub potential_sup: f64,
    pub lambdas: Vec<f64>,
    /// `n_grid × n_modes`, column `k` is `φ_{k+1}` on the interior nodes.
    #[serde(with = "matrix_rows")]
    pub eigvecs: DMatrix<f64>,
}

mod matrix_rows {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        let cols: Vec<Vec<f64>> = m.column_iter().map(|c| c.iter().copied().collect()).collect();
        cols.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        let cols: Vec<Vec<f64>> = Vec::deserialize(d)?;
        let n = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != n) {
            return Err(serde::de::Error::custom("ragged eigenvector columns"));
        }
        Ok(DMatrix::from_fn(n, cols.len(), |i, k| cols[k][i]))
    }
}

/// Lowest `n_modes` eigenpairs of `op`, ascending.
pub fn eigensystem(op: &DiscreteOperator, n_modes: usize) -> Result<EigenSystem> {
    let n = op.domain.n_grid;
    if n_modes == 0 || n_modes > n {
        return Err(Error::Parameter(format!("n_modes must be in 1..={n}, got {n_modes}")));
    }
    // a constant potential only shifts the spectrum; keep the shift exact
    let (shift, full) = match op.constant_potential() {
        Some(c) => (c, None),
        None => (0.0, Some(op.matrix())),
    };
    let (vals, vecs) = match (&full, &op.base_eigen) {
        (None, Some((lam, u))) => (lam.clone(), u.clone()),
        _ => {
            let m = full.unwrap_or_else(|| op.base.clone());
            let norm = m.amax();
            let eig = m.clone().try_symmetric_eigen(1e-15, 100 * n).ok_or_else(|| {
                Error::Numeric(format!("symmetric eigensolver did not converge (n = {n}, max |entry| = {norm:e})"))
            })?;
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]).then(i.cmp(&j)));
    let scale = 1.0 / op.domain.h().sqrt();
    let mut eigvecs = DMatrix::zeros(n, n_modes);
    let mut lambdas = Vec::with_capacity(n_modes);
    for (k, &j) in order.iter().take(n_modes).enumerate() {
        lambdas.push(vals[j] + shift);
        let col = vecs.column(j);
        let peak = col.amax();
        let first = col.iter().find(|v| v.abs() > 1e-8 * peak).copied().unwrap_or(1.0);
        let sign = if first < 0.0 { -scale } else { scale };
        for i in 0..n {
            eigvecs[(i, k)] = sign * col[i];
        }
    }
    Ok(EigenSystem {
        version: FIXTURE_VERSION,
        mode: op.mode,
        domain: op.domain,
        psi: op.psi,
        potential_sup: op.potential_sup(),
        lambdas,
        eigvecs,
    })
}

impl EigenSystem {
    pub fn n_modes(&self) -> usize {
        self.lambdas.len()
    }

    pub fn h(&self) -> f64 {
        self.domain.h()
    }

    /// `⟨φ_n, ψ⟩` for every computed mode.
    pub fn coefficients(&self, psi: &[f64]) -> Vec<f64> {
        let h = self.h();
        self.eigvecs.column_iter().map(|c| h * c.iter().zip(psi).map(|(a, b)| a * b).sum::<f64>()).collect()
    }

    /// `Σ_n c_n φ_n` on the grid.
    pub fn synthesize(&self, coefs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.domain.n_grid];
        for (k, &c) in coefs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.eigvecs.column(k).iter()) {
                *o += c * v;
            }
        }
        out
    }

    /// Orthogonal projection onto the computed modes.
    pub fn project(&self, psi: &[f64]) -> Vec<f64> {
        self.synthesize(&self.coefficients(psi))
    }

    pub fn mode(&self, k: usize) -> Vec<f64> {
        self.eigvecs.column(k).iter().copied().collect()
    }

    /// `φ_n(x)` for all modes, by linear interpolation between nodes.
    pub fn modes_at(&self, x: f64) -> Vec<f64> {
        (0..self.n_modes()).map(|k| self.domain.interpolate(self.eigvecs.column(k).as_slice(), x)).collect()
    }

    /// `max |G - I|` for the `h`-weighted Gram matrix.
    pub fn gram_error(&self) -> f64 {
        let g = self.eigvecs.transpose() * &self.eigvecs * self.h();
        let mut e = 0.0f64;
        for i in 0..g.nrows() {
            for j in 0..g.ncols() {
                let want = if i == j { 1.0 } else { 0.0 };
                e = e.max((g[(i, j)] - want).abs());
            }
        }
        e
    }

    /// `λ_n / Ψ(λ_{n,Lap})` for the computed modes.
    pub fn laplacian_comparison_ratios(&self) -> Vec<f64> {
        let lap = dirichlet_laplacian_eigenvalues(&self.domain);
        self.lambdas.iter().zip(lap).map(|(l, m)| l / self.psi.eval_unchecked(m)).collect()
    }

    /// `Σ_{n>N} ⟨φ_n, ψ⟩²` estimated as `‖ψ‖² - Σ_{n≤N} ⟨φ_n, ψ⟩²`.
    pub fn truncation_tail(&self, psi: &[f64]) -> f64 {
        let total = l2_norm(psi, self.h()).powi(2);
        let kept: f64 = self.coefficients(psi).iter().map(|c| c * c).sum();
        (total - kept).max(0.0)
    }

    /// Versioned CSV: a `#` metadata block, then one row per mode
    /// `k,lambda,phi(x_1),...,phi(x_n)`.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# fraccauchy eigensystem v{}", self.version);
        let _ = writeln!(s, "# mode={}", self.mode.as_str());
        let _ = writeln!(s, "# domain={}", serde_json::to_string(&self.domain).expect("plain struct"));
        let _ = writeln!(s, "# psi={}", serde_json::to_string(&self.psi).expect("plain struct"));
        let _ = writeln!(s, "# potential_sup={:e}", self.potential_sup);
        s.push_str("k,lambda");
        for x in self.domain.points() {
            let _ = write!(s, ",{x:e}");
        }
        s.push('\n');
        for (k, l) in self.lambdas.iter().enumerate() {
            let _ = write!(s, "{},{l:e}", k + 1);
            for v in self.eigvecs.column(k).iter() {
                let _ = write!(s, ",{v:e}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Serialization(format!("eigensystem fixture: {m}"));
        let mut lines = text.lines();
        let head = lines.next().ok_or_else(|| bad("empty"))?;
        let version: u32 = head
            .strip_prefix("# fraccauchy eigensystem v")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad("missing version header"))?;
        if version != FIXTURE_VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let mut meta = std::collections::HashMap::new();
        let mut header_seen = false;
        let mut lambdas = Vec::new();
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for line in lines {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv.split_once('=').ok_or_else(|| bad("malformed metadata"))?;
                meta.insert(k.to_string(), v.to_string());
            } else if !header_seen {
                header_seen = true;
            } else if !line.is_empty() {
                let mut it = line.split(',');
                it.next();
                let mut nums = it.map(|t| t.parse::<f64>().map_err(|_| bad("bad number")));
                lambdas.push(nums.next().ok_or_else(|| bad("short row"))??);
                cols.push(nums.collect::<Result<_>>()?);
            }
        }
        let get = |k: &str| meta.get(k).ok_or_else(|| bad(&format!("missing {k}")));
        let mode: OperatorMode = serde_json::from_str(&format!("\"{}\"", get("mode")?))?;
        let domain: Domain1D = serde_json::from_str(get("domain")?)?;
        let psi: BernsteinFunction = serde_json::from_str(get("psi")?)?;
        let potential_sup: f64 = get("potential_sup")?.parse().map_err(|_| bad("bad potential_sup"))?;
        if cols.iter().any(|c| c.len() != domain.n_grid) {
            return Err(bad("row length does not match n_grid"));
        }
        let eigvecs = DMatrix::from_fn(domain.n_grid, cols.len(), |i, k| cols[k][i]);
        Ok(EigenSystem { version, mode, domain, psi, potential_sup, lambdas, eigvecs })
    }
}

/// `(Σ_n λ_n^{2γ} ⟨φ_n, ψ⟩²)^{1/2}` over the computed modes.
pub fn fractional_norm(es: &EigenSystem, psi: &[f64], gamma: f64) -> f64 {
    es.coefficients(psi)
        .iter()
        .zip(&es.lambdas)
        .map(|(c, l)| l.powf(2.0 * gamma) * c * c)
        .sum::<f64>()
        .sqrt()
}

/// Discrete `L²` norm with the `h` weight.
pub fn l2_norm(u: &[f64], h: f64) -> f64 {
    (h * u.iter().map(|v| v * v).sum::<f64>()).sqrt()
}
