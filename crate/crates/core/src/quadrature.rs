//! Adaptive Gauss-Kronrod integration and product-integration helpers.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208643351308,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-300, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        QuadOptions { rel_tol, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub abs_err: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[10] * fc;
    let mut g = 0.0;
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive 21-point Gauss-Kronrod integration over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<Integral> {
    integrate_breaks(f, &[a, b], opts)
}

/// Adaptive integration over consecutive panels delimited by `points`.
///
/// Interior break points let callers seed the subdivision where the
/// integrand is known to have a narrow feature.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], opts: QuadOptions) -> Result<Integral> {
    if points.len() < 2 {
        return Ok(Integral { value: 0.0, abs_err: 0.0, evaluations: 0 });
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (v, e) = kronrod(&f, a, b);
        evals += 21;
        total += v;
        err += e;
        heap.push(Panel { a, b, value: v, err: e });
    }
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) {
        if !total.is_finite() {
            return Err(Error::eval("adaptive quadrature", "non-finite integrand"));
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::eval(
                "adaptive quadrature",
                format!("subdivision limit {} reached, value {total:e}, error {err:e}", opts.max_intervals),
            ));
        }
        let p = heap.pop().expect("heap is non-empty");
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            // interval exhausted at machine resolution; accept what we have
            heap.push(p);
            break;
        }
        let (v1, e1) = kronrod(&f, p.a, m);
        let (v2, e2) = kronrod(&f, m, p.b);
        evals += 42;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: m, value: v1, err: e1 });
        heap.push(Panel { a: m, b: p.b, value: v2, err: e2 });
    }
    // re-sum to shed drift from the incremental updates
    let (mut value, mut abs_err) = (0.0, 0.0);
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    for p in &panels {
        value += p.value;
        abs_err += p.err;
    }
    Ok(Integral { value, abs_err, evaluations: evals })
}

/// Integrates over `[a, ∞)` by mapping `x = a + u/(1-u)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, opts: QuadOptions) -> Result<Integral> {
    let g = |u: f64| {
        let one_m = 1.0 - u;
        let x = a + u / one_m;
        let v = f(x) / (one_m * one_m);
        if v.is_finite() { v } else { 0.0 }
    };
    integrate(g, 0.0, 1.0, opts)
}

/// Weights `(w_left, w_right)` of `∫_{τa}^{τb} τ^{p-1} ℓ(τ) dτ` where `ℓ` is
/// the linear interpolant equal to 1 at `τa` (resp. `τb`) and 0 at the
/// other end. Exact for every `p > 0` including the singular cell `τa = 0`.
pub fn power_weight_linear(p: f64, ta: f64, tb: f64) -> (f64, f64) {
    let h = tb - ta;
    // moments m0 = ∫ τ^{p-1}, m1 = ∫ τ^p
    let m0 = (tb.powf(p) - ta.powf(p)) / p;
    let m1 = (tb.powf(p + 1.0) - ta.powf(p + 1.0)) / (p + 1.0);
    let w_right = (m1 - ta * m0) / h;
    let w_left = (tb * m0 - m1) / h;
    (w_left, w_right)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}
