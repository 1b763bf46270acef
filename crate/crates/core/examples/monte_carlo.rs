//! Monte Carlo estimates of the solution next to the spectral values.

use std::f64::consts::PI;

use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::solver::{apply_s, ProblemSpec, Source};
use fraccauchy::spatial::{build_operator, eigensystem, Domain1D, OperatorMode};
use fraccauchy::stochastic::{estimate_solution_mc, McConfig};

fn main() -> fraccauchy::Result<()> {
    let n = 400;
    let d = Domain1D::new(-1.0, 1.0, n)?;
    let psi = BernsteinFunction::fractional(1.0)?;
    let phi0: Vec<f64> = d.points().iter().map(|x| (PI * x / 2.0).cos().powi(2)).collect();
    let spec = ProblemSpec { domain: d, psi, potential: vec![0.0; n], phi0: phi0.clone(), source: Source::Zero, alpha: 0.5, horizon: 1.0 };
    let es = eigensystem(&build_operator(d, psi, &spec.potential, OperatorMode::RestrictedJumpKernel)?, 100)?;

    let probes = [(0.1, 0.0), (0.5, 0.0), (1.0, 0.0), (0.5, 0.6)];
    for e in estimate_solution_mc(&spec, &probes, &McConfig::new(20_000, 1e-3, 7))? {
        let exact = d.interpolate(&apply_s(&es, 0.5, e.t, &phi0)?, e.x);
        println!("t={:.2} x={:+.2}  mc={:.4} ± {:.4}  spectral={:.4}", e.t, e.x, e.estimate, e.stderr, exact);
    }
    Ok(())
}
