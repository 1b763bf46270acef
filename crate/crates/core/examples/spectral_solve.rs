//! Eigensystem of the killed jump operator and a spectral solve with a source.

use std::f64::consts::PI;

use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::solver::{solve, ProblemSpec, Source, TimeFunction, TimeGrid};
use fraccauchy::spatial::{build_operator, eigensystem, Domain1D, OperatorMode};

fn main() -> fraccauchy::Result<()> {
    let n = 200;
    let d = Domain1D::new(-1.0, 1.0, n)?;
    let psi = BernsteinFunction::fractional(1.0)?;
    let op = build_operator(d, psi, &vec![0.0; n], OperatorMode::RestrictedJumpKernel)?;
    let es = eigensystem(&op, 60)?;
    println!("lowest eigenvalues: {:.5?}", &es.lambdas[..5]);

    let x = d.points();
    let spec = ProblemSpec {
        domain: d,
        psi,
        potential: vec![0.0; n],
        phi0: x.iter().map(|x| (PI * x / 2.0).cos().powi(2)).collect(),
        source: Source::Separable { rho1: TimeFunction::SineSquared { period: 1.0 }, rho2: x.iter().map(|x| 1.0 - x * x).collect() },
        alpha: 0.5,
        horizon: 1.0,
    };
    let field = solve(&spec, &es, &TimeGrid::uniform(1.0, 100))?;
    for j in (0..=100).step_by(20) {
        let t = field.times[j];
        println!("t={t:.2}  u(t,0)={:.6}  |u(t)|_2={:.6}", field.value_at(t, 0.0, &d).unwrap_or(f64::NAN), field.l2_norms()[j]);
    }
    Ok(())
}
