//! Positivity, ABP and decay checks on a random instance.

use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::principles::{
    aggregate, check_abp, check_decay, check_positivity, random_profile, random_separable_source, AbpOptions,
    PositivityOptions,
};
use fraccauchy::solver::{solve, ProblemSpec, Source, TimeGrid};
use fraccauchy::spatial::{build_operator, eigensystem, Domain1D, OperatorMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fraccauchy::Result<()> {
    let n = 120;
    let d = Domain1D::new(-1.0, 1.0, n)?;
    let psi = BernsteinFunction::fractional(1.0)?;
    let es = eigensystem(&build_operator(d, psi, &vec![0.0; n], OperatorMode::RestrictedJumpKernel)?, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let phi0 = random_profile(&d, true, &mut rng);
    let forced = ProblemSpec {
        domain: d,
        psi,
        potential: vec![0.0; n],
        phi0,
        source: random_separable_source(&d, 1.0, &mut rng),
        alpha: 0.5,
        horizon: 1.0,
    };
    let free = forced.with_source(Source::Zero);
    let grid = TimeGrid::uniform(1.0, 100);
    let (ff, fz) = (solve(&forced, &es, &grid)?, solve(&free, &es, &grid)?);

    let reports = vec![
        check_positivity(&ff, "forced", PositivityOptions::default())?,
        check_abp(&forced, &ff, "forced", AbpOptions { p: 4.0, dim: 1, cap: 100.0, tol: 1e-9 })?,
        check_decay(&fz, &es, "free", 10.0)?,
    ];
    for r in &reports {
        println!("{:<11} {:<7} pass={}  {:?}", r.id, r.instance, r.pass, r.metrics);
    }
    println!("all passed: {}", aggregate(reports).pass);
    Ok(())
}
