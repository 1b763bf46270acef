//! How the empirical ABP constant moves with the domain size.
//!
//! For each half-width the largest `Ĉ` over a random family is printed next
//! to `Ĉ · Ψ(diam⁻²)`; a flat second column means `Ĉ ∝ 1/Ψ(diam⁻²)`.

use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::principles::{check_abp, random_profile, random_separable_source, AbpOptions};
use fraccauchy::solver::{solve, ProblemSpec, TimeGrid};
use fraccauchy::spatial::{build_operator, eigensystem, Domain1D, OperatorMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn main() -> fraccauchy::Result<()> {
    let n = 100;
    let psi = BernsteinFunction::fractional(1.0)?;
    let opts = AbpOptions { p: 4.0, dim: 1, cap: 1e6, tol: 1e-9 };
    println!("{:>6} {:>12} {:>18}", "L", "max C_hat", "C_hat*Psi(diam^-2)");
    for half in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let d = Domain1D::new(-half, half, n)?;
        let es = eigensystem(&build_operator(d, psi, &vec![0.0; n], OperatorMode::RestrictedJumpKernel)?, n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let specs: Vec<ProblemSpec> = (0..40)
            .map(|_| ProblemSpec {
                domain: d,
                psi,
                potential: vec![0.0; n],
                phi0: random_profile(&d, false, &mut rng),
                source: random_separable_source(&d, 1.0, &mut rng),
                alpha: 0.5,
                horizon: 1.0,
            })
            .collect();
        let c_hat = specs
            .par_iter()
            .map(|s| {
                let f = solve(s, &es, &TimeGrid::uniform(1.0, 50))?;
                Ok(check_abp(s, &f, "study", opts)?.metrics["c_hat"])
            })
            .collect::<fraccauchy::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let scale = psi.eval(d.diameter().powi(-2))?;
        println!("{half:>6} {c_hat:>12.4e} {:>18.4e}", c_hat * scale);
    }
    Ok(())
}
