//! Recovering the time profile of a separable source from one sensor.

use std::f64::consts::PI;

use fraccauchy::bernstein::BernsteinFunction;
use fraccauchy::inverse::{chi_kernel, forward_observation, recover_rho1, Regularization};
use fraccauchy::spatial::{build_operator, eigensystem, Domain1D, OperatorMode};

fn main() -> fraccauchy::Result<()> {
    let n = 100;
    let d = Domain1D::new(-1.0, 1.0, n)?;
    let es = eigensystem(&build_operator(d, BernsteinFunction::fractional(1.0)?, &vec![0.0; n], OperatorMode::RestrictedJumpKernel)?, n)?;
    let rho2: Vec<f64> = d.points().iter().map(|x| 1.0 - x * x).collect();
    let m = 256;
    let kernel = chi_kernel(&es, 0.5, &rho2, 0.3, 1.0, m)?;
    let truth = |t: f64| (PI * t).sin().powi(2);
    let samples: Vec<f64> = (0..=m).map(|j| truth(j as f64 / m as f64)).collect();
    let obs = forward_observation(&kernel, &samples)?;

    let clean = recover_rho1(&obs, &kernel, Regularization::none())?;
    println!("noise-free: relative error {:.2e}", clean.relative_error(truth));
    for level in [0.001, 0.01, 0.05] {
        let noisy = obs.with_noise(level, 1)?;
        let raw = recover_rho1(&noisy, &kernel, Regularization::none())?;
        let reg = recover_rho1(&noisy, &kernel, Regularization::tikhonov(None))?;
        println!(
            "noise {:>4.1}%: unregularized {:.3e}, Tikhonov {:.3e} (strength {:.2e})",
            100.0 * level,
            raw.relative_error(truth),
            reg.relative_error(truth),
            reg.strength
        );
    }
    Ok(())
}
