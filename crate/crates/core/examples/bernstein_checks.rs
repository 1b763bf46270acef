//! Structural checks on a few Bernstein functions.

use fraccauchy::bernstein::{check_complete_monotonicity, check_hartman_wintner, BernsteinFunction};

fn main() -> fraccauchy::Result<()> {
    let grid: Vec<f64> = (0..=60).map(|k| 10f64.powf(-3.0 + k as f64 * 0.1)).collect();
    let cases = [
        ("fractional nu=1", BernsteinFunction::fractional(1.0)?),
        ("relativistic nu=1 m=1", BernsteinFunction::relativistic(1.0, 1.0)?),
        ("sum of fractional 0.5+1.5", BernsteinFunction::sum_of_fractional(0.5, 1.5)?),
        ("log damped", BernsteinFunction::log_damped(1.0, 0.5)?),
    ];
    for (name, psi) in cases {
        let cm = check_complete_monotonicity(&psi, &grid, 4)?;
        let hw = check_hartman_wintner(&psi, 1e8)?;
        println!(
            "{name:<28} psi(1)={:.4}  sign pattern ok: {}  Psi(u^2)/log u growth {:.2e}",
            psi.eval(1.0)?,
            cm.passed(),
            hw.growth_factor
        );
    }
    Ok(())
}
