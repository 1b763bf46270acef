//! Mittag-Leffler values, the one-sided stable density and its inverse.

use fraccauchy::special::{inverse_subordinator_density, mittag_leffler, stable_density};

fn main() -> fraccauchy::Result<()> {
    println!("{:>8} {:>14} {:>14} {:>14}", "z", "E_0.5,1(z)", "E_0.9,1(z)", "e^z");
    for z in [-50.0, -10.0, -1.0, 0.0, 1.0, 3.0] {
        println!("{z:>8} {:>14.8e} {:>14.8e} {:>14.8e}", mittag_leffler(0.5, 1.0, z)?, mittag_leffler(0.9, 1.0, z)?, f64::exp(z));
    }
    println!();
    println!("{:>8} {:>14} {:>14}", "x", "g_0.5(x)", "eta_1 density");
    for x in [0.05, 0.2, 1.0, 5.0, 50.0] {
        println!("{x:>8} {:>14.8e} {:>14.8e}", stable_density(0.5, x)?, inverse_subordinator_density(0.5, 1.0, x)?);
    }
    Ok(())
}
