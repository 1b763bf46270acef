//! Thin wrappers around libm's gamma routines.

/// Γ(x).
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// ln|Γ(x)| and the sign of Γ(x).
pub fn ln_gamma(x: f64) -> (f64, f64) {
    let (v, s) = libm::lgamma_r(x);
    (v, if s < 0 { -1.0 } else { 1.0 })
}

/// 1/Γ(x), entire: zero at the non-positive integers.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x < 170.0 {
        1.0 / libm::tgamma(x)
    } else {
        let (l, s) = ln_gamma(x);
        s * (-l).exp()
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}
