//! Log-domain combinatorics and entropy helpers.

use statrs::function::gamma::ln_gamma;

/// `ln C(a, b)` for real arguments via log-gamma, `C(a, b) = Γ(a+1) / (Γ(b+1) Γ(a-b+1))`.
///
/// Arguments must keep all three gamma arguments positive.
pub fn ln_binomial(a: f64, b: f64) -> f64 {
    if b == 0.0 || b == a {
        return 0.0;
    }
    ln_gamma(a + 1.0) - ln_gamma(b + 1.0) - ln_gamma(a - b + 1.0)
}

pub fn log2_binomial(a: f64, b: f64) -> f64 {
    ln_binomial(a, b) / std::f64::consts::LN_2
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `(1+r) log2(1+r) - r log2 r`, the spherical rate functional. Zero at `r = 0`.
pub fn sphere_entropy(r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    (1.0 + r) * (1.0 + r).log2() - r * r.log2()
}

pub(crate) fn ln_gamma_fn(x: f64) -> f64 {
    ln_gamma(x)
}
