//! Asymptotic rate bounds, `(1/n) log2 M`, and the limits of `λmax(S_k)` behind them.
//!
//! All logarithms are base 2 and `0 · log 0 = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{binary_entropy, sphere_entropy};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateArgument {
    Scalar(f64),
    Pair { omega: f64, delta: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub argument: RateArgument,
    /// Bits per symbol.
    pub rate: f64,
    /// The internal `tau`, `rho` or `s`.
    pub auxiliary: f64,
    /// Set when the distance sits at or past the end of the curve and the rate is pinned to zero.
    #[serde(default)]
    pub boundary: bool,
}

/// MRRW bound for binary codes of relative distance `delta`.
pub fn hamming_rate(delta: f64) -> Result<RatePoint> {
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::DistanceOutOfRange(format!("delta must lie in (0, 1/2], got {delta}")));
    }
    let tau = (0.5 - (delta * (1.0 - delta)).sqrt()).max(0.0);
    Ok(RatePoint { argument: RateArgument::Scalar(delta), rate: binary_entropy(tau), auxiliary: tau, boundary: false })
}

const BISECTION_STEPS: usize = 200;
const BISECTION_TOL: f64 = 1e-12;

/// `(omega − tau)(1 − omega − tau) / (1 + 2 sqrt(tau (1 − tau)))`.
pub fn johnson_delta(omega: f64, tau: f64) -> f64 {
    (omega - tau) * (1.0 - omega - tau) / (1.0 + 2.0 * (tau * (1.0 - tau)).sqrt())
}

/// MRRW bound for constant-weight codes with relative weight `omega` and
/// relative distance `2 delta`.
pub fn johnson_rate(omega: f64, delta: f64) -> Result<RatePoint> {
    if !(omega > 0.0 && omega <= 0.5) {
        return Err(Error::InvalidArgument(format!("omega must lie in (0, 1/2], got {omega}")));
    }
    if !(delta > 0.0) {
        return Err(Error::DistanceOutOfRange(format!("delta must be positive, got {delta}")));
    }
    let argument = RateArgument::Pair { omega, delta };
    if delta >= omega * (1.0 - omega) {
        return Ok(RatePoint { argument, rate: 0.0, auxiliary: 0.0, boundary: true });
    }
    let (mut lo, mut hi) = (0.0, omega);
    let (mut f_lo, mut f_hi) = (johnson_delta(omega, lo), johnson_delta(omega, hi));
    for _ in 0..BISECTION_STEPS {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = johnson_delta(omega, mid);
        if !(f_lo >= f_mid && f_mid >= f_hi) {
            return Err(Error::InvalidArgument(format!(
                "delta(omega = {omega}, tau) is not decreasing near tau = {mid}"
            )));
        }
        if f_mid > delta {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    Ok(RatePoint { argument, rate: binary_entropy(tau), auxiliary: tau, boundary: false })
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::DistanceOutOfRange(format!("t must lie in [0, 1), got {t}")));
    }
    Ok(())
}

/// Bound for spherical codes with maximal inner product `t`.
pub fn sphere_rate(t: f64) -> Result<RatePoint> {
    check_t(t)?;
    let r = (1.0 - t * t).sqrt();
    let rho = (1.0 - r) / (2.0 * r);
    Ok(RatePoint { argument: RateArgument::Scalar(t), rate: sphere_entropy(rho), auxiliary: rho, boundary: false })
}

/// Bound for codes in real projective space with `|(x, y)| <= t`.
pub fn projective_real_rate(t: f64) -> Result<RatePoint> {
    check_t(t)?;
    let s = 0.5 * (1.0 / (1.0 - t * t).sqrt() - 1.0);
    Ok(RatePoint { argument: RateArgument::Scalar(t), rate: sphere_entropy(s), auxiliary: s, boundary: false })
}

/// Scaling regime for the limit of `λmax(S_k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitShape {
    /// `k/n → tau`; limit of `λmax / n`.
    Hamming { tau: f64 },
    /// `w/n → omega`, `k/n → tau`; unscaled limit.
    Johnson { omega: f64, tau: f64 },
    /// `k/n → rho`; unscaled limit.
    Sphere { rho: f64 },
    /// Jacobi parameters `alpha/k → a`, `beta/k → b`; limit of `λmax / k`.
    Projective { a: f64, b: f64 },
}

pub fn lambda_limit(shape: LimitShape) -> Result<f64> {
    let bad = |what: &str| Err(Error::InvalidArgument(format!("{what} out of range in {shape:?}")));
    match shape {
        LimitShape::Hamming { tau } => {
            if !(tau > 0.0 && tau <= 0.5) {
                return bad("tau");
            }
            Ok(2.0 * (tau * (1.0 - tau)).sqrt())
        }
        LimitShape::Johnson { omega, tau } => {
            if !(omega > 0.0 && omega <= 0.5) {
                return bad("omega");
            }
            if !(tau > 0.0 && tau <= 0.5) {
                return bad("tau");
            }
            let q = (tau * (1.0 - tau)).sqrt();
            let ww = omega * (1.0 - omega);
            Ok((2.0 * ww + q) * q / (ww * (1.0 + 2.0 * q)))
        }
        LimitShape::Sphere { rho } => {
            if !(rho > 0.0) {
                return bad("rho");
            }
            Ok(2.0 * (rho * (1.0 + rho)).sqrt() / (1.0 + 2.0 * rho))
        }
        LimitShape::Projective { a, b } => {
            if !(a > 0.0 && b >= 0.0) {
                return bad("a, b");
            }
            let s = a + b;
            Ok(2.0 * (s * ((a + 1.0) * (b + 1.0) * (s + 1.0)).sqrt() + (a - b) * (s + 1.0)) / ((s + 2.0) * (s + 2.0)))
        }
    }
}
