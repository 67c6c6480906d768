//! Operators on polynomials of degree `<= k`, written in the orthonormal basis.
//!
//! `S_k` is multiplication by `P1` followed by projection, `X_k` the same for `x`.
//! Both are symmetric tridiagonal. The spectrum of `X_k` is the zero set of
//! `p_{k+1}`, which also yields Gauss quadrature rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::tridiag::{self, SymTridiag};

/// `S_k = A_k(c_i, b_i, a_i)`, of size `(k+1) x (k+1)`.
pub fn build_s(family: &Family, k: usize) -> Result<SymTridiag> {
    family.check_degree(k)?;
    let diag = (0..=k).map(|i| family.b(i)).collect();
    let off = (0..k).map(|i| family.a(i)).collect();
    SymTridiag::new(diag, off)
}

/// `X_k = A_k(gamma_i, beta_i, alpha_i)`.
pub fn build_x(family: &Family, k: usize) -> Result<SymTridiag> {
    family.check_degree(k)?;
    let coeffs: Vec<_> = (0..=k).map(|i| family.recurrence_unchecked(i)).collect();
    let diag = coeffs.iter().map(|r| r.beta).collect();
    let off = coeffs[..k].iter().map(|r| r.alpha).collect();
    SymTridiag::new(diag, off)
}

/// Largest eigenvalues of `S_0, S_1, ..., S_kmax`, each bracketed below by its predecessor.
pub fn s_ladder(family: &Family, kmax: usize, tol: Option<f64>) -> Result<Vec<f64>> {
    let full = build_s(family, kmax)?;
    let mut out = Vec::with_capacity(kmax + 1);
    let mut prev: Option<f64> = None;
    for k in 0..=kmax {
        let s = full.leading(k + 1);
        let t = tol.unwrap_or_else(|| tridiag::default_tolerance(&s));
        let (lam, _) = tridiag::largest_eigenvalue_bracketed(&s, t, prev)?;
        out.push(lam);
        prev = Some(lam);
    }
    Ok(out)
}

/// Outcome of the closed-form eigenvalue sandwich for `S_k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LemmaBounds {
    Applicable { lower: f64, upper: f64, best_s: usize },
    /// `a_i` or `b_i` decrease somewhere on the index range the bounds rely on.
    NotApplicable { index: usize },
}

/// Relative slack used when testing monotonicity of the recurrence coefficients.
const MONOTONE_SLACK: f64 = 1e-12;

/// Lower and upper estimates of `λmax(S_k)` from the monotone recurrence coefficients:
///
/// ```text
/// max_s (2(s−1) a_{k−s+1} + s b_{k−s+1}) / s  <=  λmax(S_k)  <=  a_{k−1} + max(a_{k−1} + b_{k−1}, b_k)
/// ```
pub fn lemma_lim_bounds(family: &Family, k: usize) -> Result<LemmaBounds> {
    family.check_degree(k)?;
    if k == 0 {
        let b0 = family.b(0);
        return Ok(LemmaBounds::Applicable { lower: b0, upper: b0, best_s: 1 });
    }
    let a: Vec<f64> = (0..k).map(|i| family.a(i)).collect();
    let b: Vec<f64> = (0..=k).map(|i| family.b(i)).collect();
    let decreasing = |v: &[f64]| {
        v.windows(2).position(|w| w[1] < w[0] - MONOTONE_SLACK * w[0].abs().max(w[1].abs()))
    };
    if let Some(i) = decreasing(&a).or_else(|| decreasing(&b)) {
        return Ok(LemmaBounds::NotApplicable { index: i + 1 });
    }
    let upper = a[k - 1] + (a[k - 1] + b[k - 1]).max(b[k]);
    let mut lower = f64::NEG_INFINITY;
    let mut best_s = 1;
    for s in 1..=k + 1 {
        let j = k + 1 - s;
        let sf = s as f64;
        // s = 1 gives b_k alone; a_k is never needed.
        let a_term = if s == 1 { 0.0 } else { a[j] };
        let v = (2.0 * (sf - 1.0) * a_term + sf * b[j]) / sf;
        if v > lower {
            lower = v;
            best_s = s;
        }
    }
    Ok(LemmaBounds::Applicable { lower, upper, best_s })
}

/// Largest zero of `p_{k+1}`, computed as `λmax(X_k)` by bisection to full double resolution.
pub fn largest_zero(family: &Family, k_plus_1: usize) -> Result<f64> {
    if k_plus_1 == 0 {
        return Err(Error::InvalidArgument("p_0 has no zeros".into()));
    }
    family.check_degree(k_plus_1)?;
    let x = build_x(family, k_plus_1 - 1)?;
    tridiag::largest_eigenvalue(&x, 0.0)
}

/// All zeros of `p_{k+1}` in ascending order (the spectrum of `X_k`).
pub fn all_zeros(family: &Family, k_plus_1: usize) -> Result<Vec<f64>> {
    if k_plus_1 == 0 {
        return Err(Error::InvalidArgument("p_0 has no zeros".into()));
    }
    family.check_degree(k_plus_1)?;
    let x = build_x(family, k_plus_1 - 1)?;
    tridiag::eigenvalues_bisection(&x)
}

/// Gauss rule for the family measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `m`-point Gauss rule (Golub–Welsch): nodes are the eigenvalues of `X_{m−1}`,
/// weights the squared first components of the unit eigenvectors.
pub fn gauss_quadrature(family: &Family, m: usize) -> Result<Quadrature> {
    if m == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    if family.is_discrete() {
        return Err(Error::InvalidArgument("Gauss quadrature is only needed for continuous families".into()));
    }
    let x = build_x(family, m - 1)?;
    let eig = tridiag::symmetric_eigen(&x)?;
    let weights = eig.vectors[0].iter().map(|v| v * v).collect();
    Ok(Quadrature { nodes: eig.values, weights })
}

/// Node count that integrates polynomials of degree `deg` exactly, plus two spare nodes.
pub fn nodes_for_degree(deg: usize) -> usize {
    (deg + 1).div_ceil(2) + 2
}
