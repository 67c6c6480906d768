//! Explicit LP certificates.
//!
//! For a degree `k`, let `T_k` be `S_k` with its last diagonal entry lowered by
//! `rho` and let `(theta, f)` be its top eigenpair. Then
//!
//! ```text
//! (P1 − theta) f = f_k (rho p_k + a_k p_{k+1})
//! F = (rho p_k + a_k p_{k+1}) f = (P1 − theta) f^2 / f_k
//! ```
//!
//! has nonnegative coefficients in the `{p_i}` basis, is nonpositive wherever
//! `P1 <= theta`, and `F(tau0)/F_0` bounds the code size. A certificate stores
//! `F` with the eigen-data it came from, and [`verify_certificate`] re-checks
//! everything from the stored numbers.

use serde::{Deserialize, Serialize};

use crate::bound::{k_window, rho as rho_closed, BoundQuery, WindowOutcome};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::linearize::Linearizer;
use crate::spectral::build_s;
use crate::tridiag::{self, SymTridiag};

pub const DEFAULT_GRID_POINTS: usize = 512;
/// Relative tolerance for checks (i), (ii) and (iii).
pub const CHECK_TOLERANCE: f64 = 1e-9;
/// Relative tolerance on `F_0 = rho f_k`.
pub const F0_TOLERANCE: f64 = 1e-10;
/// Absolute slack on `λmax(S_{k−1}) <= theta <= λmax(S_k)`.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateOptions {
    /// Replaces the optimal `rho_k`.
    pub rho: Option<f64>,
    pub grid_points: usize,
    /// Eigenvalue tolerance; full double resolution by default.
    pub tol: Option<f64>,
    /// Degree cap for the window check.
    pub k_cap: Option<usize>,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        Self { rho: None, grid_points: DEFAULT_GRID_POINTS, tol: None, k_cap: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Nonnegative when the check holds exactly; see [`verify_certificate`] for each definition.
    pub margin: f64,
    pub tolerance: f64,
    /// Point where the margin is attained, for pointwise checks.
    pub worst_at: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub grid_points: usize,
    pub all_passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

pub const CHECK_COEFFICIENTS: &str = "coefficients_nonnegative";
pub const CHECK_DISTANCE_SET: &str = "nonpositive_on_distance_set";
pub const CHECK_SIGN: &str = "sign_structure";
pub const CHECK_IMPLIED: &str = "implied_bound_at_least_one";
pub const CHECK_F0: &str = "f0_identity";
pub const CHECK_SANDWICH: &str = "theta_sandwich";
pub const CHECK_POSITIVE: &str = "eigenvector_positive";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub query: BoundQuery,
    pub k: usize,
    pub rho: f64,
    pub a_k: f64,
    pub theta_k: f64,
    /// `λmax(S_{k−1})`, absent for `k = 0`.
    pub lambda_prev: Option<f64>,
    /// `λmax(S_k)`.
    pub lambda_k: f64,
    /// Top eigenvector of `T_k` in the `{p_i}` basis, unit norm, positive.
    pub f: Vec<f64>,
    /// `F` in the `{p_i}` basis, length `2k + 2`.
    #[serde(rename = "F_coeffs")]
    pub f_coeffs: Vec<f64>,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "F_at_tau0")]
    pub f_at_tau0: f64,
    /// `F(tau0) / F_0`.
    pub implied_bound: f64,
    /// `(rho p_k + a_k p_{k+1})^2 (tau0) / (rho (P1(tau0) − theta))`.
    pub closed_form_bound: f64,
    pub checks: VerificationReport,
}

/// Certificate at a degree inside the feasibility window.
pub fn build_certificate(query: &BoundQuery, k: usize, options: &CertificateOptions) -> Result<Certificate> {
    match k_window(query, options.k_cap, options.tol)? {
        WindowOutcome::Window(w) if (w.k_min..=w.k_max).contains(&k) => build_unchecked(query, k, options),
        WindowOutcome::Window(w) => {
            Err(Error::OutsideWindow { k, window: format!("[{}, {}]", w.k_min, w.k_max) })
        }
        WindowOutcome::Empty(_) => Err(Error::OutsideWindow { k, window: "empty".into() }),
    }
}

/// Certificate at any degree with `p_{k+1}` defined. Outside the window the
/// verification report shows which hypothesis fails.
pub fn build_unchecked(query: &BoundQuery, k: usize, options: &CertificateOptions) -> Result<Certificate> {
    let (family, _) = query.resolve()?;
    family.check_degree(k + 1)?;
    let rho = match options.rho {
        Some(r) if r > 0.0 && r.is_finite() => r,
        Some(r) => return Err(Error::InvalidArgument(format!("rho must be positive, got {r}"))),
        None => rho_closed(&family, k)?,
    };
    let a_k = family.a(k);
    let s = build_s(&family, k)?;
    let tol_for = |_: &SymTridiag| options.tol.unwrap_or(0.0);
    let lambda_k = tridiag::largest_eigenvalue(&s, tol_for(&s))?;
    let lambda_prev = if k == 0 {
        None
    } else {
        let sp = s.leading(k);
        Some(tridiag::largest_eigenvalue(&sp, tol_for(&sp))?)
    };
    let t = perturbed(&s, rho);
    let eig = tridiag::lambda_max(&t, tol_for(&t))?;
    let theta_k = eig.lambda_max;
    let f = eig.eigenvector;

    let f_coeffs = expand(&family, k, rho, a_k, &f)?;
    let scale = f_coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some((index, &value)) =
        f_coeffs.iter().enumerate().find(|(_, v)| **v < -CHECK_TOLERANCE * scale)
    {
        return Err(Error::NegativeCoefficient { index, value });
    }
    let tau0 = family.tau0();
    let f0 = f_coeffs[0];
    let f_at_tau0 = evaluate_series(&family, &f_coeffs, tau0);
    let pk = family.evaluate(k, tau0)?;
    let pk1 = family.evaluate(k + 1, tau0)?;
    let lead = rho * pk + a_k * pk1;
    let closed_form_bound = lead * lead / (rho * (family.p1_value(tau0) - theta_k));
    let mut cert = Certificate {
        query: *query,
        k,
        rho,
        a_k,
        theta_k,
        lambda_prev,
        lambda_k,
        f,
        f_coeffs,
        f0,
        f_at_tau0,
        implied_bound: f_at_tau0 / f0,
        closed_form_bound,
        checks: VerificationReport { grid_points: 0, all_passed: false, checks: Vec::new() },
    };
    cert.checks = verify_certificate(&cert, options.grid_points);
    Ok(cert)
}

/// Certificate at the engine's optimal degree.
pub fn certificate_at_optimum(query: &BoundQuery, options: &CertificateOptions) -> Result<Certificate> {
    let bopts = crate::bound::BoundOptions { k_cap: options.k_cap, tol: options.tol, per_k: false };
    match crate::bound::spectral_bound(query, &bopts)? {
        crate::bound::BoundOutcome::Bound(b) => build_unchecked(query, b.k_star, options),
        crate::bound::BoundOutcome::NoBound(nb) => {
            Err(Error::OutsideWindow { k: nb.k_cap, window: format!("empty ({:?})", nb.reason) })
        }
    }
}

/// `T_k`: `S_k` with the last diagonal entry lowered by `rho`.
pub fn perturbed(s: &SymTridiag, rho: f64) -> SymTridiag {
    let mut t = s.clone();
    let last = t.dim() - 1;
    t.diag_mut()[last] -= rho;
    t
}

fn expand(family: &Family, k: usize, rho: f64, a_k: f64, f: &[f64]) -> Result<Vec<f64>> {
    let top = 2 * k + 1;
    let lin = Linearizer::new(family, top)?;
    let mut out = vec![0.0; top + 1];
    for (i, &fi) in f.iter().enumerate() {
        let qk = lin.coefficients(i, k, top)?;
        let qk1 = lin.coefficients(i, k + 1, top)?;
        for (m, slot) in out.iter_mut().enumerate() {
            *slot += fi * (rho * qk[m] + a_k * qk1[m]);
        }
    }
    Ok(out)
}

/// `Σ c_m p_m(x)`, ignoring indices above the top degree of a discrete family.
pub fn evaluate_series(family: &Family, coeffs: &[f64], x: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let deg = family.max_degree().map_or(coeffs.len() - 1, |m| m.min(coeffs.len() - 1));
    let p = family.evaluate_upto_unchecked(deg, x);
    coeffs.iter().zip(&p).map(|(c, v)| c * v).sum()
}

impl Certificate {
    /// `(rho p_k(x) + a_k p_{k+1}(x)) · f(x)`, without the expansion.
    pub fn evaluate_direct(&self, family: &Family, x: f64) -> f64 {
        let p = family.evaluate_upto_unchecked(self.k + 1, x);
        let fx: f64 = self.f.iter().zip(&p).map(|(c, v)| c * v).sum();
        (self.rho * p[self.k] + self.a_k * p[self.k + 1]) * fx
    }
}

fn linspace(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let m = m.max(2);
    (0..m).map(|i| if i + 1 == m { hi } else { lo + (hi - lo) * i as f64 / (m - 1) as f64 }).collect()
}

fn check(name: &str, margin: f64, tolerance: f64, worst_at: Option<f64>) -> Check {
    Check { name: name.into(), passed: margin >= -tolerance, margin, tolerance, worst_at }
}

/// Re-check the hypotheses of the LP bound from the stored data.
///
/// Margins, each passing when `margin >= −tolerance`:
/// - coefficients: `min F_i / max |F_i|`;
/// - distance set: `−max F(x) / |F(tau0)|` over the forbidden set (the integers
///   from the minimum distance to the end of the range, or `grid_points` points
///   on `[−1, x_extreme]`);
/// - sign structure: `min F(x) sign(P1(x) − theta) / |F(tau0)|` over the whole support or grid;
/// - implied bound: `F(tau0)/F_0 − 1`, recomputed from the coefficients;
/// - `F_0` identity: `−|F_0 − rho f_k| / |rho f_k|`;
/// - sandwich: `min(theta − λmax(S_{k−1}), λmax(S_k) − theta)` with both eigenvalues recomputed;
/// - eigenvector: `min f_i / max f_i`, which must be strictly positive.
///
/// A malformed certificate (unknown family, wrong lengths) fails every check.
pub fn verify_certificate(cert: &Certificate, grid_points: usize) -> VerificationReport {
    match verify_inner(cert, grid_points) {
        Some(checks) => {
            let all_passed = checks.iter().all(|c| c.passed);
            VerificationReport { grid_points, all_passed, checks }
        }
        None => VerificationReport {
            grid_points,
            all_passed: false,
            checks: [CHECK_COEFFICIENTS, CHECK_DISTANCE_SET, CHECK_SIGN, CHECK_IMPLIED, CHECK_F0, CHECK_SANDWICH, CHECK_POSITIVE]
                .iter()
                .map(|n| Check { name: (*n).into(), passed: false, margin: f64::NAN, tolerance: 0.0, worst_at: None })
                .collect(),
        },
    }
}

fn verify_inner(cert: &Certificate, grid_points: usize) -> Option<Vec<Check>> {
    let (family, x_ext) = cert.query.resolve().ok()?;
    let k = cert.k;
    if cert.f.len() != k + 1 || cert.f_coeffs.len() != 2 * k + 2 || family.check_degree(k + 1).is_err() {
        return None;
    }
    let coeffs = &cert.f_coeffs;
    let tau0 = family.tau0();
    let mut checks = Vec::with_capacity(7);

    let scale = coeffs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (imin, cmin) = coeffs
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    checks.push(check(CHECK_COEFFICIENTS, cmin / scale, CHECK_TOLERANCE, Some(imin as f64)));

    let f_tau0 = evaluate_series(&family, coeffs, tau0);
    let norm = f_tau0.abs();
    let (forbidden, whole) = match family.support_points() {
        Some(points) => {
            let forbidden: Vec<f64> = points.iter().copied().filter(|&x| x >= x_ext).collect();
            (forbidden, points)
        }
        None => {
            let forbidden = linspace(-1.0, x_ext, grid_points);
            let mut whole = linspace(-1.0, 1.0, grid_points);
            whole.extend_from_slice(&forbidden);
            (forbidden, whole)
        }
    };
    let (x_worst, f_worst) = forbidden
        .iter()
        .map(|&x| (x, evaluate_series(&family, coeffs, x)))
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, (x, v)| if v > acc.1 { (x, v) } else { acc });
    checks.push(check(CHECK_DISTANCE_SET, -f_worst / norm, CHECK_TOLERANCE, Some(x_worst)));

    let (x_sign, sign_min) = whole
        .iter()
        .map(|&x| {
            let side = (family.p1_value(x) - cert.theta_k).signum();
            (x, evaluate_series(&family, coeffs, x) * side)
        })
        .fold((f64::NAN, f64::INFINITY), |acc, (x, v)| if v < acc.1 { (x, v) } else { acc });
    checks.push(check(CHECK_SIGN, sign_min / norm, CHECK_TOLERANCE, Some(x_sign)));

    checks.push(check(CHECK_IMPLIED, f_tau0 / coeffs[0] - 1.0, 0.0, None));

    let want = cert.rho * cert.f[k];
    let mut f0_check = check(CHECK_F0, -(coeffs[0] - want).abs() / want.abs(), F0_TOLERANCE, None);
    f0_check.passed &= coeffs[0] > 0.0;
    checks.push(f0_check);

    let s = build_s(&family, k).ok()?;
    let lam_k = tridiag::largest_eigenvalue(&s, 0.0).ok()?;
    let lam_prev = if k == 0 { f64::NEG_INFINITY } else { tridiag::largest_eigenvalue(&s.leading(k), 0.0).ok()? };
    let sandwich = (cert.theta_k - lam_prev).min(lam_k - cert.theta_k);
    checks.push(check(CHECK_SANDWICH, sandwich, SANDWICH_SLACK, None));

    let fmax = cert.f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let fmin = cert.f.iter().copied().fold(f64::INFINITY, f64::min);
    let margin = fmin / fmax;
    checks.push(Check { name: CHECK_POSITIVE.into(), passed: margin > 0.0, margin, tolerance: 0.0, worst_at: None });
    Some(checks)
}
