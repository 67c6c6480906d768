//! Spectral upper bounds on code size.
//!
//! For every degree `k` with `λmax(S_{k−1}) >= P1(x)` on the forbidden set and
//! `λmax(S_k) < P1(tau0)`,
//!
//! ```text
//! M <= 4 rho_k p_k(tau0)^2 / (P1(tau0) − λmax(S_k)),   rho_k = a_k p_{k+1}(tau0) / p_k(tau0).
//! ```
//!
//! The engine evaluates this in log2 for the whole feasibility window and keeps
//! the smallest value. Each value is computed twice: once through the generic
//! expression (recurrence values at `tau0`) and once through the closed form
//! specific to the space, and the two must agree.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{Family, FamilySpec, Field};
use crate::special::ln_binomial;
use crate::spectral::build_s;
use crate::tridiag;

/// Absolute slack on the feasibility comparison `λmax(S_{k−1}) >= P1(x)`.
pub const FEASIBILITY_SLACK: f64 = 1e-12;
/// Maximum relative disagreement between the generic and specialized bound.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-9;
/// `bound_value` is materialized only below this many bits.
pub const OVERFLOW_LOG2: f64 = 800.0;

/// Distance constraint of a code.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceParam {
    /// Hamming: minimum distance `d`. Johnson: half the minimum distance (code distance `2d`).
    Distance(u32),
    /// Sphere: `cos(angle) <= t`. Projective: `|(x, y)| <= t`.
    InnerProduct(f64),
}

/// A code-size question.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub family: FamilySpec,
    pub distance: DistanceParam,
}

impl BoundQuery {
    pub fn hamming(n: u32, d: u32) -> Self {
        Self { family: FamilySpec::Hamming { n }, distance: DistanceParam::Distance(d) }
    }

    /// Constant-weight codes with minimum distance `2d`.
    pub fn johnson(n: u32, w: u32, d: u32) -> Self {
        Self { family: FamilySpec::Johnson { n, w }, distance: DistanceParam::Distance(d) }
    }

    pub fn sphere(n: u32, t: f64) -> Self {
        Self { family: FamilySpec::Sphere { n }, distance: DistanceParam::InnerProduct(t) }
    }

    pub fn projective(n: u32, field: Field, t: f64) -> Self {
        Self { family: FamilySpec::Projective { n, field }, distance: DistanceParam::InnerProduct(t) }
    }

    pub fn jacobi(alpha: f64, beta: f64, t: f64) -> Self {
        Self { family: FamilySpec::Jacobi { alpha, beta }, distance: DistanceParam::InnerProduct(t) }
    }

    /// Validate and return the family with the extreme point `x` of the forbidden set,
    /// the point where `P1` is largest on it.
    pub fn resolve(&self) -> Result<(Family, f64)> {
        let family = Family::new(self.family)?;
        let x = match (self.family, self.distance) {
            (FamilySpec::Hamming { n }, DistanceParam::Distance(d)) => {
                if d == 0 || d > n {
                    return Err(Error::DistanceOutOfRange(format!("Hamming needs 1 <= d <= {n}, got {d}")));
                }
                d as f64
            }
            (FamilySpec::Johnson { w, .. }, DistanceParam::Distance(d)) => {
                if d == 0 || d > w {
                    return Err(Error::DistanceOutOfRange(format!(
                        "Johnson needs 1 <= d <= {w} (code distance 2d), got {d}"
                    )));
                }
                d as f64
            }
            (FamilySpec::Sphere { .. }, DistanceParam::InnerProduct(t)) => {
                if !(t > -1.0 && t < 1.0) {
                    return Err(Error::DistanceOutOfRange(format!("sphere needs -1 < t < 1, got {t}")));
                }
                t
            }
            (FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. }, DistanceParam::InnerProduct(t)) => {
                if !(0.0..1.0).contains(&t) {
                    return Err(Error::DistanceOutOfRange(format!("projective needs 0 <= t < 1, got {t}")));
                }
                2.0 * t * t - 1.0
            }
            (spec, dist) => {
                return Err(Error::InvalidArgument(format!("distance {dist:?} does not fit family {spec:?}")));
            }
        };
        Ok((family, x))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    /// Largest degree considered; defaults to [`default_k_cap`].
    pub k_cap: Option<usize>,
    /// Absolute eigenvalue tolerance. By default eigenvalues are bisected to full
    /// double resolution: feasibility is decided with a `1e-12` slack and exact ties
    /// between eigenvalues and thresholds are common.
    pub tol: Option<f64>,
    /// Record every degree in the window.
    pub per_k: bool,
}

/// `min(family range, 2n)`; 200 for bare Jacobi parameters.
pub fn default_k_cap(family: &Family) -> usize {
    let twice_n = family.n().map_or(200, |n| 2 * n as usize);
    family.max_degree().map_or(twice_n, |m| m.min(twice_n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KWindow {
    pub k_min: usize,
    pub k_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoBoundReason {
    /// `λmax(S_{k−1})` stays below `P1(x_extreme)` for every `k <= k_cap`.
    ThresholdNotReached,
    /// The threshold is reached only where `λmax(S_k) >= P1(tau0)`.
    DenominatorNonPositive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoBound {
    pub reason: NoBoundReason,
    /// `P1(x_extreme)`.
    pub threshold: f64,
    pub k_cap: usize,
    /// `λmax(S_{k_cap−1})`, the best the window could reach.
    pub lambda_at_cap: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WindowOutcome {
    Window(KWindow),
    Empty(NoBound),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerK {
    pub k: usize,
    pub lambda_max: f64,
    pub bound_log2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub k_star: usize,
    /// `λmax(S_{k_star})`.
    pub lambda_k: f64,
    pub bound_log2: f64,
    /// `None` when `bound_log2 >= 800`; `bound_log2` is authoritative then.
    pub bound_value: Option<f64>,
    pub k_window: KWindow,
    /// `P1(x_extreme)`.
    pub threshold: f64,
    /// `P1(tau0)`.
    pub p1_tau0: f64,
    pub per_k_table: Option<Vec<PerK>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BoundOutcome {
    Bound(BoundResult),
    NoBound(NoBound),
}

impl BoundOutcome {
    pub fn bound(&self) -> Option<&BoundResult> {
        match self {
            BoundOutcome::Bound(b) => Some(b),
            BoundOutcome::NoBound(_) => None,
        }
    }
}

/// Incrementally computed `λmax(S_k)`.
struct Ladder {
    full: tridiag::SymTridiag,
    tol: Option<f64>,
    values: Vec<f64>,
}

impl Ladder {
    fn new(family: &Family, k_cap: usize, tol: Option<f64>) -> Result<Self> {
        Ok(Self { full: build_s(family, k_cap)?, tol, values: Vec::new() })
    }

    fn get(&mut self, k: usize) -> Result<f64> {
        while self.values.len() <= k {
            let j = self.values.len();
            let s = self.full.leading(j + 1);
            let tol = self.tol.unwrap_or(0.0);
            let (lam, _) = tridiag::largest_eigenvalue_bracketed(&s, tol, self.values.last().copied())?;
            self.values.push(lam);
        }
        Ok(self.values[k])
    }
}

struct WindowScan {
    outcome: WindowOutcome,
    lambdas: Vec<f64>,
    threshold: f64,
    p1_tau0: f64,
}

fn scan_window(family: &Family, x_extreme: f64, k_cap: usize, tol: Option<f64>) -> Result<WindowScan> {
    let threshold = family.p1_value(x_extreme);
    let p1_tau0 = family.p1_value(family.tau0());
    let k_cap = family.max_degree().map_or(k_cap, |m| k_cap.min(m));
    // A bound at k needs p_{k+1}.
    let usable = family.max_degree().map_or(k_cap, |m| k_cap.min(m.saturating_sub(1)));
    let mut ladder = Ladder::new(family, k_cap.max(1), tol)?;
    let empty = |reason, ladder: &mut Ladder| -> Result<WindowOutcome> {
        let lambda_at_cap = ladder.get(usable.saturating_sub(1))?;
        Ok(WindowOutcome::Empty(NoBound { reason, threshold, k_cap, lambda_at_cap }))
    };
    if usable == 0 {
        let outcome = empty(NoBoundReason::ThresholdNotReached, &mut ladder)?;
        return Ok(WindowScan { outcome, lambdas: ladder.values, threshold, p1_tau0 });
    }
    let mut k_min = None;
    for k in 1..=usable {
        if ladder.get(k - 1)? >= threshold - FEASIBILITY_SLACK {
            k_min = Some(k);
            break;
        }
    }
    let Some(k_min) = k_min else {
        let outcome = empty(NoBoundReason::ThresholdNotReached, &mut ladder)?;
        return Ok(WindowScan { outcome, lambdas: ladder.values, threshold, p1_tau0 });
    };
    let mut k_max = None;
    for k in k_min..=usable {
        if ladder.get(k)? < p1_tau0 {
            k_max = Some(k);
        } else {
            break;
        }
    }
    let outcome = match k_max {
        Some(k_max) => WindowOutcome::Window(KWindow { k_min, k_max }),
        None => empty(NoBoundReason::DenominatorNonPositive, &mut ladder)?,
    };
    Ok(WindowScan { outcome, lambdas: ladder.values, threshold, p1_tau0 })
}

/// Feasibility window of degrees for a query.
pub fn k_window(query: &BoundQuery, k_cap: Option<usize>, tol: Option<f64>) -> Result<WindowOutcome> {
    let (family, x) = query.resolve()?;
    let cap = k_cap.unwrap_or_else(|| default_k_cap(&family));
    Ok(scan_window(&family, x, cap, tol)?.outcome)
}

/// Tolerance between [`rho_generic`] and the closed form.
pub const RHO_TOLERANCE: f64 = 1e-10;

/// Closed-form `rho_k`, checked against [`rho_generic`].
pub fn rho(family: &Family, k: usize) -> Result<f64> {
    let closed = rho_closed(family, k)?;
    let generic = rho_generic(family, k)?;
    if (generic - closed).abs() > RHO_TOLERANCE * closed.abs() {
        return Err(Error::ClosedFormMismatch { k, generic, closed });
    }
    Ok(closed)
}

fn rho_closed(family: &Family, k: usize) -> Result<f64> {
    family.check_degree(k + 1)?;
    let kf = k as f64;
    Ok(match family.spec() {
        FamilySpec::Hamming { n } => n as f64 - kf,
        FamilySpec::Johnson { n, w } => {
            let (n, w) = (n as f64, w as f64);
            n * (w - kf) * (n - w - kf) * (n - kf + 1.0) / (w * (n - w) * (n - 2.0 * kf) * (n - 2.0 * kf + 1.0))
        }
        FamilySpec::Sphere { n } => {
            let n = n as f64;
            (n + kf - 2.0) / (n + 2.0 * kf - 2.0)
        }
        FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
            let (al, be) = family.jacobi_params().unwrap();
            let s = al + be;
            (s + 2.0) * (kf + al + 1.0) * (kf + s + 1.0) / ((2.0 * kf + s + 1.0) * (2.0 * kf + s + 2.0))
        }
    })
}

/// `rho_k = a_k p_{k+1}(tau0) / p_k(tau0)` from recurrence values.
pub fn rho_generic(family: &Family, k: usize) -> Result<f64> {
    let vals = family.ln_abs_evaluate_upto(k + 1, family.tau0())?;
    let (s1, l1) = vals[k + 1];
    let (s0, l0) = vals[k];
    Ok(s1 * s0 * family.a(k) * (l1 - l0).exp())
}

/// Generic bound at degree `k` in log2, from recurrence values at `tau0`.
pub fn generic_bound_log2(family: &Family, k: usize, lambda: f64) -> Result<f64> {
    let vals = family.ln_abs_evaluate_upto(k + 1, family.tau0())?;
    Ok(generic_from_values(family, k, lambda, &vals))
}

fn generic_from_values(family: &Family, k: usize, lambda: f64, ln_vals: &[(f64, f64)]) -> f64 {
    let den = family.p1_value(family.tau0()) - lambda;
    // 4 rho_k p_k^2 = 4 a_k p_{k+1} p_k
    let ln = 4f64.ln() + family.a(k).ln() + ln_vals[k + 1].1 + ln_vals[k].1 - den.ln();
    ln / std::f64::consts::LN_2
}

/// Space-specific closed form of the bound at degree `k` in log2.
pub fn specialized_bound_log2(family: &Family, k: usize, lambda: f64) -> Result<f64> {
    family.check_degree(k + 1)?;
    let kf = k as f64;
    let ln = match family.spec() {
        FamilySpec::Hamming { n } => {
            let n = n as f64;
            (4.0 * (n - kf)).ln() - (n - lambda).ln() + ln_binomial(n, kf)
        }
        FamilySpec::Johnson { n, w } => {
            let (n, w) = (n as f64, w as f64);
            (4.0 * n * (w - kf) * (n - w - kf)).ln() - ((1.0 - lambda) * w * (n - w) * (n - 2.0 * kf)).ln()
                + ln_binomial(n, kf)
        }
        FamilySpec::Sphere { n } => 4f64.ln() - (1.0 - lambda).ln() + ln_binomial(n as f64 + kf - 2.0, kf),
        FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
            let (al, be) = family.jacobi_params().unwrap();
            let s = al + be;
            // P1(1) = alpha + 1.
            (4.0 * (s + 2.0) * (kf + al + 1.0)).ln() - ((2.0 * kf + s + 2.0) * (al + 1.0 - lambda)).ln()
                + ln_binomial(kf + al, al)
                + ln_binomial(kf + s + 1.0, kf)
                - ln_binomial(kf + be, be)
        }
    };
    Ok(ln / std::f64::consts::LN_2)
}

fn agree(generic: f64, closed: f64) -> bool {
    ((generic - closed) * std::f64::consts::LN_2).abs() <= CLOSED_FORM_TOLERANCE
}

/// Best bound over the feasibility window.
pub fn spectral_bound(query: &BoundQuery, options: &BoundOptions) -> Result<BoundOutcome> {
    let (family, x) = query.resolve()?;
    let cap = options.k_cap.unwrap_or_else(|| default_k_cap(&family));
    let scan = scan_window(&family, x, cap, options.tol)?;
    let window = match scan.outcome {
        WindowOutcome::Window(w) => w,
        WindowOutcome::Empty(nb) => return Ok(BoundOutcome::NoBound(nb)),
    };
    let ln_vals = family.ln_abs_evaluate_upto(window.k_max + 1, family.tau0())?;
    let mut best: Option<(usize, f64, f64)> = None;
    let mut table = options.per_k.then(Vec::new);
    for k in window.k_min..=window.k_max {
        let lambda = scan.lambdas[k];
        let generic = generic_from_values(&family, k, lambda, &ln_vals);
        let closed = specialized_bound_log2(&family, k, lambda)?;
        if !agree(generic, closed) {
            return Err(Error::ClosedFormMismatch { k, generic, closed });
        }
        if let Some(t) = table.as_mut() {
            t.push(PerK { k, lambda_max: lambda, bound_log2: generic });
        }
        if best.is_none_or(|(_, _, b)| generic < b) {
            best = Some((k, lambda, generic));
        }
    }
    let (k_star, lambda_k, bound_log2) = best.expect("window is non-empty");
    let bound_value = (bound_log2 < OVERFLOW_LOG2).then(|| bound_log2.exp2());
    Ok(BoundOutcome::Bound(BoundResult {
        k_star,
        lambda_k,
        bound_log2,
        bound_value,
        k_window: window,
        threshold: scan.threshold,
        p1_tau0: scan.p1_tau0,
        per_k_table: table,
    }))
}

/// Element-wise [`spectral_bound`], evaluated in parallel and returned in input order.
pub fn bound_sweep(queries: &[BoundQuery], options: &BoundOptions) -> Vec<(BoundQuery, Result<BoundOutcome>)> {
    queries.par_iter().map(|q| (*q, spectral_bound(q, options))).collect()
}
