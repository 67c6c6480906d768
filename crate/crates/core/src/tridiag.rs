//! Symmetric tridiagonal matrices and their eigenproblems.
//!
//! The largest eigenvalue is found by bisection on the Sturm-sequence
//! eigenvalue count inside the Gershgorin interval; its eigenvector comes from
//! inverse iteration started at the all-ones vector, with an implicit QL
//! decomposition as fallback. Everything is deterministic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument("tridiagonal matrix must be at least 1x1".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "off-diagonal has length {}, expected {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub(crate) fn diag_mut(&mut self) -> &mut [f64] {
        &mut self.diag
    }

    /// Leading principal `m x m` block.
    pub fn leading(&self, m: usize) -> SymTridiag {
        let m = m.clamp(1, self.dim());
        SymTridiag { diag: self.diag[..m].to_vec(), offdiag: self.offdiag[..m - 1].to_vec() }
    }

    pub fn is_finite(&self) -> bool {
        self.diag.iter().chain(&self.offdiag).all(|v| v.is_finite())
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim()).map(|i| self.row_abs_sum(i)).fold(0.0, f64::max)
    }

    fn row_abs_sum(&self, i: usize) -> f64 {
        let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
        let right = self.offdiag.get(i).map_or(0.0, |e| e.abs());
        self.diag[i].abs() + left + right
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = self.offdiag.get(i).map_or(0.0, |e| e.abs());
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let m = self.dim();
        (0..m)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < m {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Quadratic form `(T y, y)`.
    pub fn quadratic_form(&self, y: &[f64]) -> f64 {
        self.mul_vec(y).iter().zip(y).map(|(a, b)| a * b).sum()
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self.offdiag.iter().map(|e| e * e).fold(0.0, f64::max);
        (f64::MIN_POSITIVE * emax.max(1.0)).max(f64::MIN_POSITIVE)
    }

    /// Number of eigenvalues strictly less than `x` (Sturm count via the LDLᵀ pivots).
    pub fn count_below(&self, x: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                let e = self.offdiag[i - 1];
                q = (self.diag[i] - x) - e * e / q;
            }
            if q.abs() < floor {
                q = -floor;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }
}

/// Largest eigenpair of a symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda_max: f64,
    /// Unit 2-norm, sign fixed so that the entry of largest magnitude is positive.
    pub eigenvector: Vec<f64>,
    /// `‖T v − λ v‖∞`.
    pub residual: f64,
    /// Bisection steps plus inverse-iteration sweeps.
    pub iterations: usize,
}

/// Default absolute eigenvalue tolerance, `1e-12 · max(1, ‖T‖∞)`.
pub fn default_tolerance(t: &SymTridiag) -> f64 {
    1e-12 * t.norm_inf().max(1.0)
}

/// Smallest residual tolerance the kernels can honour in double precision.
fn attainable(t: &SymTridiag, tol: f64) -> f64 {
    tol.max(64.0 * f64::EPSILON * t.norm_inf().max(1.0))
}

const MAX_BISECTION: usize = 300;
const MAX_INVERSE_SWEEPS: usize = 8;

/// Largest eigenvalue by Sturm bisection. Returns the value and the number of bisection steps.
///
/// `lower` may supply a known lower bound (for example the largest eigenvalue of a
/// leading principal block); it is only used if it lies inside the Gershgorin interval.
pub fn largest_eigenvalue_bracketed(t: &SymTridiag, tol: f64, lower: Option<f64>) -> Result<(f64, usize)> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be nonnegative, got {tol}")));
    }
    let m = t.dim();
    if m == 1 {
        return Ok((t.diag[0], 0));
    }
    let (glo, ghi) = t.gershgorin();
    let pad = 4.0 * f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);
    let mut lo = glo - pad;
    let mut hi = ghi + pad;
    if let Some(l) = lower {
        if l > lo && l < hi && t.count_below(l) < m {
            lo = l;
        }
    }
    let mut steps = 0;
    while steps < MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        if t.count_below(mid) < m {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    Ok((0.5 * (lo + hi), steps))
}

/// Largest eigenvalue only.
pub fn largest_eigenvalue(t: &SymTridiag, tol: f64) -> Result<f64> {
    largest_eigenvalue_bracketed(t, tol, None).map(|(l, _)| l)
}

/// Largest eigenvalue and its eigenvector.
pub fn lambda_max(t: &SymTridiag, tol: f64) -> Result<SpectralResult> {
    let (lambda, steps) = largest_eigenvalue_bracketed(t, tol, None)?;
    let target = attainable(t, tol);
    if let Some((v, sweeps)) = inverse_iteration(t, lambda, target) {
        let residual = residual(t, lambda, &v);
        return Ok(SpectralResult { lambda_max: lambda, eigenvector: v, residual, iterations: steps + sweeps });
    }
    // Fallback: full decomposition.
    let eig = symmetric_eigen(t)?;
    let last = t.dim() - 1;
    let mut v: Vec<f64> = eig.vectors.iter().map(|row| row[last]).collect();
    fix_sign(&mut v);
    let residual = residual(t, lambda, &v);
    if residual > target {
        return Err(Error::NoConvergence { iterations: steps + MAX_INVERSE_SWEEPS });
    }
    Ok(SpectralResult { lambda_max: lambda, eigenvector: v, residual, iterations: steps + MAX_INVERSE_SWEEPS })
}

fn residual(t: &SymTridiag, lambda: f64, v: &[f64]) -> f64 {
    t.mul_vec(v).iter().zip(v).map(|(a, b)| (a - lambda * b).abs()).fold(0.0, f64::max)
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

fn fix_sign(v: &mut [f64]) {
    let big = v.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if big < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn inverse_iteration(t: &SymTridiag, shift: f64, target: f64) -> Option<(Vec<f64>, usize)> {
    let lu = TridiagLu::factor(t, shift);
    let mut v = vec![1.0; t.dim()];
    normalize(&mut v);
    for sweep in 1..=MAX_INVERSE_SWEEPS {
        let mut y = lu.solve(&v);
        if !normalize(&mut y) {
            return None;
        }
        fix_sign(&mut y);
        v = y;
        if residual(t, shift, &v) <= target {
            return Some((v, sweep));
        }
    }
    None
}

/// LU factorization of `T − σI` with partial pivoting (rows i and i+1 may swap),
/// producing an upper factor with two superdiagonals.
struct TridiagLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiag, shift: f64) -> Self {
        let m = t.dim();
        let tiny = f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut up: Vec<f64> = t.offdiag.clone();
        let mut u2 = vec![0.0; m.saturating_sub(2)];
        let mut mult = vec![0.0; m.saturating_sub(1)];
        let mut swapped = vec![false; m.saturating_sub(1)];
        for i in 0..m.saturating_sub(1) {
            let sub = t.offdiag[i];
            if sub.abs() > d[i].abs() {
                // Swap rows i and i+1.
                swapped[i] = true;
                let l = d[i] / sub;
                mult[i] = l;
                let old_up = up[i];
                d[i] = sub;
                up[i] = d[i + 1];
                d[i + 1] = old_up - l * up[i];
                if i + 2 < m {
                    u2[i] = up[i + 1];
                    up[i + 1] *= -l;
                }
            } else {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let l = sub / d[i];
                mult[i] = l;
                d[i + 1] -= l * up[i];
            }
        }
        if d[m - 1] == 0.0 {
            d[m - 1] = tiny;
        }
        for x in d.iter_mut() {
            if *x == 0.0 {
                *x = tiny;
            }
        }
        Self { u0: d, u1: up, u2, mult, swapped }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.u0.len();
        let mut y = rhs.to_vec();
        for i in 0..m.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.mult[i] * y[i];
        }
        let mut x = vec![0.0; m];
        for i in (0..m).rev() {
            let mut s = y[i];
            if i + 1 < m {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < m {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
            if !x[i].is_finite() {
                // Overflow from an exactly singular shift: rescale and carry on.
                let scale = f64::MAX.sqrt();
                x[i] = s.signum() * scale;
            }
        }
        x
    }
}

/// Full eigendecomposition of a symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagEigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[row][col]`: column `col` is the unit eigenvector of `values[col]`.
    pub vectors: Vec<Vec<f64>>,
}

const QL_MAX_SWEEPS: usize = 60;

/// Implicit QL with Wilkinson-type shifts; eigenvectors accumulated from the identity.
pub fn symmetric_eigen(t: &SymTridiag) -> Result<TridiagEigen> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = t.dim();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(0.0);
    let mut z = vec![vec![0.0; n]; n];
    for (i, row) in z.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let mut total = 0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence { iterations: total });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&j| d[j]).collect();
    let vectors = z.iter().map(|row| order.iter().map(|&j| row[j]).collect()).collect();
    Ok(TridiagEigen { values, vectors })
}

/// All eigenvalues in ascending order by repeated Sturm bisection.
pub fn eigenvalues_bisection(t: &SymTridiag) -> Result<Vec<f64>> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let m = t.dim();
    let (glo, ghi) = t.gershgorin();
    let pad = 4.0 * f64::EPSILON * t.norm_inf().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(m);
    for idx in 0..m {
        let (mut lo, mut hi) = (glo - pad, ghi + pad);
        for _ in 0..MAX_BISECTION {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if t.count_below(mid) <= idx {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}
