//! The four orthonormal polynomial families and their measures.
//!
//! Every family carries two equivalent three-term recurrences: the one for
//! multiplication by `x`,
//!
//! ```text
//! x p_k = alpha_k p_{k+1} + beta_k p_k + gamma_k p_{k-1}
//! ```
//!
//! and the one for multiplication by the degree-one polynomial `P1`,
//!
//! ```text
//! P1 p_k = a_k p_{k+1} + b_k p_k + c_k p_{k-1},   c_k = a_{k-1}.
//! ```
//!
//! `P1` is affine in `x`, so one determines the other. The `P1` coefficients
//! are the closed forms below; the `x` coefficients are derived from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_binomial, ln_gamma_fn};

/// Scalar field of a projective space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// `sigma` in `alpha = sigma (n - 1) - 1`, `beta = sigma - 1`.
    pub fn sigma(self) -> f64 {
        match self {
            Field::Real => 0.5,
            Field::Complex => 1.0,
            Field::Quaternion => 2.0,
        }
    }
}

/// Identifies a metric space together with its polynomial family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Binary Hamming space of length `n`; normalized Krawtchouk polynomials.
    Hamming { n: u32 },
    /// Binary Johnson space of length `n` and weight `w <= n/2`; normalized Hahn polynomials.
    Johnson { n: u32, w: u32 },
    /// Unit sphere in `R^n`; normalized Gegenbauer polynomials.
    Sphere { n: u32 },
    /// Projective space over `field` of dimension `n - 1`; normalized Jacobi polynomials.
    Projective { n: u32, field: Field },
    /// Jacobi polynomials with arbitrary parameters, treated like a projective space.
    Jacobi { alpha: f64, beta: f64 },
}

/// Coefficients of both three-term recurrences at one degree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceCoeffs {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Normalized orthogonality measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "support", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// Point masses on an integer grid.
    Discrete { points: Vec<f64>, weights: Vec<f64> },
    /// Density `normalizer · (1 − x)^exp_right · (1 + x)^exp_left` on `[-1, 1]`.
    Continuous { lower: f64, upper: f64, exp_right: f64, exp_left: f64, normalizer: f64 },
}

impl MeasureSpec {
    pub fn density(&self, x: f64) -> f64 {
        match self {
            MeasureSpec::Discrete { points, weights } => {
                points.iter().zip(weights).find(|(p, _)| **p == x).map_or(0.0, |(_, w)| *w)
            }
            MeasureSpec::Continuous { lower, upper, exp_right, exp_left, normalizer } => {
                if x < *lower || x > *upper {
                    return 0.0;
                }
                normalizer * (1.0 - x).powf(*exp_right) * (1.0 + x).powf(*exp_left)
            }
        }
    }
}

/// A validated family: the handle every computation takes.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    spec: FamilySpec,
}

const HAHN_NORM_TOLERANCE: f64 = 1e-6;

impl Family {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        match spec {
            FamilySpec::Hamming { n } => {
                if n == 0 {
                    return Err(Error::InvalidFamily("Hamming length n must be positive".into()));
                }
            }
            FamilySpec::Johnson { n, w } => {
                if n < 2 || w == 0 {
                    return Err(Error::InvalidFamily(format!("Johnson needs n >= 2 and w >= 1, got n = {n}, w = {w}")));
                }
                if w > n {
                    return Err(Error::InvalidFamily(format!("Johnson weight w = {w} exceeds n = {n}")));
                }
                if 2 * w > n {
                    return Err(Error::JohnsonWeightTooLarge { n, w, complement: n - w });
                }
            }
            FamilySpec::Sphere { n } | FamilySpec::Projective { n, .. } => {
                if n < 3 {
                    return Err(Error::InvalidFamily(format!("dimension n must be at least 3, got {n}")));
                }
            }
            FamilySpec::Jacobi { alpha, beta } => {
                if !(alpha.is_finite() && beta.is_finite()) || alpha <= -1.0 || beta <= -1.0 || alpha < beta {
                    return Err(Error::InvalidFamily(format!(
                        "Jacobi parameters need alpha >= beta > -1, got alpha = {alpha}, beta = {beta}"
                    )));
                }
            }
        }
        let family = Self { spec };
        if matches!(spec, FamilySpec::Johnson { .. }) {
            family.check_hahn_norms()?;
        }
        Ok(family)
    }

    pub fn hamming(n: u32) -> Result<Self> {
        Self::new(FamilySpec::Hamming { n })
    }

    pub fn johnson(n: u32, w: u32) -> Result<Self> {
        Self::new(FamilySpec::Johnson { n, w })
    }

    pub fn sphere(n: u32) -> Result<Self> {
        Self::new(FamilySpec::Sphere { n })
    }

    pub fn projective(n: u32, field: Field) -> Result<Self> {
        Self::new(FamilySpec::Projective { n, field })
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(FamilySpec::Jacobi { alpha, beta })
    }

    pub fn spec(&self) -> FamilySpec {
        self.spec
    }

    /// Length or dimension `n`, where the family has one.
    pub fn n(&self) -> Option<u32> {
        match self.spec {
            FamilySpec::Hamming { n }
            | FamilySpec::Johnson { n, .. }
            | FamilySpec::Sphere { n }
            | FamilySpec::Projective { n, .. } => Some(n),
            FamilySpec::Jacobi { .. } => None,
        }
    }

    /// Jacobi parameters `(alpha, beta)` for projective families.
    pub fn jacobi_params(&self) -> Option<(f64, f64)> {
        match self.spec {
            FamilySpec::Projective { n, field } => {
                let s = field.sigma();
                Some((s * (n as f64 - 1.0) - 1.0, s - 1.0))
            }
            FamilySpec::Jacobi { alpha, beta } => Some((alpha, beta)),
            _ => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.spec, FamilySpec::Hamming { .. } | FamilySpec::Johnson { .. })
    }

    /// Highest degree in the family (the support size minus one), `None` for continuous families.
    pub fn max_degree(&self) -> Option<usize> {
        match self.spec {
            FamilySpec::Hamming { n } => Some(n as usize),
            FamilySpec::Johnson { w, .. } => Some(w as usize),
            _ => None,
        }
    }

    pub fn check_degree(&self, k: usize) -> Result<()> {
        match self.max_degree() {
            Some(max) if k > max => Err(Error::DegreeOutOfRange { k, max }),
            _ => Ok(()),
        }
    }

    /// `P1(x) = slope · x + intercept`.
    pub fn p1_affine(&self) -> (f64, f64) {
        match self.spec {
            FamilySpec::Hamming { n } => (-2.0, n as f64),
            FamilySpec::Johnson { n, w } => {
                let (n, w) = (n as f64, w as f64);
                (-n / (w * (n - w)), 1.0)
            }
            FamilySpec::Sphere { .. } => (1.0, 0.0),
            FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
                let (al, be) = self.jacobi_params().unwrap();
                (0.5 * (al + be + 2.0), 0.5 * (al - be))
            }
        }
    }

    pub fn p1_value(&self, x: f64) -> f64 {
        let (slope, intercept) = self.p1_affine();
        slope * x + intercept
    }

    /// Inverse of `P1`.
    pub fn p1_inverse(&self, y: f64) -> f64 {
        let (slope, intercept) = self.p1_affine();
        (y - intercept) / slope
    }

    /// `tau(0)`, the image of distance zero.
    pub fn tau0(&self) -> f64 {
        match self.spec {
            FamilySpec::Hamming { .. } | FamilySpec::Johnson { .. } => 0.0,
            _ => 1.0,
        }
    }

    /// The segment `[a, b]` carrying the measure.
    pub fn support_interval(&self) -> (f64, f64) {
        match self.spec {
            FamilySpec::Hamming { n } => (0.0, n as f64),
            FamilySpec::Johnson { w, .. } => (0.0, w as f64),
            _ => (-1.0, 1.0),
        }
    }

    /// Integer support points of a discrete family.
    pub fn support_points(&self) -> Option<Vec<f64>> {
        self.max_degree().map(|m| (0..=m).map(|i| i as f64).collect())
    }

    /// Map a distance to the polynomial variable.
    ///
    /// Hamming: identity on `{0..n}`. Johnson: `d/2` for even Hamming distances in
    /// `{0, 2, .., 2w}`. Sphere: `1 − d²/2` on `[0, 2]`. Projective: `2(1 − d²/2)² − 1`
    /// on `[0, √2]`.
    pub fn tau(&self, d: f64) -> Result<f64> {
        let bad = |what: &str| Err(Error::DistanceOutOfRange(format!("{what}, got d = {d}")));
        if !d.is_finite() {
            return bad("distance must be finite");
        }
        match self.spec {
            FamilySpec::Hamming { n } => {
                if d.fract() != 0.0 || d < 0.0 || d > n as f64 {
                    return bad(&format!("Hamming distance must be an integer in 0..={n}"));
                }
                Ok(d)
            }
            FamilySpec::Johnson { w, .. } => {
                if d.fract() != 0.0 || d < 0.0 || d > 2.0 * w as f64 || (d as u64) % 2 == 1 {
                    return bad(&format!("Johnson distance must be an even integer in 0..={}", 2 * w));
                }
                Ok(d / 2.0)
            }
            FamilySpec::Sphere { .. } => {
                if !(0.0..=2.0).contains(&d) {
                    return bad("sphere distance must lie in [0, 2]");
                }
                Ok(1.0 - d * d / 2.0)
            }
            FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
                if !(0.0..=std::f64::consts::SQRT_2).contains(&d) {
                    return bad("projective distance must lie in [0, sqrt 2]");
                }
                let c = 1.0 - d * d / 2.0;
                Ok(2.0 * c * c - 1.0)
            }
        }
    }

    /// `a_k`, unchecked. Zero at and beyond the top degree of a discrete family.
    pub(crate) fn a(&self, k: usize) -> f64 {
        let kf = k as f64;
        match self.spec {
            FamilySpec::Hamming { n } => {
                if k >= n as usize {
                    0.0
                } else {
                    ((kf + 1.0) * (n as f64 - kf)).sqrt()
                }
            }
            FamilySpec::Johnson { n, w } => {
                if k >= w as usize {
                    return 0.0;
                }
                let (n, w) = (n as f64, w as f64);
                let lead = n * (w - kf) * (n - w - kf) / (w * (n - w) * (n - 2.0 * kf));
                let root = ((kf + 1.0) * (n - kf + 1.0) / ((n - 2.0 * kf + 1.0) * (n - 2.0 * kf - 1.0))).sqrt();
                lead * root
            }
            FamilySpec::Sphere { n } => {
                let n = n as f64;
                ((n + kf - 2.0) * (kf + 1.0) / ((n + 2.0 * kf) * (n + 2.0 * kf - 2.0))).sqrt()
            }
            FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
                let (al, be) = self.jacobi_params().unwrap();
                let s = al + be;
                let num = (kf + al + 1.0) * (kf + be + 1.0) * (kf + 1.0) * (kf + s + 1.0);
                let den = (2.0 * kf + s + 3.0) * (2.0 * kf + s + 1.0);
                (s + 2.0) / (2.0 * kf + s + 2.0) * (num / den).sqrt()
            }
        }
    }

    /// `b_k`, unchecked.
    pub(crate) fn b(&self, k: usize) -> f64 {
        let kf = k as f64;
        match self.spec {
            FamilySpec::Hamming { .. } | FamilySpec::Sphere { .. } => 0.0,
            FamilySpec::Johnson { n, w } => {
                if 2 * w == n || k == 0 {
                    return 0.0;
                }
                let (n, w) = (n as f64, w as f64);
                (n - 2.0 * w).powi(2) * kf * (n - kf + 1.0)
                    / (w * (n - w) * (n - 2.0 * kf) * (n - 2.0 * kf + 2.0))
            }
            FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
                if k == 0 {
                    return 0.0;
                }
                let (al, be) = self.jacobi_params().unwrap();
                let s = al + be;
                2.0 * (al - be) * kf * (kf + s + 1.0) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
            }
        }
    }

    /// Both recurrences at degree `k`.
    pub fn recurrence(&self, k: usize) -> Result<RecurrenceCoeffs> {
        self.check_degree(k)?;
        Ok(self.recurrence_unchecked(k))
    }

    pub(crate) fn recurrence_unchecked(&self, k: usize) -> RecurrenceCoeffs {
        let (slope, intercept) = self.p1_affine();
        let a = self.a(k);
        let b = self.b(k);
        let c = if k == 0 { 0.0 } else { self.a(k - 1) };
        RecurrenceCoeffs { k, a, b, c, alpha: a / slope, beta: (b - intercept) / slope, gamma: c / slope }
    }

    /// Normalized `p_k(x)` from the three-term recurrence, started at `p_0 = 1` (run from both ends at support points of discrete families).
    pub fn evaluate(&self, k: usize, x: f64) -> Result<f64> {
        self.check_degree(k)?;
        Ok(*self.evaluate_upto_unchecked(k, x).last().unwrap())
    }

    /// `p_0(x), ..., p_k(x)`.
    pub fn evaluate_upto(&self, k: usize, x: f64) -> Result<Vec<f64>> {
        self.check_degree(k)?;
        Ok(self.evaluate_upto_unchecked(k, x))
    }

    pub(crate) fn evaluate_upto_unchecked(&self, k: usize, x: f64) -> Vec<f64> {
        if self.is_support_point(x) {
            return self
                .ln_abs_on_support(k, x)
                .into_iter()
                .map(|(sign, ln)| if sign == 0.0 { 0.0 } else { sign * ln.exp() })
                .collect();
        }
        let mut out = Vec::with_capacity(k + 1);
        out.push(1.0);
        let (mut prev, mut cur) = (0.0, 1.0);
        for j in 0..k {
            let r = self.recurrence_unchecked(j);
            let next = ((x - r.beta) * cur - r.gamma * prev) / r.alpha;
            out.push(next);
            prev = cur;
            cur = next;
        }
        out
    }

    /// Same values as [`Family::evaluate`], obtained from the `P1`-recurrence instead.
    pub fn evaluate_via_p1(&self, k: usize, x: f64) -> Result<f64> {
        self.check_degree(k)?;
        let y = self.p1_value(x);
        let (mut prev, mut cur) = (0.0, 1.0);
        for j in 0..k {
            let (a, b, c) = (self.a(j), self.b(j), if j == 0 { 0.0 } else { self.a(j - 1) });
            let next = ((y - b) * cur - c * prev) / a;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// `(sign, ln|p_j(x)|)` for `j = 0..=k`, computed with rescaling so large degrees cannot overflow.
    pub fn ln_abs_evaluate_upto(&self, k: usize, x: f64) -> Result<Vec<(f64, f64)>> {
        self.check_degree(k)?;
        Ok(self.ln_abs_evaluate_upto_unchecked(k, x))
    }

    pub(crate) fn ln_abs_evaluate_upto_unchecked(&self, k: usize, x: f64) -> Vec<(f64, f64)> {
        if self.is_support_point(x) {
            return self.ln_abs_on_support(k, x);
        }
        scaled_recurrence(k, |j, cur, prev| {
            let r = self.recurrence_unchecked(j);
            ((x - r.beta) * cur - r.gamma * prev) / r.alpha
        })
    }

    fn is_support_point(&self, x: f64) -> bool {
        match self.max_degree() {
            Some(top) if self.is_discrete() => x.fract() == 0.0 && x >= 0.0 && x <= top as f64,
            _ => false,
        }
    }

    /// Values at a support point of a discrete family.
    ///
    /// There `(p_0(x), ..., p_N(x))` is an eigenvector of the full matrix `S_N`, and
    /// the forward recurrence loses accuracy once `|p_k(x)|` starts to decay. The
    /// sequence is run forward from `p_0` and backward from `p_N`, and the two are
    /// joined at the row whose residual is smallest.
    fn ln_abs_on_support(&self, k: usize, x: f64) -> Vec<(f64, f64)> {
        let top = self.max_degree().unwrap();
        let lam = self.p1_value(x);
        let off = |j: usize| if j < top { self.a(j) } else { 0.0 };
        let fwd = scaled_recurrence(top, |j, cur, prev| {
            let c = if j == 0 { 0.0 } else { off(j - 1) };
            ((lam - self.b(j)) * cur - c * prev) / off(j)
        });
        // Backward: index i of the run is degree top − i.
        let mut bwd = scaled_recurrence(top, |i, cur, prev| {
            let j = top - i;
            let a = if i == 0 { 0.0 } else { off(j) };
            ((lam - self.b(j)) * cur - a * prev) / off(j - 1)
        });
        bwd.reverse();
        let ratio = |v: &[(f64, f64)], num: usize, den: usize| v[num].0 * v[den].0 * (v[num].1 - v[den].1).exp();
        let mut twist = 0;
        let mut best = f64::INFINITY;
        for m in 0..=top {
            if fwd[m].0 == 0.0 || bwd[m].0 == 0.0 {
                continue;
            }
            let below = if m == 0 { 0.0 } else { off(m - 1) * ratio(&fwd, m - 1, m) };
            let above = if m == top { 0.0 } else { off(m) * ratio(&bwd, m + 1, m) };
            let diag = self.b(m) - lam;
            let scale = diag.abs() + below.abs() + above.abs();
            let rel = if scale > 0.0 { (diag + below + above).abs() / scale } else { 0.0 };
            if rel < best {
                best = rel;
                twist = m;
            }
        }
        let shift = fwd[twist].1 - bwd[twist].1;
        let flip = fwd[twist].0 * bwd[twist].0;
        (0..=k.min(top))
            .map(|i| if i <= twist { fwd[i] } else { (bwd[i].0 * flip, bwd[i].1 + shift) })
            .collect()
    }

    /// `ln|p_k(x)|` and its sign.
    pub fn ln_abs_evaluate(&self, k: usize, x: f64) -> Result<(f64, f64)> {
        self.ln_abs_evaluate_upto(k, x).map(|v| *v.last().unwrap())
    }

    /// Closed form of `ln p_k(tau0)^2`.
    ///
    /// Hamming `C(n,k)`; Johnson `(n−2k+1)/(n−k+1)·C(n,k)`; sphere `(n+2k−2)/(n−2)·C(n+k−3,k)`;
    /// Jacobi `(2k+α+β+1)/(α+β+1)·C(k+α,α)·C(k+α+β,k)/C(k+β,β)`.
    pub fn ln_p_tau0_sq(&self, k: usize) -> Result<f64> {
        self.check_degree(k)?;
        let kf = k as f64;
        Ok(match self.spec {
            FamilySpec::Hamming { n } => ln_binomial(n as f64, kf),
            FamilySpec::Johnson { n, .. } => {
                let n = n as f64;
                ((n - 2.0 * kf + 1.0) / (n - kf + 1.0)).ln() + ln_binomial(n, kf)
            }
            FamilySpec::Sphere { n } => {
                let n = n as f64;
                ((n + 2.0 * kf - 2.0) / (n - 2.0)).ln() + ln_binomial(n + kf - 3.0, kf)
            }
            FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
                let (al, be) = self.jacobi_params().unwrap();
                let s = al + be;
                ((2.0 * kf + s + 1.0) / (s + 1.0)).ln() + ln_binomial(kf + al, al) + ln_binomial(kf + s, kf)
                    - ln_binomial(kf + be, be)
            }
        })
    }

    /// `‖P_k^{α,β}‖²` under the normalized Jacobi measure (projective families only).
    pub fn jacobi_norm_sq(&self, k: usize) -> Option<f64> {
        let (al, be) = self.jacobi_params()?;
        let s = al + be;
        let kf = k as f64;
        let lg = ln_gamma_fn;
        let ln = (s + 1.0).ln() + lg(s + 1.0) + lg(kf + al + 1.0) + lg(kf + be + 1.0)
            - (2.0 * kf + s + 1.0).ln()
            - lg(al + 1.0)
            - lg(be + 1.0)
            - lg(kf + 1.0)
            - lg(kf + s + 1.0);
        Some(ln.exp())
    }

    /// Unnormalized Jacobi `P_k^{α,β}(x) = ‖P_k‖ · p_k(x)` (projective families only).
    pub fn evaluate_jacobi_unnormalized(&self, k: usize, x: f64) -> Option<f64> {
        let norm = self.jacobi_norm_sq(k)?.sqrt();
        Some(norm * self.evaluate_upto_unchecked(k, x)[k])
    }

    /// Surface constant `ω_n` with `∫(1 − x²)^{(n−3)/2} dx = ω_n / (n − 2)`.
    pub fn sphere_omega(n: u32) -> f64 {
        let n = n as f64;
        let ln_beta = 0.5 * std::f64::consts::PI.ln() + ln_gamma_fn((n - 1.0) / 2.0) - ln_gamma_fn(n / 2.0);
        (n - 2.0) * ln_beta.exp()
    }

    /// The normalized orthogonality measure.
    pub fn measure(&self) -> MeasureSpec {
        match self.spec {
            FamilySpec::Hamming { .. } | FamilySpec::Johnson { .. } => {
                let points = self.support_points().unwrap();
                let weights = self.ln_weights().iter().map(|l| l.exp()).collect();
                MeasureSpec::Discrete { points, weights }
            }
            FamilySpec::Sphere { n } => {
                let m = (n as f64 - 3.0) / 2.0;
                MeasureSpec::Continuous {
                    lower: -1.0,
                    upper: 1.0,
                    exp_right: m,
                    exp_left: m,
                    normalizer: (n as f64 - 2.0) / Self::sphere_omega(n),
                }
            }
            FamilySpec::Projective { .. } | FamilySpec::Jacobi { .. } => {
                let (al, be) = self.jacobi_params().unwrap();
                let s = al + be;
                let ln_c = (s + 1.0).ln() + ln_binomial(s, al) - (s + 1.0) * std::f64::consts::LN_2;
                MeasureSpec::Continuous { lower: -1.0, upper: 1.0, exp_right: al, exp_left: be, normalizer: ln_c.exp() }
            }
        }
    }

    /// `ln μ(i)` on the support of a discrete family (empty for continuous ones).
    pub(crate) fn ln_weights(&self) -> Vec<f64> {
        match self.spec {
            FamilySpec::Hamming { n } => {
                let n = n as f64;
                (0..=n as usize).map(|i| ln_binomial(n, i as f64) - n * std::f64::consts::LN_2).collect()
            }
            FamilySpec::Johnson { n, w } => {
                let (nf, wf) = (n as f64, w as f64);
                let total = ln_binomial(nf, wf);
                (0..=w as usize)
                    .map(|i| ln_binomial(wf, i as f64) + ln_binomial(nf - wf, i as f64) - total)
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Verify `Σ μ(i) p_k(i)² = 1` for every Hahn degree, so a normalization slip
    /// between the closed-form coefficients and the weight surfaces immediately.
    fn check_hahn_norms(&self) -> Result<()> {
        let w = self.max_degree().unwrap();
        let ln_mu = self.ln_weights();
        let mut norms = vec![0.0f64; w + 1];
        for (i, lm) in ln_mu.iter().enumerate() {
            for (k, (sign, lp)) in self.ln_abs_evaluate_upto_unchecked(w, i as f64).into_iter().enumerate() {
                if sign != 0.0 {
                    norms[k] += (2.0 * lp + lm).exp();
                }
            }
        }
        for (k, norm_sq) in norms.into_iter().enumerate() {
            if !((norm_sq - 1.0).abs() <= HAHN_NORM_TOLERANCE) {
                return Err(Error::NormalizationMismatch { k, norm_sq });
            }
        }
        Ok(())
    }
}

/// `(sign, ln|v_j|)` for `j = 0..=k` of the sequence `v_0 = 1`, `v_{-1} = 0`,
/// `v_{j+1} = step(j, v_j, v_{j-1})`, rescaled so it can neither overflow nor underflow.
fn scaled_recurrence(k: usize, step: impl Fn(usize, f64, f64) -> f64) -> Vec<(f64, f64)> {
    const BIG: f64 = 1e150;
    let mut out = Vec::with_capacity(k + 1);
    out.push((1.0, 0.0));
    let (mut prev, mut cur, mut shift) = (0.0f64, 1.0f64, 0.0f64);
    for j in 0..k {
        let mut next = step(j, cur, prev);
        prev = cur;
        let scale = next.abs().max(prev.abs());
        if scale > BIG || (scale < 1.0 / BIG && scale > 0.0) {
            next /= scale;
            prev /= scale;
            shift += scale.ln();
        }
        cur = next;
        out.push((if cur < 0.0 { -1.0 } else if cur > 0.0 { 1.0 } else { 0.0 }, cur.abs().ln() + shift));
    }
    out
}
