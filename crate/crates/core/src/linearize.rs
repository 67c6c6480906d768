//! Expansion of products `p_i p_j = Σ_k q_{i,j}^k p_k`.
//!
//! Discrete families sum exactly over their support; continuous ones use a Gauss
//! rule sized to integrate the triple product exactly. All products are formed
//! in the log domain so that large-degree Krawtchouk or Hahn values cannot
//! overflow against tiny weights.

use crate::error::{Error, Result};
use crate::family::Family;
use crate::spectral::{gauss_quadrature, nodes_for_degree};

/// Precomputed basis values on a set of nodes.
#[derive(Clone, Debug)]
pub struct Linearizer {
    family: Family,
    max_degree: usize,
    ln_weights: Vec<f64>,
    /// `table[node][m] = (sign, ln|p_m(node)|)`.
    table: Vec<Vec<(f64, f64)>>,
}

impl Linearizer {
    /// Ready to expand products of total degree up to `total_degree`, projected onto
    /// `p_0..p_total_degree`.
    pub fn new(family: &Family, total_degree: usize) -> Result<Self> {
        let (nodes, ln_weights, max_degree) = if family.is_discrete() {
            let top = family.max_degree().unwrap();
            (family.support_points().unwrap(), family.ln_weights(), top.min(total_degree))
        } else {
            // Triple products reach degree 2·total_degree.
            let rule = gauss_quadrature(family, nodes_for_degree(2 * total_degree))?;
            let ln_w = rule.weights.iter().map(|w| w.ln()).collect();
            (rule.nodes, ln_w, total_degree)
        };
        let table = nodes.iter().map(|&x| family.ln_abs_evaluate_upto_unchecked(max_degree, x)).collect();
        Ok(Self { family: family.clone(), max_degree, ln_weights, table })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Highest basis index available.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `q_{i,j}^k` for `k = 0..=max_k`. Degrees above the top of a discrete family give zero.
    pub fn coefficients(&self, i: usize, j: usize, max_k: usize) -> Result<Vec<f64>> {
        let top = self.family.max_degree();
        for d in [i, j] {
            if let Some(m) = top {
                if d > m {
                    return Err(Error::DegreeOutOfRange { k: d, max: m });
                }
            }
            if d > self.max_degree {
                return Err(Error::InvalidArgument(format!(
                    "linearizer sized for degree {} cannot expand p_{d}",
                    self.max_degree
                )));
            }
        }
        let kk = max_k.min(self.max_degree);
        if top.is_none() && i + j > self.max_degree {
            return Err(Error::InvalidArgument(format!(
                "product degree {} exceeds linearizer capacity {}",
                i + j,
                self.max_degree
            )));
        }
        let mut out = vec![0.0; max_k + 1];
        for (row, lw) in self.table.iter().zip(&self.ln_weights) {
            let (si, li) = row[i];
            let (sj, lj) = row[j];
            if si == 0.0 || sj == 0.0 {
                continue;
            }
            let base = li + lj + lw;
            for (k, slot) in out.iter_mut().enumerate().take(kk + 1) {
                let (sk, lk) = row[k];
                if sk != 0.0 {
                    *slot += si * sj * sk * (base + lk).exp();
                }
            }
        }
        Ok(out)
    }
}

/// `q_{i,j}^k = ⟨p_i p_j, p_k⟩` for `k = 0..=max_k`.
pub fn linearize(family: &Family, i: usize, j: usize, max_k: usize) -> Result<Vec<f64>> {
    let lin = Linearizer::new(family, (i + j).max(max_k))?;
    lin.coefficients(i, j, max_k)
}
