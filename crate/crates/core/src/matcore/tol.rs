use serde::{Deserialize, Serialize};

use super::dense::CMat;
use crate::error::Result;

/// Tolerance policy shared by every approximate predicate.
///
/// Residual tests accept when `‖r‖_F ≤ atol + rtol·scale`, where `scale` is
/// chosen per identity (norm of the argument, or its cube for cubic
/// identities). Numerical rank counts singular values above
/// `max(rank_rel·σ_max·max(rows, cols), atol)`; the `atol` floor makes
/// matrices of norm ≤ atol rank zero, consistent with [`approx_eq`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tol {
    pub atol: f64,
    pub rtol: f64,
    pub rank_rel: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Self {
            atol: 1e-9,
            rtol: 1e-9,
            rank_rel: 1e-12,
        }
    }
}

impl Tol {
    pub fn new(atol: f64, rtol: f64, rank_rel: f64) -> Self {
        Self {
            atol,
            rtol,
            rank_rel,
        }
    }

    /// Acceptance threshold for a residual whose natural size is `scale`.
    pub fn threshold(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale
    }

    /// Single scalar used where an invariant is phrased as "k·tol".
    pub fn scalar(&self) -> f64 {
        self.atol.max(self.rtol)
    }

    pub fn rank_cutoff(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        (self.rank_rel * sigma_max * rows.max(cols) as f64).max(self.atol)
    }
}

/// `‖a − b‖_F ≤ atol + rtol·max(‖a‖_F, ‖b‖_F)`.
pub fn approx_eq(a: &CMat, b: &CMat, tol: &Tol) -> Result<bool> {
    a.ensure_same_shape(b, "approx_eq")?;
    let scale = a.fro_norm().max(b.fro_norm());
    Ok((a - b).fro_norm() <= tol.threshold(scale))
}
