//! Moore-Penrose, group and inner inverses.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{inverse, svd, CMat, Tol};

/// Frobenius residuals of the four Penrose equations, each divided by
/// `max(1, ‖a‖_F)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenroseResiduals {
    /// `‖a g a − a‖`
    pub r1: f64,
    /// `‖g a g − g‖`
    pub r2: f64,
    /// `‖(a g)* − a g‖`
    pub r3: f64,
    /// `‖(g a)* − g a‖`
    pub r4: f64,
}

impl PenroseResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3).max(self.r4)
    }

    /// Accepted as a Moore-Penrose inverse of `a` (with `‖a‖_F = norm`).
    pub fn accepts(&self, norm: f64, tol: &Tol) -> bool {
        self.max() <= tol.threshold(norm)
    }
}

/// Moore-Penrose inverse from the SVD. Singular values at or below the rank
/// cutoff are treated as zero, so the result jumps at rank drops.
pub fn pinv(a: &CMat, tol: &Tol) -> Result<CMat> {
    let f = svd(a)?;
    let r = f.rank(tol);
    let (m, n) = a.shape();
    // right_r · Σ_r⁻¹ · left_r*
    let scaled = CMat::from_fn(n, r, |i, j| f.right[(i, j)] / f.sigma[j]);
    let left_r = CMat::from_fn(m, r, |i, j| f.left[(i, j)]);
    if r == 0 {
        return Ok(CMat::zeros(n, m));
    }
    Ok(&scaled * &left_r.adjoint())
}

/// Group inverse `a♯`, or `None` when `a` is not group invertible.
///
/// Existence is decided by `rank(a²) = rank(a)`. With the full-rank
/// factorization `a = F·G` (`F = U_r Σ_r`, `G = V_r*`), `a♯ = F (GF)⁻² G`.
/// When `GF` is numerically singular (condition number above `1/rank_rel`)
/// the answer is also `None`.
pub fn group_inverse(a: &CMat, tol: &Tol) -> Result<Option<CMat>> {
    a.ensure_square("group_inverse")?;
    let f = svd(a)?;
    let r = f.rank(tol);
    if r == 0 {
        return Ok(Some(CMat::zeros(a.rows(), a.cols())));
    }
    if crate::matcore::rank(&(a * a), tol)? != r {
        return Ok(None);
    }
    let n = a.rows();
    let ff = CMat::from_fn(n, r, |i, j| f.left[(i, j)] * f.sigma[j]);
    let g = CMat::from_fn(r, n, |i, j| f.right[(j, i)].conj());
    let gf = &g * &ff;
    let gf_svd = svd(&gf)?;
    let smin = gf_svd.sigma[r - 1];
    if smin == 0.0 || gf_svd.sigma_max() / smin > 1.0 / tol.rank_rel {
        return Ok(None);
    }
    let gfi = match inverse(&gf) {
        Ok(m) => m,
        Err(Error::Singular { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let gfi2 = &gfi * &gfi;
    Ok(Some(&(&ff * &gfi2) * &g))
}

/// Inner inverse `b⁻ = b† + v − b†·b·v·b·b†`. Every inner inverse of `b`
/// has this form for some `v`; `v = 0` gives `b†`.
pub fn inner_inverse(b: &CMat, v: &CMat, tol: &Tol) -> Result<CMat> {
    if v.shape() != (b.cols(), b.rows()) {
        return Err(Error::ShapeMismatch {
            op: "inner_inverse",
            left: (b.cols(), b.rows()),
            right: v.shape(),
        });
    }
    let bp = pinv(b, tol)?;
    let p = &bp * b;
    let q = b * &bp;
    Ok(&(&bp + v) - &(&(&p * v) * &q))
}

pub fn penrose_residuals(a: &CMat, g: &CMat) -> Result<PenroseResiduals> {
    if g.shape() != (a.cols(), a.rows()) {
        return Err(Error::ShapeMismatch {
            op: "penrose_residuals",
            left: (a.cols(), a.rows()),
            right: g.shape(),
        });
    }
    let scale = a.fro_norm().max(1.0);
    let ag = a * g;
    let ga = g * a;
    Ok(PenroseResiduals {
        r1: (&(&ag * a) - a).fro_norm() / scale,
        r2: (&(&ga * g) - g).fro_norm() / scale,
        r3: (&ag.adjoint() - &ag).fro_norm() / scale,
        r4: (&ga.adjoint() - &ga).fro_norm() / scale,
    })
}
