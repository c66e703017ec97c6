//! Complex one-sided Jacobi SVD.
//!
//! Columns of a working copy `B = A·V` are orthogonalized pairwise by unitary
//! 2×2 rotations until every pair satisfies `|b_pᴴ b_q| ≤ ε·‖b_p‖‖b_q‖`.
//! Then `σ_j = ‖b_j‖`, `u_j = b_j / σ_j`. Wide inputs are handled through
//! the adjoint. The factorization is thin: `left` is m×k, `right` is n×k with
//! `k = min(m, n)`, and both have orthonormal columns (null directions of
//! `left` are completed by Gram-Schmidt).

use super::dense::{CMat, C64, ONE, ZERO};
use super::tol::Tol;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left: CMat,
    pub sigma: Vec<f64>,
    pub right: CMat,
}

impl SvdFactors {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above the tolerance cutoff.
    pub fn rank(&self, tol: &Tol) -> usize {
        let cutoff = tol.rank_cutoff(self.sigma_max(), self.left.rows(), self.right.rows());
        self.sigma.iter().take_while(|&&s| s > cutoff).count()
    }

    /// `left·diag(sigma)·right*`.
    pub fn reconstruct(&self) -> CMat {
        let scaled = CMat::from_fn(self.left.rows(), self.sigma.len(), |i, j| {
            self.left[(i, j)] * self.sigma[j]
        });
        &scaled * &self.right.adjoint()
    }
}

pub fn svd(a: &CMat) -> Result<SvdFactors> {
    if !a.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    if a.rows() < a.cols() {
        let f = jacobi(&a.adjoint()).ok_or(Error::SvdNoConvergence {
            rows: a.rows(),
            cols: a.cols(),
            sweeps: MAX_SWEEPS,
        })?;
        return Ok(SvdFactors {
            left: f.right,
            sigma: f.sigma,
            right: f.left,
        });
    }
    jacobi(a).ok_or(Error::SvdNoConvergence {
        rows: a.rows(),
        cols: a.cols(),
        sweeps: MAX_SWEEPS,
    })
}

pub fn rank(a: &CMat, tol: &Tol) -> Result<usize> {
    Ok(svd(a)?.rank(tol))
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(a: &CMat) -> Result<f64> {
    Ok(svd(a)?.sigma_max())
}

// Columns are kept as separate vectors; every rotation touches two of them.
fn jacobi(a: &CMat) -> Option<SvdFactors> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut b: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();
    let mut norms: Vec<f64> = b.iter().map(|c| norm_sqr(c)).collect();
    let eps = f64::EPSILON * (m as f64).sqrt();
    // columns below round-off of the whole matrix carry no information; their
    // pairs are left alone, or the noise in them keeps the sweep from settling
    let negligible = (f64::EPSILON * norms.iter().sum::<f64>().sqrt()).powi(2);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let gamma = dot(&b[p], &b[q]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut b, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
                norms[p] = norm_sqr(&b[p]);
                norms[q] = norm_sqr(&b[q]);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return None;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = norms
        .iter()
        .map(|&x| if x <= negligible { 0.0 } else { x.sqrt() })
        .collect();
    order.sort_by(|&i, &j| sig[j].total_cmp(&sig[i]));

    let mut left = CMat::zeros(m, n);
    let mut right = CMat::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let mut filled = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = sig[j];
        sigma.push(s);
        right.set_column(k, &v[j]);
        if s > 0.0 {
            let col: Vec<C64> = b[j].iter().map(|z| z / s).collect();
            left.set_column(k, &col);
            filled.push(true);
        } else {
            filled.push(false);
        }
    }
    complete_orthonormal(&mut left, &filled);
    Some(SvdFactors { left, sigma, right })
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

// [x_p, x_q] ← [c·x_p − s·φ·x_q, s·x_p + c·φ·x_q] with φ = e^{-i arg γ}.
fn rotate(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let (head, tail) = cols.split_at_mut(q);
    let xp = &mut head[p];
    let xq = &mut tail[0];
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bq = *b * phase;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

/// Fill columns marked `false` with unit vectors orthogonal to the rest.
fn complete_orthonormal(u: &mut CMat, filled: &[bool]) {
    let m = u.rows();
    let mut basis: Vec<Vec<C64>> = filled
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(j, _)| u.column(j))
        .collect();
    let mut candidate = 0;
    for (j, &f) in filled.iter().enumerate() {
        if f {
            continue;
        }
        loop {
            assert!(
                candidate < m,
                "orthonormal completion ran out of candidates"
            );
            let mut w: Vec<C64> = (0..m)
                .map(|i| if i == candidate { ONE } else { ZERO })
                .collect();
            candidate += 1;
            // two passes of Gram-Schmidt
            for _ in 0..2 {
                for e in &basis {
                    let proj = dot(e, &w);
                    for (wi, ei) in w.iter_mut().zip(e) {
                        *wi -= proj * ei;
                    }
                }
            }
            let nrm = norm_sqr(&w).sqrt();
            if nrm > 1e-8 {
                for wi in w.iter_mut() {
                    *wi /= nrm;
                }
                u.set_column(j, &w);
                basis.push(w);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sample::{sample, SampleKind};

    fn orthonormality_defect(q: &CMat) -> f64 {
        (&(&q.adjoint() * q) - &CMat::identity(q.cols())).fro_norm()
    }

    #[test]
    fn diagonal_input() {
        let f = svd(&CMat::diag(&[3.0, 1.0])).unwrap();
        assert!((f.sigma[0] - 3.0).abs() < 1e-15 && (f.sigma[1] - 1.0).abs() < 1e-15);
        let f = svd(&CMat::diag(&[1.0, 3.0])).unwrap();
        assert_eq!(f.sigma, vec![3.0, 1.0]);
    }

    #[test]
    fn zero_matrix() {
        let f = svd(&CMat::zeros(2, 2)).unwrap();
        assert_eq!(f.sigma, vec![0.0, 0.0]);
        assert!(orthonormality_defect(&f.left) < 1e-15);
        assert!(orthonormality_defect(&f.right) < 1e-15);
    }

    #[test]
    fn ginibre_reconstruction() {
        for seed in 0..20 {
            let a = sample(SampleKind::Ginibre, 4, seed).unwrap();
            let f = svd(&a).unwrap();
            let resid = (&f.reconstruct() - &a).fro_norm();
            assert!(resid <= 1e-12 * f.sigma_max(), "seed {seed}: {resid}");
            assert!(orthonormality_defect(&f.left) < 1e-12);
            assert!(orthonormality_defect(&f.right) < 1e-12);
            assert!(f.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = sample(SampleKind::Rank(2), 5, 3).unwrap();
        let tall = CMat::vstack(&[&a, &a.submatrix(0, 0, 2, 5)]);
        for m in [a.clone(), tall.clone(), tall.adjoint()] {
            let f = svd(&m).unwrap();
            let resid = (&f.reconstruct() - &m).fro_norm();
            assert!(resid <= 1e-12 * f.sigma_max());
            assert!(orthonormality_defect(&f.left) < 1e-12);
            assert!(orthonormality_defect(&f.right) < 1e-12);
            assert_eq!(f.rank(&Tol::default()), 2);
        }
    }

    #[test]
    fn zero_row_converges() {
        // one column collapses to round-off during the sweep
        let mut rng = crate::matcore::sample::stream(5, &[]);
        for _ in 0..200 {
            let mut a = crate::matcore::sample::ginibre_with(&mut rng, 4, 4);
            for j in 0..4 {
                a[(2, j)] = ZERO;
            }
            let f = svd(&a).unwrap();
            assert_eq!(f.rank(&Tol::default()), 3);
            assert!(orthonormality_defect(&f.left) < 1e-12);
            assert!((&f.reconstruct() - &a).fro_norm() < 1e-12 * a.fro_norm());
        }
    }

    #[test]
    fn rank_examples() {
        let tol = Tol::default();
        assert_eq!(rank(&CMat::diag(&[1.0, 0.0]), &tol).unwrap(), 1);
        // 1e-15 is below the cutoff 1e-12·1·2
        assert_eq!(rank(&CMat::diag(&[1e-15, 1.0]), &tol).unwrap(), 1);
        assert_eq!(rank(&CMat::identity(3), &tol).unwrap(), 3);
        assert_eq!(rank(&CMat::zeros(3, 3), &tol).unwrap(), 0);
    }

    #[test]
    fn spectral_norm_of_unitary_is_one() {
        let u = sample(SampleKind::Unitary, 6, 11).unwrap();
        assert!((spectral_norm(&u).unwrap() - 1.0).abs() < 1e-12);
    }
}
