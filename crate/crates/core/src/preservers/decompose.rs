use serde::Serialize;

use super::{canonical_super, LinearMap};
use crate::error::{Error, Result};
use crate::matcore::{inverse, CMat, Tol, C64};
use crate::structure::scalar_part;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    Iso,
    AntiIso,
    Neither,
}

/// `T = h·S` with `hh* = h*h = λI` and `S` a *-isomorphism or
/// *-anti-isomorphism, when that structure is present.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub h: CMat,
    /// Scalar of `hh*`; the canonical form has scale `√lambda`.
    pub lambda: f64,
    /// `h/√λ`.
    pub unitary_part: CMat,
    pub flavor: Flavor,
    /// `U` with `S(x) = U x U*` (or `U xᵀ U*`), first entry real positive.
    pub inner: Option<CMat>,
    /// `T(x) = scale·U_c·x·V_c` (with `xᵀ` for the anti flavor).
    pub canonical: Option<(f64, CMat, CMat)>,
    pub residuals: Vec<(&'static str, f64)>,
}

impl DecompositionReport {
    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
    }
}

fn max_norm(mats: impl Iterator<Item = f64>) -> f64 {
    mats.fold(0.0, f64::max)
}

/// Factor a bijective diamond preserver of `M_n`.
///
/// `h = T(I)`, `λ` = mean diagonal of `hh*`, `S = h⁻¹·T`. The flavor is
/// read off products of matrix units: `S(E_ij E_kl)` against
/// `S(E_ij) S(E_kl)` (iso) and `S(E_kl) S(E_ij)` (anti), together with
/// `S(E_ji) = S(E_ij)*`. `U` is rebuilt column by column from
/// `u₁ ∝ S(E₁₁)v` and `uᵢ = S(E_i1)u₁` (iso) or `S(E_1i)u₁` (anti).
pub fn decompose_preserver(t: &LinearMap, tol: &Tol) -> Result<DecompositionReport> {
    if !t.is_endo() {
        return Err(Error::InvalidArgument(
            "decomposition needs an endomorphism of M_n".into(),
        ));
    }
    inverse(t.matrix()).map_err(|_| Error::Singular {
        op: "decompose_preserver",
    })?;
    let n = t.dim();
    let id = CMat::identity(n);
    let h = t.apply(&id)?;
    let hh = &h * &h.adjoint();
    let lambda = hh.trace().re / n as f64;
    let mut residuals = vec![
        ("hh_scalar", (&hh - &id.scale_real(lambda)).fro_norm()),
        ("h_normal", (&(&h.adjoint() * &h) - &hh).fro_norm()),
    ];
    let scalar =
        scalar_part(&hh, tol).is_some() && residuals[1].1 <= tol.scalar() * lambda * n as f64;
    let unitary_part = if lambda > 0.0 {
        h.scale_real(1.0 / lambda.sqrt())
    } else {
        h.clone()
    };
    let neither = |residuals| DecompositionReport {
        h: h.clone(),
        lambda,
        unitary_part: unitary_part.clone(),
        flavor: Flavor::Neither,
        inner: None,
        canonical: None,
        residuals,
    };
    if !scalar {
        return Ok(neither(residuals));
    }

    let hinv = inverse(&h)?;
    // s[i][j] = S(E_ij)
    let s: Vec<Vec<CMat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Ok(&hinv * &t.apply(&CMat::unit(n, i, j))?))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let scale = max_norm(s.iter().flatten().map(CMat::fro_norm));
    let thr = tol.threshold(scale * scale);
    let (mut iso, mut anti, mut star) = (0.0f64, 0.0f64, 0.0f64);
    let zero = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            star = star.max((&s[j][i] - &s[i][j].adjoint()).fro_norm());
            for k in 0..n {
                for l in 0..n {
                    // E_ij E_kl = δ_jk E_il
                    let prod = if j == k { &s[i][l] } else { &zero };
                    iso = iso.max((prod - &(&s[i][j] * &s[k][l])).fro_norm());
                    anti = anti.max((prod - &(&s[k][l] * &s[i][j])).fro_norm());
                }
            }
        }
    }
    residuals.extend([("star", star), ("iso", iso), ("anti", anti)]);
    let flavor = if star > tol.threshold(scale) {
        Flavor::Neither
    } else if iso <= thr {
        Flavor::Iso
    } else if anti <= thr {
        Flavor::AntiIso
    } else {
        Flavor::Neither
    };
    if flavor == Flavor::Neither {
        return Ok(neither(residuals));
    }

    // u₁: the largest column of the rank-one projection S(E₁₁)
    let e11 = &s[0][0];
    let best = (0..n)
        .max_by(|&x, &y| {
            let nx: f64 = e11.column(x).iter().map(|z| z.norm_sqr()).sum();
            let ny: f64 = e11.column(y).iter().map(|z| z.norm_sqr()).sum();
            nx.total_cmp(&ny)
        })
        .expect("n ≥ 1");
    let mut u1 = e11.column(best);
    let norm = u1.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    u1.iter_mut().for_each(|z| *z /= norm);
    let mut u = CMat::zeros(n, n);
    let unit_from_first = |i: usize| match flavor {
        Flavor::Iso => &s[i][0],
        _ => &s[0][i],
    };
    for i in 0..n {
        u.set_column(i, &unit_from_first(i).matvec(&u1));
    }
    // phase gauge: first non-negligible entry of the first column real positive
    let col = u.column(0);
    let lead = col
        .iter()
        .find(|z| z.norm() > 1e-8)
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let u = u.scale(lead.conj() / lead.norm());

    let transpose = flavor == Flavor::AntiIso;
    let cu = &unitary_part * &u;
    let cv = u.adjoint();
    let c = lambda.sqrt();
    let rebuilt = canonical_super(c, &cu, &cv, transpose);
    let recon = (&rebuilt - t.matrix()).fro_norm() / t.matrix().fro_norm().max(1.0);
    residuals.push(("unitary", (&(&u.adjoint() * &u) - &id).fro_norm()));
    residuals.push(("reconstruction", recon));
    Ok(DecompositionReport {
        h,
        lambda,
        unitary_part,
        flavor,
        inner: Some(u),
        canonical: Some((c, cu, cv)),
        residuals,
    })
}

/// `min_φ ‖x − e^{iφ} y‖_F` for `|φ| = 1`.
pub fn phase_distance(x: &CMat, y: &CMat) -> f64 {
    let ip: C64 = y
        .as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let phase = if ip.norm() > 0.0 {
        ip / ip.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    (x - &y.scale(phase)).fro_norm()
}
