//! Rank-one elements and the structural side of the diamond order: minimal
//! and maximal elements, the projection characterization, invertibility
//! probes and multiplication by scalar multiples of unitaries.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geninv::pinv;
use crate::matcore::sample::{ginibre_with, sample_with, stream, Stream};
use crate::matcore::{approx_eq, rank, svd, BlockMat, CMat, SampleKind, Tol, C64};
use crate::orders::{diamond_lift, leq_diamond, Verdict};

const STRUCT_TAG: u64 = 0x5_7c7;

/// `u = c·r*` with `c` and `r` nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOne {
    pub column: Vec<C64>,
    pub row: Vec<C64>,
}

impl RankOne {
    pub fn new(column: Vec<C64>, row: Vec<C64>) -> Result<Self> {
        let nz = |v: &[C64]| v.iter().any(|z| z.norm() > 0.0);
        if !nz(&column) || !nz(&row) {
            return Err(Error::ZeroArgument { op: "RankOne::new" });
        }
        Ok(Self { column, row })
    }

    /// Factor a numerically rank-one matrix through its top singular pair.
    pub fn from_matrix(u: &CMat, tol: &Tol) -> Result<Self> {
        let f = svd(u)?;
        match f.rank(tol) {
            0 => Err(Error::ZeroArgument {
                op: "RankOne::from_matrix",
            }),
            1 => {
                let s = f.sigma[0];
                let column = (0..u.rows()).map(|i| f.left[(i, 0)] * s).collect();
                let row = (0..u.cols()).map(|i| f.right[(i, 0)]).collect();
                Ok(Self { column, row })
            }
            r => Err(Error::InvalidArgument(format!(
                "expected rank one, got rank {r}"
            ))),
        }
    }

    pub fn to_matrix(&self) -> CMat {
        CMat::from_fn(self.column.len(), self.row.len(), |i, j| {
            self.column[i] * self.row[j].conj()
        })
    }
}

/// `τ_u(x) = r*·x·c`, the scalar with `u x u = τ_u(x)·u`.
pub fn trace_functional(u: &RankOne, x: &CMat) -> Result<C64> {
    if x.shape() != (u.row.len(), u.column.len()) {
        return Err(Error::ShapeMismatch {
            op: "trace_functional",
            left: (u.column.len(), u.row.len()),
            right: x.shape(),
        });
    }
    let xc = x.matvec(&u.column);
    Ok(u.row.iter().zip(&xc).map(|(r, z)| r.conj() * z).sum())
}

/// Rank-one lower bound `u = a v a` with `v = w (a w)†`, for a rank-one `w`
/// with `a w ≠ 0`. Then `a v` is a rank-one projection and `u ◇≤ a`.
/// Returns `None` when `a w` vanishes.
pub fn minimal_below_with(a: &CMat, w: &CMat, tol: &Tol) -> Result<Option<RankOne>> {
    a.ensure_square("minimal_below")?;
    a.ensure_same_shape(w, "minimal_below")?;
    let aw = a * w;
    if aw.fro_norm() <= tol.threshold(a.fro_norm() * w.fro_norm()) {
        return Ok(None);
    }
    let v = w * &pinv(&aw, tol)?;
    let p = a * &v;
    let p_ok = approx_eq(&(&p * &p), &p, tol)? && approx_eq(&p.adjoint(), &p, tol)?;
    if !p_ok || rank(&p, tol)? != 1 {
        return Err(Error::InvalidArgument(
            "a·w(aw)† is not a rank-one projection".into(),
        ));
    }
    RankOne::from_matrix(&(&p * a), tol).map(Some)
}

/// [`minimal_below_with`] for random rank-one `w`, resampled until `aw ≠ 0`.
pub fn minimal_below(a: &CMat, tol: &Tol, seed: u64) -> Result<RankOne> {
    a.ensure_square("minimal_below")?;
    if a.fro_norm() <= tol.atol {
        return Err(Error::ZeroArgument {
            op: "minimal_below",
        });
    }
    let n = a.rows();
    let mut rng = stream(seed, &[STRUCT_TAG, 1, n as u64]);
    for _ in 0..64 {
        let w = &ginibre_with(&mut rng, n, 1) * &ginibre_with(&mut rng, 1, n);
        if let Some(u) = minimal_below_with(a, &w, tol)? {
            return Ok(u);
        }
    }
    Err(Error::ZeroArgument {
        op: "minimal_below",
    })
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// For a non-minimal `u`, a rank-one element strictly below it.
    pub strictly_below: Option<CMat>,
    /// Probes `v ≠ 0` with `v ◇≤ u` but `v ≉ u`. Empty whenever `u` is rank one.
    pub violations: Vec<usize>,
}

/// Minimal elements of `M_n \ {0}` under the diamond order are exactly the
/// rank-one matrices. The verdict is the rank test; probes are checked
/// against the order-theoretic meaning (anything nonzero below a rank-one
/// `u` equals `u`, within `100·tol`).
pub fn is_minimal_diamond(u: &CMat, probes: &[CMat], tol: &Tol) -> Result<MinimalityReport> {
    u.ensure_square("is_minimal_diamond")?;
    if u.fro_norm() <= tol.atol {
        return Err(Error::ZeroArgument {
            op: "is_minimal_diamond",
        });
    }
    let minimal = rank(u, tol)? == 1;
    let loose = Tol::new(100.0 * tol.atol, 100.0 * tol.rtol, tol.rank_rel);
    let mut violations = Vec::new();
    for (i, v) in probes.iter().enumerate() {
        if v.fro_norm() <= tol.atol {
            continue;
        }
        if leq_diamond(v, u, tol)?.holds() && !approx_eq(v, u, &loose)? {
            violations.push(i);
        }
    }
    let strictly_below = if minimal {
        None
    } else {
        Some(minimal_below(u, tol, 0)?.to_matrix())
    };
    Ok(MinimalityReport {
        minimal,
        strictly_below,
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct MaximalityReport {
    pub maximal: bool,
    /// For singular `a`, some `b ≠ a` with `a ◇≤ b`.
    pub strictly_above: Option<CMat>,
}

/// Maximal elements of `M_n` are the invertible matrices. A singular `a` is
/// strictly below `a + (I − aa†) x (I − a†a)` for generic `x`.
pub fn is_maximal_diamond(a: &CMat, tol: &Tol, seed: u64) -> Result<MaximalityReport> {
    a.ensure_square("is_maximal_diamond")?;
    let n = a.rows();
    if rank(a, tol)? == n {
        return Ok(MaximalityReport {
            maximal: true,
            strictly_above: None,
        });
    }
    let mut rng = stream(seed, &[STRUCT_TAG, 2, n as u64]);
    for _ in 0..16 {
        let x = ginibre_with(&mut rng, n, n);
        let b = diamond_lift(a, &x, tol)?;
        let distinct = (&b - a).fro_norm() > tol.threshold(a.fro_norm());
        if distinct && leq_diamond(a, &b, tol)?.holds() {
            return Ok(MaximalityReport {
                maximal: false,
                strictly_above: Some(b),
            });
        }
    }
    Err(Error::InvalidArgument(
        "no strictly larger element found for a singular matrix".into(),
    ))
}

/// Maximality in `⊕ M_{nᵢ}`, evaluated block by block. In finite dimension
/// this coincides with invertibility of the whole block matrix.
pub fn is_maximal_blocks(a: &BlockMat, tol: &Tol) -> Result<bool> {
    for b in a.blocks() {
        if rank(b, tol)? < b.rows() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p² = p = p*` within tolerance.
pub fn is_projection(p: &CMat, tol: &Tol) -> Result<bool> {
    p.ensure_square("is_projection")?;
    Ok(approx_eq(&(p * p), p, tol)? && approx_eq(&p.adjoint(), p, tol)?)
}

/// `p ◇≤ q` and `q − p ◇≤ q`. For a projection `q` this holds exactly when
/// `p` is a projection (below `q`); with `q = I` it characterizes
/// projections outright. Inapplicable when `q` is not a projection.
pub fn projection_characterization(p: &CMat, q: &CMat, tol: &Tol) -> Result<Verdict> {
    p.ensure_same_shape(q, "projection_characterization")?;
    if !is_projection(q, tol)? {
        return Ok(Verdict::Inapplicable);
    }
    let lower = leq_diamond(p, q, tol)?.holds();
    Ok(Verdict::from_bool(
        lower && leq_diamond(&(q - p), q, tol)?.holds(),
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRecord {
    pub i: usize,
    pub j: usize,
    /// `x = uu†a = E_ii·a` is nonzero and `x ◇≤ a`.
    pub left_ok: bool,
    /// `y = au†u = a·E_jj` is nonzero and `y ◇≤ a`.
    pub right_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeTranscript {
    pub invertible: bool,
    pub probes: Vec<ProbeRecord>,
    pub first_failure: Option<(usize, usize)>,
}

/// Matrix-unit probes `u = E_ij`: `a` is invertible iff every probe yields
/// nonzero `uu†a ◇≤ a` and `au†u ◇≤ a`. A singular `a` has a standard basis
/// vector outside its column (or row) space, which shows up as a failing
/// range inclusion or a vanishing product.
pub fn invertibility_probe(a: &CMat, tol: &Tol) -> Result<ProbeTranscript> {
    a.ensure_square("invertibility_probe")?;
    let n = a.rows();
    let thr = tol.threshold(a.fro_norm());
    // uu† = E_ii and u†u = E_jj, so the probe outcome factors over i and j
    let mut rows_ok = Vec::with_capacity(n);
    let mut cols_ok = Vec::with_capacity(n);
    for k in 0..n {
        let e = CMat::unit(n, k, k);
        let x = &e * a;
        rows_ok.push(x.fro_norm() > thr && leq_diamond(&x, a, tol)?.holds());
        let y = a * &e;
        cols_ok.push(y.fro_norm() > thr && leq_diamond(&y, a, tol)?.holds());
    }
    let mut probes = Vec::with_capacity(n * n);
    let mut first_failure = None;
    for (i, &left_ok) in rows_ok.iter().enumerate() {
        for (j, &right_ok) in cols_ok.iter().enumerate() {
            let rec = ProbeRecord {
                i,
                j,
                left_ok,
                right_ok,
            };
            if first_failure.is_none() && !(rec.left_ok && rec.right_ok) {
                first_failure = Some((i, j));
            }
            probes.push(rec);
        }
    }
    Ok(ProbeTranscript {
        invertible: first_failure.is_none(),
        probes,
        first_failure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `a ↦ u a`, governed by `u*u`.
    Left,
    /// `a ↦ a u`, governed by `u u*`.
    Right,
}

impl Side {
    fn mul(self, u: &CMat, a: &CMat) -> CMat {
        match self {
            Side::Left => u * a,
            Side::Right => a * u,
        }
    }

    /// `u*u` for left multiplication, `uu*` for right.
    fn gram(self, u: &CMat) -> CMat {
        match self {
            Side::Left => &u.adjoint() * u,
            Side::Right => u * &u.adjoint(),
        }
    }
}

/// `λ` with `g ≈ λI` (mean of the diagonal, residual `≤ tol·λ·n`), if any.
pub fn scalar_part(g: &CMat, tol: &Tol) -> Option<f64> {
    let n = g.rows();
    let lambda = g.trace().re / n as f64;
    let resid = (g - &CMat::identity(n).scale_real(lambda)).fro_norm();
    (lambda > 0.0 && resid <= tol.scalar() * lambda * n as f64).then_some(lambda)
}

/// If `u*u = λI` (left) or `uu* = λI` (right), multiplication by `u` maps
/// every diamond pair in `pairs` to a diamond pair. Inapplicable when the
/// Gram matrix of `u` is not a positive scalar.
pub fn unitary_mult_preserves(
    u: &CMat,
    pairs: &[(CMat, CMat)],
    side: Side,
    tol: &Tol,
) -> Result<Verdict> {
    u.ensure_square("unitary_mult_preserves")?;
    if scalar_part(&side.gram(u), tol).is_none() {
        return Ok(Verdict::Inapplicable);
    }
    for (a, b) in pairs {
        u.ensure_same_shape(a, "unitary_mult_preserves")?;
        if leq_diamond(a, b, tol)?.holds()
            && !leq_diamond(&side.mul(u, a), &side.mul(u, b), tol)?.holds()
        {
            return Ok(Verdict::Fails);
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Debug, Clone)]
pub struct DefectWitness {
    /// The projection used to build the pair; `None` for the null-space
    /// witness of a singular multiplier.
    pub p: Option<CMat>,
    pub a: CMat,
    pub b: CMat,
    pub related: bool,
    pub images_related: bool,
}

#[derive(Debug, Clone)]
pub enum Defect {
    /// The governing Gram matrix is `λI`.
    NoDefect {
        lambda: f64,
    },
    Witness(Box<DefectWitness>),
    /// Non-scalar Gram matrix but no witness within the search budget.
    Inconclusive {
        searched: usize,
    },
}

/// Look for a pair showing that multiplication by `u` does not preserve the
/// diamond order in both directions.
///
/// For right multiplication the candidates are `a = u†p` (and `u†(1 − p)`),
/// `b = u†` over projections `p`: these always satisfy `a ◇≤ b`, while the
/// images `u†pu ◇≤ u†u` force `u†pu` to be a projection, i.e. `p` to commute
/// with `uu*`. Left multiplication mirrors this with `a = pu†`. The budget is
/// the `n(n+1)/2` projections onto `e_i` and `(e_i + e_j)/√2` plus 50
/// sampled projections.
pub fn scalar_unitary_defect(u: &CMat, side: Side, tol: &Tol, seed: u64) -> Result<Defect> {
    u.ensure_square("scalar_unitary_defect")?;
    let n = u.rows();
    if let Some(lambda) = scalar_part(&side.gram(u), tol) {
        return Ok(Defect::NoDefect { lambda });
    }
    let up = pinv(u, tol)?;

    if rank(u, tol)? < n {
        // y with y·u = 0 (right) or u·y = 0 (left): y ◇≤ 0 fails, images are 0 ◇≤ 0
        let f = svd(u)?;
        let y = match side {
            Side::Right => {
                let c: Vec<C64> = (0..n).map(|i| f.left[(i, n - 1)].conj()).collect();
                CMat::from_fn(n, n, |i, j| if i == 0 { c[j] } else { C64::new(0.0, 0.0) })
            }
            Side::Left => {
                let c: Vec<C64> = (0..n).map(|i| f.right[(i, n - 1)]).collect();
                CMat::from_fn(n, n, |i, j| if j == 0 { c[i] } else { C64::new(0.0, 0.0) })
            }
        };
        let b = CMat::zeros(n, n);
        let w = DefectWitness {
            related: leq_diamond(&y, &b, tol)?.holds(),
            images_related: leq_diamond(&side.mul(u, &y), &side.mul(u, &b), tol)?.holds(),
            p: None,
            a: y,
            b,
        };
        return Ok(if w.related != w.images_related {
            Defect::Witness(Box::new(w))
        } else {
            Defect::Inconclusive { searched: 0 }
        });
    }

    let mut rng = stream(seed, &[STRUCT_TAG, 3, n as u64]);
    let candidates = canonical_projections(n)
        .into_iter()
        .map(Ok)
        .chain((0..50).map(|_| sampled_projection(&mut rng, n)));
    let id = CMat::identity(n);
    let mut searched = 0;
    for p in candidates {
        let p = p?;
        searched += 1;
        for half in [p.clone(), &id - &p] {
            let a = match side {
                Side::Right => &up * &half,
                Side::Left => &half * &up,
            };
            let related = leq_diamond(&a, &up, tol)?.holds();
            let images_related = leq_diamond(&side.mul(u, &a), &side.mul(u, &up), tol)?.holds();
            if related != images_related {
                return Ok(Defect::Witness(Box::new(DefectWitness {
                    p: Some(p),
                    a,
                    b: up,
                    related,
                    images_related,
                })));
            }
        }
    }
    Ok(Defect::Inconclusive { searched })
}

fn canonical_projections(n: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        out.push(CMat::unit(n, i, i));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut p = CMat::zeros(n, n);
            for (r, c) in [(i, i), (i, j), (j, i), (j, j)] {
                p[(r, c)] = C64::new(0.5, 0.0);
            }
            out.push(p);
        }
    }
    out
}

fn sampled_projection(rng: &mut Stream, n: usize) -> Result<CMat> {
    let r = rng.random_range(1..=n);
    sample_with(rng, SampleKind::Projection(r), n)
}

/// Random element of `M_n` that is singular by construction.
pub fn forced_singular(rng: &mut Stream, n: usize) -> CMat {
    let r = rng.random_range(0..n);
    if rng.random_bool(0.3) {
        // zero row, the other case a probe must catch
        let mut a = ginibre_with(rng, n, n);
        let i = rng.random_range(0..n);
        for j in 0..n {
            a[(i, j)] = C64::new(0.0, 0.0);
        }
        a
    } else {
        sample_with(rng, SampleKind::Rank(r), n).expect("r < n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sample;
    use crate::orders::gen_diamond_pair;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn trace_functional_examples() {
        let e11 = RankOne::from_matrix(&CMat::unit(3, 0, 0), &Tol::default()).unwrap();
        let x = sample(SampleKind::Ginibre, 3, 1).unwrap();
        assert!((trace_functional(&e11, &x).unwrap() - x[(0, 0)]).norm() < 1e-14);

        let e12 = RankOne::new(vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]).unwrap();
        assert_eq!(e12.to_matrix(), CMat::unit(2, 0, 1));
        assert_eq!(
            trace_functional(&e12, &CMat::unit(2, 1, 0)).unwrap(),
            c(1.0)
        );
    }

    #[test]
    fn trace_functional_identity() {
        let tol = Tol::default();
        for seed in 0..20 {
            let m = sample(SampleKind::Rank(1), 4, seed).unwrap();
            let u = RankOne::from_matrix(&m, &tol).unwrap();
            let x = sample(SampleKind::Ginibre, 4, seed + 50).unwrap();
            let tau = trace_functional(&u, &x).unwrap();
            let lhs = &(&m * &x) * &m;
            assert!((&lhs - &m.scale(tau)).fro_norm() < 1e-10 * (1.0 + lhs.fro_norm()));
            let t1 = trace_functional(&u, &CMat::identity(4)).unwrap();
            assert!((t1 - m.trace()).norm() < 1e-12 * (1.0 + m.fro_norm()));
        }
    }

    #[test]
    fn rank_one_rejects_zero() {
        assert!(RankOne::new(vec![c(0.0)], vec![c(1.0)]).is_err());
        assert!(RankOne::from_matrix(&CMat::identity(2), &Tol::default()).is_err());
    }

    #[test]
    fn minimal_below_hand_examples() {
        let tol = Tol::default();
        let u = minimal_below_with(&CMat::identity(2), &CMat::unit(2, 0, 0), &tol)
            .unwrap()
            .unwrap();
        assert!((&u.to_matrix() - &CMat::unit(2, 0, 0)).fro_norm() < 1e-14);

        let a = CMat::diag(&[2.0, 0.0]);
        let u = minimal_below_with(&a, &CMat::unit(2, 0, 0), &tol)
            .unwrap()
            .unwrap()
            .to_matrix();
        assert!((&u - &CMat::diag(&[2.0, 0.0])).fro_norm() < 1e-14);
        assert!(leq_diamond(&u, &a, &tol).unwrap().holds());

        assert_eq!(
            minimal_below_with(&a, &CMat::unit(2, 1, 1), &tol).unwrap(),
            None
        );
        assert!(matches!(
            minimal_below(&CMat::zeros(2, 2), &tol, 0),
            Err(Error::ZeroArgument { .. })
        ));
    }

    #[test]
    fn minimal_below_random() {
        let tol = Tol::default();
        for seed in 0..40 {
            let n = 2 + seed as usize % 5;
            let a = sample(SampleKind::Rank(1 + seed as usize % n), n, seed).unwrap();
            let u = minimal_below(&a, &tol, seed).unwrap().to_matrix();
            assert_eq!(rank(&u, &tol).unwrap(), 1);
            assert!(leq_diamond(&u, &a, &tol).unwrap().holds());
        }
    }

    #[test]
    fn minimality() {
        let tol = Tol::default();
        let e11 = CMat::unit(3, 0, 0);
        let probes = [e11.scale_real(2.0), CMat::unit(3, 1, 1), e11.clone()];
        let rep = is_minimal_diamond(&e11, &probes, &tol).unwrap();
        assert!(rep.minimal && rep.violations.is_empty());

        let rep = is_minimal_diamond(&CMat::identity(3), &[], &tol).unwrap();
        assert!(!rep.minimal);
        let w = rep.strictly_below.unwrap();
        assert!(leq_diamond(&w, &CMat::identity(3), &tol).unwrap().holds());
        assert!(!approx_eq(&w, &CMat::identity(3), &tol).unwrap());

        assert!(is_minimal_diamond(&CMat::zeros(2, 2), &[], &tol).is_err());
    }

    #[test]
    fn maximality() {
        let tol = Tol::default();
        assert!(
            is_maximal_diamond(&CMat::identity(3), &tol, 0)
                .unwrap()
                .maximal
        );
        let u = sample(SampleKind::Unitary, 4, 2).unwrap();
        assert!(is_maximal_diamond(&u, &tol, 0).unwrap().maximal);

        let a = CMat::diag(&[1.0, 0.0]);
        let rep = is_maximal_diamond(&a, &tol, 3).unwrap();
        let b = rep.strictly_above.unwrap();
        // b = diag(1, ξ) with ξ ≠ 0
        assert!((b[(0, 0)] - c(1.0)).norm() < 1e-14);
        assert!(b[(0, 1)].norm() < 1e-14 && b[(1, 0)].norm() < 1e-14);
        assert!(b[(1, 1)].norm() > 0.0);

        let blocks = BlockMat::new(vec![CMat::identity(2), CMat::diag(&[1.0, 0.0])]).unwrap();
        assert!(!is_maximal_blocks(&blocks, &tol).unwrap());
        assert!(is_maximal_blocks(&BlockMat::identity(&[2, 3]), &tol).unwrap());
    }

    #[test]
    fn projection_characterization_examples() {
        let tol = Tol::default();
        let id = CMat::identity(2);
        let p = CMat::diag(&[1.0, 0.0]);
        assert_eq!(
            projection_characterization(&p, &id, &tol).unwrap(),
            Verdict::Holds
        );
        let idem = CMat::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            projection_characterization(&idem, &id, &tol).unwrap(),
            Verdict::Fails
        );
        let half = id.scale_real(0.5);
        assert_eq!(
            projection_characterization(&half, &id, &tol).unwrap(),
            Verdict::Fails
        );
        assert_eq!(
            projection_characterization(&p, &id.scale_real(2.0), &tol).unwrap(),
            Verdict::Inapplicable
        );
    }

    #[test]
    fn probe_examples() {
        let tol = Tol::default();
        let t = invertibility_probe(&CMat::identity(3), &tol).unwrap();
        assert!(t.invertible && t.probes.iter().all(|p| p.left_ok && p.right_ok));
        assert!(
            invertibility_probe(&sample(SampleKind::Ginibre, 4, 1).unwrap(), &tol)
                .unwrap()
                .invertible
        );
        let t = invertibility_probe(&CMat::diag(&[1.0, 0.0]), &tol).unwrap();
        assert!(!t.invertible);
        let bad = t.probes.iter().find(|p| p.i == 1 && p.j == 1).unwrap();
        assert!(!bad.left_ok && !bad.right_ok);
        assert_eq!(t.first_failure, Some((0, 1)));
    }

    #[test]
    fn probe_matches_rank() {
        let tol = Tol::default();
        let mut rng = stream(5, &[]);
        for k in 0..60 {
            let n = 2 + k % 4;
            let a = if k % 2 == 0 {
                forced_singular(&mut rng, n)
            } else {
                ginibre_with(&mut rng, n, n)
            };
            let inv = invertibility_probe(&a, &tol).unwrap().invertible;
            assert_eq!(inv, rank(&a, &tol).unwrap() == n, "k={k}");
        }
    }

    #[test]
    fn scaled_unitary_preserves() {
        let tol = Tol::default();
        let pairs: Vec<_> = (0..60).map(|s| gen_diamond_pair(3, s).unwrap()).collect();
        assert_eq!(
            unitary_mult_preserves(&CMat::identity(3), &pairs, Side::Left, &tol).unwrap(),
            Verdict::Holds
        );
        let u = sample(SampleKind::Unitary, 3, 4).unwrap().scale_real(3.0);
        for side in [Side::Left, Side::Right] {
            assert_eq!(
                unitary_mult_preserves(&u, &pairs, side, &tol).unwrap(),
                Verdict::Holds
            );
        }
        let d = CMat::diag(&[1.0, 2.0, 1.0]);
        assert_eq!(
            unitary_mult_preserves(&d, &pairs, Side::Left, &tol).unwrap(),
            Verdict::Inapplicable
        );
    }

    #[test]
    fn defect_search() {
        let tol = Tol::default();
        let u = sample(SampleKind::Unitary, 3, 1).unwrap();
        assert!(matches!(
            scalar_unitary_defect(&u, Side::Right, &tol, 0).unwrap(),
            Defect::NoDefect { .. }
        ));
        for side in [Side::Left, Side::Right] {
            match scalar_unitary_defect(&CMat::diag(&[1.0, 2.0]), side, &tol, 0).unwrap() {
                Defect::Witness(w) => {
                    assert!(w.related && !w.images_related);
                    assert!(leq_diamond(&w.a, &w.b, &tol).unwrap().holds());
                }
                other => panic!("{other:?}"),
            }
        }
        let sing = CMat::diag(&[1.0, 0.0]);
        match scalar_unitary_defect(&sing, Side::Right, &tol, 0).unwrap() {
            Defect::Witness(w) => assert!(!w.related && w.images_related),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scaled_partial_isometry_defect() {
        let tol = Tol::default();
        let w = sample(SampleKind::Unitary, 3, 8).unwrap().scale_real(2.0);
        match scalar_unitary_defect(&w, Side::Right, &tol, 0).unwrap() {
            Defect::NoDefect { lambda } => assert!((lambda - 4.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }
}
