use rand::Rng;
use serde::Serialize;

use super::LinearMap;
use crate::error::{Error, Result};
use crate::geninv::pinv;
use crate::matcore::sample::{ginibre_with, sample_with, stream, Stream};
use crate::matcore::{inverse, rank, BlockMat, CMat, SampleKind, Tol};
use crate::orders::corpus::labelled_pairs;
use crate::orders::{
    diamond_below, gen_diamond_pair_with, leq_blocks, leq_diamond, OrderKind, Verdict,
};
use crate::structure::is_projection;

const CHECK_TAG: u64 = 0x9e_5e7;

/// Outcome of an identity sweep. `worst_*` are the largest
/// residual/threshold ratios seen, so the identity holds iff both are ≤ 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub samples: usize,
    pub worst_square: f64,
    pub worst_star: f64,
}

fn sample_element(rng: &mut Stream, k: usize, n: usize) -> Result<CMat> {
    match k % 3 {
        0 => sample_with(rng, SampleKind::Ginibre, n),
        1 => sample_with(rng, SampleKind::Hermitian, n),
        _ => {
            let r = rng.random_range(0..=n);
            sample_with(rng, SampleKind::Projection(r), n)
        }
    }
}

fn blocks_sub(a: &BlockMat, b: &BlockMat) -> Result<f64> {
    Ok(a.sub(b)?.fro_norm())
}

/// `T(a²) = T(a)²` and `T(a*) = T(a)*` on `samples` elements (Ginibre,
/// Hermitian and projections in turn).
pub fn jordan_star_check(
    t: &LinearMap,
    samples: usize,
    seed: u64,
    tol: &Tol,
) -> Result<IdentityCheck> {
    let n = t.dim();
    let mut rng = stream(seed, &[CHECK_TAG, 1, n as u64]);
    let (mut worst_square, mut worst_star) = (0.0f64, 0.0f64);
    for k in 0..samples {
        let a = sample_element(&mut rng, k, n)?;
        let ta = t.apply_blocks(&a)?;
        let ta2 = t.apply_blocks(&(&a * &a))?;
        let sq = ta.mul(&ta)?;
        let r = blocks_sub(&ta2, &sq)?;
        worst_square = worst_square.max(r / tol.threshold(ta2.fro_norm().max(sq.fro_norm())));
        let tas = t.apply_blocks(&a.adjoint())?;
        let r = blocks_sub(&tas, &ta.adjoint())?;
        worst_star = worst_star.max(r / tol.threshold(ta.fro_norm()));
    }
    Ok(IdentityCheck {
        holds: worst_square <= 1.0 && worst_star <= 1.0,
        samples,
        worst_square,
        worst_star,
    })
}

/// `T(a†) = T(a)†` on elements of every rank. Jordan *-homomorphisms
/// satisfy it, so the check is inapplicable for maps that are not.
pub fn mp_preservation_check(
    t: &LinearMap,
    samples: usize,
    seed: u64,
    tol: &Tol,
) -> Result<Verdict> {
    if !jordan_star_check(t, samples, seed, tol)?.holds {
        return Ok(Verdict::Inapplicable);
    }
    let n = t.dim();
    let mut rng = stream(seed, &[CHECK_TAG, 2, n as u64]);
    for k in 0..samples {
        let a = sample_with(&mut rng, SampleKind::Rank(k % (n + 1)), n)?;
        let lhs = t.apply_blocks(&pinv(&a, tol)?)?;
        let ta = t.apply_blocks(&a)?;
        let rhs = BlockMat::new(
            ta.blocks()
                .iter()
                .map(|b| pinv(b, tol))
                .collect::<Result<Vec<_>>>()?,
        )?;
        if blocks_sub(&lhs, &rhs)? > tol.threshold(lhs.fro_norm().max(rhs.fro_norm())) {
            return Ok(Verdict::Fails);
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `a ◇≤ b` but `T(a) ◇≤ T(b)` fails.
    Forward,
    /// `a ◇≤ b` fails but `T(a) ◇≤ T(b)` holds.
    Backward,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub a: CMat,
    pub b: CMat,
    pub direction: Direction,
}

#[derive(Debug, Clone)]
pub struct PreserverVerdict {
    pub forward_ok: bool,
    pub backward_ok: bool,
    pub sample_count: usize,
    pub counterexample: Option<Counterexample>,
}

impl PreserverVerdict {
    pub fn holds(&self) -> bool {
        self.forward_ok && self.backward_ok
    }
}

fn images_related(t: &LinearMap, a: &CMat, b: &CMat, tol: &Tol) -> Result<bool> {
    Ok(leq_blocks(
        OrderKind::Diamond,
        &t.apply_blocks(a)?,
        &t.apply_blocks(b)?,
        tol,
    )? == Verdict::Holds)
}

/// `a ◇≤ b` pair from one of three generators, cycling on `k`.
fn generated_pair(rng: &mut Stream, k: usize, n: usize, tol: &Tol) -> Result<(CMat, CMat)> {
    match k % 3 {
        0 => gen_diamond_pair_with(rng, n, false),
        1 => gen_diamond_pair_with(rng, n, true),
        _ => {
            let r = rng.random_range(1..=n);
            let b = sample_with(rng, SampleKind::Rank(r), n)?;
            Ok((diamond_below(&b, rng, tol)?, b))
        }
    }
}

/// Sampled test of `a ◇≤ b ⟹ T(a) ◇≤ T(b)` and, with `both_directions`,
/// of the converse.
///
/// Forward: `pairs` generated diamond pairs. Backward: corpus pairs that are
/// unrelated must stay unrelated, and generated pairs `(c, d)` on the image
/// side must pull back through `T⁻¹` to related pairs. The backward half
/// needs an invertible supermatrix. The first counterexample is re-checked
/// before it is reported.
pub fn preserves_diamond(
    t: &LinearMap,
    pairs: usize,
    seed: u64,
    tol: &Tol,
    both_directions: bool,
) -> Result<PreserverVerdict> {
    let n = t.dim();
    let inv = if both_directions {
        if !t.is_endo() {
            return Err(Error::InvalidArgument(
                "backward preservation needs an endomorphism of M_n".into(),
            ));
        }
        Some(LinearMap::from_super(
            n,
            inverse(t.matrix()).map_err(|_| Error::Singular {
                op: "preserves_diamond",
            })?,
        )?)
    } else {
        None
    };

    let mut rng = stream(seed, &[CHECK_TAG, 3, n as u64]);
    let mut count = 0;
    let mut counterexample = None;
    let mut forward_ok = true;
    for k in 0..pairs {
        let (a, b) = generated_pair(&mut rng, k, n, tol)?;
        count += 1;
        if !images_related(t, &a, &b, tol)? {
            forward_ok = false;
            counterexample = Some(Counterexample {
                a,
                b,
                direction: Direction::Forward,
            });
            break;
        }
    }

    let mut backward_ok = true;
    if let Some(inv) = &inv {
        let corpus = labelled_pairs(n, pairs, seed ^ CHECK_TAG)?;
        for (_, a, b) in corpus {
            count += 1;
            if !leq_diamond(&a, &b, tol)?.holds() && images_related(t, &a, &b, tol)? {
                backward_ok = false;
                counterexample.get_or_insert(Counterexample {
                    a,
                    b,
                    direction: Direction::Backward,
                });
                break;
            }
        }
        if backward_ok {
            for k in 0..pairs {
                let (c, d) = generated_pair(&mut rng, k, n, tol)?;
                let (a, b) = (inv.apply(&c)?, inv.apply(&d)?);
                count += 1;
                if !leq_diamond(&a, &b, tol)?.holds() {
                    backward_ok = false;
                    counterexample.get_or_insert(Counterexample {
                        a,
                        b,
                        direction: Direction::Backward,
                    });
                    break;
                }
            }
        }
    }

    if let Some(ce) = &counterexample {
        let related = leq_diamond(&ce.a, &ce.b, tol)?.holds();
        let imaged = images_related(t, &ce.a, &ce.b, tol)?;
        let confirmed = match ce.direction {
            Direction::Forward => related && !imaged,
            Direction::Backward => !related && imaged,
        };
        if !confirmed {
            return Err(Error::InvalidArgument(
                "counterexample did not reproduce on re-evaluation".into(),
            ));
        }
    }
    Ok(PreserverVerdict {
        forward_ok,
        backward_ok,
        sample_count: count,
        counterexample,
    })
}

/// A linear map that preserves the diamond order, hits an invertible
/// element and sends `I` to a projection is a Jordan *-homomorphism.
///
/// The hypotheses are checked by sampling: `T(I)` is a projection, `T(I)` or
/// one of 20 Ginibre images is invertible (the nonempty reading of
/// `T(A) ∩ B⁻¹`), and forward preservation holds on 100 generated pairs.
/// If any fails the verdict is inapplicable; otherwise it is the outcome of
/// [`jordan_star_check`], and `Fails` means the sampled hypotheses held but
/// the conclusion did not.
pub fn rro_check(t: &LinearMap, tol: &Tol, seed: u64) -> Result<Verdict> {
    let n = t.dim();
    let big: usize = t.target().iter().sum();
    let unit = t.apply(&CMat::identity(n))?;
    if !is_projection(&unit, tol)? {
        return Ok(Verdict::Inapplicable);
    }
    let mut rng = stream(seed, &[CHECK_TAG, 4, n as u64]);
    let mut hits = rank(&unit, tol)? == big;
    for _ in 0..20 {
        if hits {
            break;
        }
        hits = rank(&t.apply(&ginibre_with(&mut rng, n, n))?, tol)? == big;
    }
    if !hits || !preserves_diamond(t, 100, seed, tol, false)?.forward_ok {
        return Ok(Verdict::Inapplicable);
    }
    Ok(Verdict::from_bool(
        jordan_star_check(t, 50, seed, tol)?.holds,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sample;
    use crate::preservers::{jordan_map, make_canonical};

    fn scaled(n: usize, s: f64) -> LinearMap {
        LinearMap::from_fn(n, |a| a.scale_real(s))
    }

    #[test]
    fn jordan_check_examples() {
        let tol = Tol::default();
        let u = sample(SampleKind::Unitary, 3, 1).unwrap();
        let inner = make_canonical(1.0, &u, &u.adjoint(), false).unwrap();
        assert!(jordan_star_check(&inner, 30, 0, &tol).unwrap().holds);
        assert!(
            !jordan_star_check(&scaled(3, 2.0), 30, 0, &tol)
                .unwrap()
                .holds
        );
        assert!(
            jordan_star_check(&jordan_map(3), 30, 0, &tol)
                .unwrap()
                .holds
        );
        let tr = make_canonical(1.0, &u, &u.adjoint(), true).unwrap();
        assert!(jordan_star_check(&tr, 30, 0, &tol).unwrap().holds);
    }

    #[test]
    fn mp_examples() {
        let tol = Tol::default();
        let u = sample(SampleKind::Unitary, 3, 2).unwrap();
        let inner = make_canonical(1.0, &u, &u.adjoint(), false).unwrap();
        assert_eq!(
            mp_preservation_check(&inner, 20, 0, &tol).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            mp_preservation_check(&jordan_map(3), 20, 0, &tol).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            mp_preservation_check(&scaled(3, 2.0), 20, 0, &tol).unwrap(),
            Verdict::Inapplicable
        );
    }

    #[test]
    fn canonical_preserves_both_ways() {
        let tol = Tol::default();
        let u = sample(SampleKind::Unitary, 3, 3).unwrap();
        let v = sample(SampleKind::Unitary, 3, 4).unwrap();
        for transpose in [false, true] {
            let t = make_canonical(2.0, &u, &v, transpose).unwrap();
            let pv = preserves_diamond(&t, 60, 1, &tol, true).unwrap();
            assert!(pv.holds(), "{:?}", pv.counterexample.map(|c| c.direction));
            assert_eq!(pv.sample_count, 180);
        }
        let id = LinearMap::from_super(2, CMat::identity(4)).unwrap();
        assert!(preserves_diamond(&id, 30, 1, &tol, true).unwrap().holds());
    }

    #[test]
    fn diagonal_multiplier_fails() {
        let tol = Tol::default();
        let d = CMat::diag(&[1.0, 2.0]);
        let t = LinearMap::from_fn(2, |a| &d * a);
        let pv = preserves_diamond(&t, 60, 0, &tol, true).unwrap();
        assert!(!pv.forward_ok);
        let ce = pv.counterexample.unwrap();
        assert_eq!(ce.direction, Direction::Forward);
        assert!(leq_diamond(&ce.a, &ce.b, &tol).unwrap().holds());
        assert!(!leq_diamond(&(&d * &ce.a), &(&d * &ce.b), &tol)
            .unwrap()
            .holds());
    }

    #[test]
    fn singular_super_backward_is_an_error() {
        let tol = Tol::default();
        let p = CMat::diag(&[1.0, 0.0]);
        let t = LinearMap::from_fn(2, |a| &(&p * a) * &p);
        assert!(matches!(
            preserves_diamond(&t, 10, 0, &tol, true),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn rro_examples() {
        let tol = Tol::default();
        let u = sample(SampleKind::Unitary, 3, 5).unwrap();
        for transpose in [false, true] {
            let t = make_canonical(1.0, &u, &u.adjoint(), transpose).unwrap();
            assert_eq!(rro_check(&t, &tol, 0).unwrap(), Verdict::Holds);
        }
        let p = CMat::diag(&[1.0, 1.0, 0.0]);
        let compression = LinearMap::from_fn(3, |a| &(&p * a) * &p);
        assert_eq!(
            rro_check(&compression, &tol, 0).unwrap(),
            Verdict::Inapplicable
        );
        assert_eq!(
            rro_check(&scaled(3, 2.0), &tol, 0).unwrap(),
            Verdict::Inapplicable
        );
    }
}
