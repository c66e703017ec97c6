use rand::Rng;

use crate::error::Result;
use crate::geninv::pinv;
use crate::matcore::sample::{ginibre_with, sample_with, stream, Stream};
use crate::matcore::{inverse, svd, CMat, SampleKind, Tol};

const GEN_TAG: u64 = 0xd1a_0001;

/// `a + (I − aa†)·x·(I − a†a)`, which always lies diamond-above `a`.
pub fn diamond_lift(a: &CMat, x: &CMat, tol: &Tol) -> Result<CMat> {
    a.ensure_square("diamond_lift")?;
    a.ensure_same_shape(x, "diamond_lift")?;
    let n = a.rows();
    let ap = pinv(a, tol)?;
    let i = CMat::identity(n);
    let left = &i - &(a * &ap);
    let right = &i - &(&ap * a);
    Ok(a + &(&(&left * x) * &right))
}

/// Rank-additive pair `c = XY`, `d = XY + ZW` with `X` n×r, `Z` n×s,
/// `Y` r×n, `W` s×n Ginibre, so that `rank(d − c) = rank(d) − rank(c)`
/// whenever `r + s ≤ n`.
pub fn minus_pair(rng: &mut Stream, n: usize, r: usize, s: usize) -> (CMat, CMat) {
    assert!(r + s <= n, "minus_pair: r + s exceeds n");
    let c = if r == 0 {
        CMat::zeros(n, n)
    } else {
        &ginibre_with(rng, n, r) * &ginibre_with(rng, r, n)
    };
    let d = if s == 0 {
        c.clone()
    } else {
        &c + &(&ginibre_with(rng, n, s) * &ginibre_with(rng, s, n))
    };
    (c, d)
}

/// A pair `(a, b)` with `a ◇≤ b`. Even seeds lift a random low-rank `a`
/// (`diamond_lift` with Ginibre `x`); odd seeds take Moore-Penrose inverses
/// of a rank-additive minus pair, `(c†, d†)`.
pub fn gen_diamond_pair(n: usize, seed: u64) -> Result<(CMat, CMat)> {
    let mut rng = stream(seed, &[GEN_TAG, n as u64]);
    gen_diamond_pair_with(&mut rng, n, seed % 2 == 1)
}

pub fn gen_diamond_pair_with(
    rng: &mut Stream,
    n: usize,
    dagger_route: bool,
) -> Result<(CMat, CMat)> {
    let tol = Tol::default();
    if dagger_route {
        let r = rng.random_range(0..=n);
        let s = rng.random_range(0..=n - r);
        let (c, d) = minus_pair(rng, n, r, s);
        Ok((pinv(&c, &tol)?, pinv(&d, &tol)?))
    } else {
        let r = rng.random_range(0..=n);
        let a = sample_with(rng, SampleKind::Rank(r), n)?;
        let x = ginibre_with(rng, n, n);
        let b = diamond_lift(&a, &x, &tol)?;
        Ok((a, b))
    }
}

/// Random `a` with `a ◇≤ b`.
///
/// With `b† = F·G` a full-rank factorization (k = rank b), every `c = F E G`
/// with `E² = E` satisfies `c ≤⁻ b†`, hence `c† ◇≤ b`. `E` is a random
/// oblique idempotent `S·diag(1,…,1,0,…,0)·S⁻¹`.
pub fn diamond_below(b: &CMat, rng: &mut Stream, tol: &Tol) -> Result<CMat> {
    b.ensure_square("diamond_below")?;
    let n = b.rows();
    let f = svd(b)?;
    let k = f.rank(tol);
    if k == 0 {
        return Ok(CMat::zeros(n, n));
    }
    // b† = V_k Σ⁻¹ U_k*
    let ff = CMat::from_fn(n, k, |i, j| f.right[(i, j)] / f.sigma[j]);
    let g = CMat::from_fn(k, n, |i, j| f.left[(j, i)].conj());
    let j = rng.random_range(0..=k);
    let e = loop {
        let s = ginibre_with(rng, k, k);
        if let Ok(si) = inverse(&s) {
            let d = CMat::diag(
                &(0..k)
                    .map(|i| if i < j { 1.0 } else { 0.0 })
                    .collect::<Vec<_>>(),
            );
            break &(&s * &d) * &si;
        }
    };
    let c = &(&ff * &e) * &g;
    pinv(&c, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::{leq_diamond, leq_minus};

    #[test]
    fn lift_with_zero_is_reflexive() {
        let tol = Tol::default();
        let a = crate::matcore::sample(SampleKind::Rank(2), 3, 1).unwrap();
        let b = diamond_lift(&a, &CMat::zeros(3, 3), &tol).unwrap();
        assert!((&b - &a).fro_norm() < 1e-15);
    }

    #[test]
    fn lift_diagonal_example() {
        let tol = Tol::default();
        let a = CMat::diag(&[1.0, 0.0]);
        let b = diamond_lift(&a, &CMat::unit(2, 1, 1), &tol).unwrap();
        assert!((&b - &CMat::identity(2)).fro_norm() < 1e-15);
        assert!(leq_diamond(&a, &b, &tol).unwrap().holds());
    }

    #[test]
    fn generated_pairs_are_related() {
        let tol = Tol::default();
        for n in [1, 2, 3, 4, 8] {
            for seed in 0..40 {
                let (a, b) = gen_diamond_pair(n, seed).unwrap();
                let rep = leq_diamond(&a, &b, &tol).unwrap();
                assert!(rep.holds(), "n={n} seed={seed}: {:?}", rep.residuals);
            }
        }
    }

    #[test]
    fn minus_pair_is_rank_additive() {
        let tol = Tol::default();
        let mut rng = stream(3, &[]);
        for (r, s) in [(1, 1), (0, 2), (2, 0), (1, 2)] {
            let (c, d) = minus_pair(&mut rng, 3, r, s);
            assert!(leq_minus(&c, &d, &tol).unwrap().holds());
        }
    }

    #[test]
    fn below_is_related() {
        let tol = Tol::default();
        let mut rng = stream(11, &[]);
        for seed in 0..30 {
            let b =
                crate::matcore::sample(SampleKind::Rank(1 + seed as usize % 4), 4, seed).unwrap();
            let a = diamond_below(&b, &mut rng, &tol).unwrap();
            assert!(leq_diamond(&a, &b, &tol).unwrap().holds(), "seed {seed}");
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            gen_diamond_pair(3, 5).unwrap(),
            gen_diamond_pair(3, 5).unwrap()
        );
    }
}
