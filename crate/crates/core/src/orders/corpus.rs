//! Mixed pair corpora for sweeping the order predicates.
//!
//! Ginibre pairs are almost never comparable, so a corpus built from them
//! alone would only ever exercise the "fails" branch. Each corpus mixes
//! generated diamond pairs, star pairs, minus pairs and pairs built to break
//! exactly one defining identity.

use rand::Rng;

use super::generate::{diamond_below, gen_diamond_pair_with, minus_pair};
use crate::error::Result;
use crate::matcore::sample::{frame_with, ginibre_with, sample_with, stream, Stream};
use crate::matcore::{svd, CMat, SampleKind, Tol, C64};

const CORPUS_TAG: u64 = 0xc0_7075;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Lift,
    DaggerMinus,
    Below,
    Ginibre,
    LowRank,
    StarTruncation,
    OrthogonalSum,
    MinusPair,
    BrokenCubic,
    Reflexive,
    Swapped,
    ZeroBelow,
    /// `a = P·b`, `P` an orthogonal projection inside the range of `b`.
    LeftStar,
    /// `a = b·Q`, `Q` an orthogonal projection inside the row space of `b`.
    RightStar,
}

impl Source {
    pub const CYCLE: [Source; 14] = [
        Source::Lift,
        Source::DaggerMinus,
        Source::Below,
        Source::Ginibre,
        Source::LowRank,
        Source::StarTruncation,
        Source::OrthogonalSum,
        Source::MinusPair,
        Source::BrokenCubic,
        Source::Reflexive,
        Source::Swapped,
        Source::ZeroBelow,
        Source::LeftStar,
        Source::RightStar,
    ];
}

/// `count` pairs of n×n matrices, deterministic in `(n, count, seed)`.
pub fn pairs(n: usize, count: usize, seed: u64) -> Result<Vec<(CMat, CMat)>> {
    Ok(labelled_pairs(n, count, seed)?
        .into_iter()
        .map(|(_, a, b)| (a, b))
        .collect())
}

pub fn labelled_pairs(n: usize, count: usize, seed: u64) -> Result<Vec<(Source, CMat, CMat)>> {
    let mut rng = stream(seed, &[CORPUS_TAG, n as u64]);
    (0..count)
        .map(|i| {
            let src = Source::CYCLE[i % Source::CYCLE.len()];
            let (a, b) = pair_from(&mut rng, src, n)?;
            Ok((src, a, b))
        })
        .collect()
}

pub fn pair_from(rng: &mut Stream, src: Source, n: usize) -> Result<(CMat, CMat)> {
    let tol = Tol::default();
    Ok(match src {
        Source::Lift => gen_diamond_pair_with(rng, n, false)?,
        Source::DaggerMinus => gen_diamond_pair_with(rng, n, true)?,
        Source::Below => {
            let r = rng.random_range(1..=n);
            let b = sample_with(rng, SampleKind::Rank(r), n)?;
            (diamond_below(&b, rng, &tol)?, b)
        }
        Source::Ginibre => (ginibre_with(rng, n, n), ginibre_with(rng, n, n)),
        Source::LowRank => {
            let r1 = rng.random_range(0..=n);
            let r2 = rng.random_range(0..=n);
            (
                sample_with(rng, SampleKind::Rank(r1), n)?,
                sample_with(rng, SampleKind::Rank(r2), n)?,
            )
        }
        Source::StarTruncation => {
            // b = Σ σᵢ uᵢvᵢ*, a keeps a random subset of the terms
            let u = frame_with(rng, n, n);
            let v = frame_with(rng, n, n);
            let mut da = vec![C64::new(0.0, 0.0); n];
            let mut db = vec![C64::new(0.0, 0.0); n];
            for i in 0..n {
                let s = rng.random_range(0.5..3.0);
                if rng.random_bool(0.8) {
                    db[i] = C64::new(s, 0.0);
                    if rng.random_bool(0.5) {
                        da[i] = db[i];
                    }
                }
            }
            let mk = |d: &[C64]| &(&u * &CMat::diag_complex(d)) * &v.adjoint();
            (mk(&da), mk(&db))
        }
        Source::OrthogonalSum => {
            // a and c with ac* = c*a = 0, b = a + c
            let k = rng.random_range(0..=n);
            let u = frame_with(rng, n, n);
            let v = frame_with(rng, n, n);
            let core_a = ginibre_with(rng, k.max(1), k.max(1));
            let core_c = ginibre_with(rng, (n - k).max(1), (n - k).max(1));
            let mut ma = CMat::zeros(n, n);
            let mut mc = CMat::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if i < k && j < k {
                        ma[(i, j)] = core_a[(i, j)];
                    } else if i >= k && j >= k {
                        mc[(i, j)] = core_c[(i - k, j - k)];
                    }
                }
            }
            let a = &(&u * &ma) * &v.adjoint();
            let c = &(&u * &mc) * &v.adjoint();
            let b = &a + &c;
            (a, b)
        }
        Source::MinusPair => {
            let r = rng.random_range(0..=n);
            let s = rng.random_range(0..=n - r);
            minus_pair(rng, n, r, s)
        }
        Source::BrokenCubic => {
            let route = rng.random_bool(0.5);
            let (a, b) = gen_diamond_pair_with(rng, n, route)?;
            (a.scale_real(2.0), b)
        }
        Source::Reflexive => {
            let r = rng.random_range(0..=n);
            let a = sample_with(rng, SampleKind::Rank(r), n)?;
            (a.clone(), a)
        }
        Source::Swapped => {
            let route = rng.random_bool(0.5);
            let (a, b) = gen_diamond_pair_with(rng, n, route)?;
            (b, a)
        }
        Source::ZeroBelow => (CMat::zeros(n, n), ginibre_with(rng, n, n)),
        Source::LeftStar | Source::RightStar => {
            let k = rng.random_range(1..=n);
            let b = sample_with(rng, SampleKind::Rank(k), n)?;
            let f = svd(&b)?;
            let side = if src == Source::LeftStar {
                &f.left
            } else {
                &f.right
            };
            let basis = CMat::from_fn(n, k, |i, j| side[(i, j)]);
            let j = rng.random_range(0..=k);
            let p = if j == 0 {
                CMat::zeros(n, n)
            } else {
                let w = &basis * &frame_with(rng, k, j);
                &w * &w.adjoint()
            };
            if src == Source::LeftStar {
                (&p * &b, b)
            } else {
                (&b * &p, b)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::leq_diamond;

    #[test]
    fn corpus_mixes_verdicts() {
        let tol = Tol::default();
        let ps = pairs(3, 120, 1).unwrap();
        let holds = ps
            .iter()
            .filter(|(a, b)| leq_diamond(a, b, &tol).unwrap().holds())
            .count();
        assert!(holds > 30 && holds < 110, "{holds}");
    }

    #[test]
    fn orthogonal_sums_are_orthogonal() {
        let tol = Tol::default();
        let mut rng = stream(2, &[]);
        for _ in 0..20 {
            let (a, b) = pair_from(&mut rng, Source::OrthogonalSum, 4).unwrap();
            let c = &b - &a;
            assert!(crate::orders::orthogonal(&a, &c, &tol).unwrap());
        }
    }

    #[test]
    fn one_sided_star_sources_split() {
        use crate::orders::{leq_left_star, leq_right_star};
        let tol = Tol::default();
        let mut rng = stream(5, &[]);
        let (mut left_only, mut right_only) = (0, 0);
        for _ in 0..30 {
            let (a, b) = pair_from(&mut rng, Source::LeftStar, 3).unwrap();
            assert!(leq_left_star(&a, &b, &tol).unwrap().holds());
            left_only += usize::from(!leq_right_star(&a, &b, &tol).unwrap().holds());
            let (a, b) = pair_from(&mut rng, Source::RightStar, 3).unwrap();
            assert!(leq_right_star(&a, &b, &tol).unwrap().holds());
            right_only += usize::from(!leq_left_star(&a, &b, &tol).unwrap().holds());
        }
        assert!(left_only > 2 && right_only > 2, "{left_only} {right_only}");
    }

    #[test]
    fn deterministic() {
        assert_eq!(pairs(2, 30, 4).unwrap(), pairs(2, 30, 4).unwrap());
    }
}
