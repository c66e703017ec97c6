//! Seeded random test elements.
//!
//! Every sample is drawn from a `ChaCha8Rng` (rand_chacha) seeded with
//! `seed_from_u64(mix(seed, tag, n, r))`, where `mix` is a SplitMix64
//! finalizer chain over the four words and `tag` identifies the sample kind.
//! Complex Gaussians are `(x + iy)/√2` with `x, y` drawn from
//! `rand_distr::StandardNormal`, real part first, entries in row-major
//! order. ChaCha8 output is platform independent, so suites replay exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::dense::{CMat, C64};
use crate::error::{Error, Result};

pub type Stream = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Ginibre,
    Unitary,
    Projection(usize),
    PartialIsometry(usize),
    Rank(usize),
    Hermitian,
}

impl SampleKind {
    fn tag(self) -> (u64, u64) {
        match self {
            SampleKind::Ginibre => (1, 0),
            SampleKind::Unitary => (2, 0),
            SampleKind::Projection(r) => (3, r as u64),
            SampleKind::PartialIsometry(r) => (4, r as u64),
            SampleKind::Rank(r) => (5, r as u64),
            SampleKind::Hermitian => (6, 0),
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent stream from a seed and a list of labels.
pub fn stream(seed: u64, labels: &[u64]) -> Stream {
    let mut h = splitmix(seed);
    for &l in labels {
        h = splitmix(h ^ l);
    }
    ChaCha8Rng::seed_from_u64(h)
}

pub fn complex_normal(rng: &mut Stream) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre_with(rng: &mut Stream, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Orthonormalize the columns of a full-column-rank matrix (modified
/// Gram-Schmidt, two passes). The implied R factor has positive real
/// diagonal.
pub fn orthonormalize(g: &CMat) -> CMat {
    let (m, k) = g.shape();
    let mut q = g.clone();
    for j in 0..k {
        let mut w = q.column(j);
        for _ in 0..2 {
            for i in 0..j {
                let e = q.column(i);
                let proj: C64 = e.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (wi, ei) in w.iter_mut().zip(&e) {
                    *wi -= proj * ei;
                }
            }
        }
        let nrm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        debug_assert!(nrm > 0.0, "orthonormalize: dependent columns");
        for wi in w.iter_mut() {
            *wi /= nrm;
        }
        q.set_column(j, &w);
    }
    debug_assert_eq!(q.shape(), (m, k));
    q
}

/// n×r matrix with orthonormal columns.
pub fn frame_with(rng: &mut Stream, n: usize, r: usize) -> CMat {
    orthonormalize(&ginibre_with(rng, n, r))
}

pub fn sample_with(rng: &mut Stream, kind: SampleKind, n: usize) -> Result<CMat> {
    match kind {
        SampleKind::Projection(r) | SampleKind::PartialIsometry(r) | SampleKind::Rank(r)
            if r > n =>
        {
            return Err(Error::RankTooLarge { rank: r, n })
        }
        _ => {}
    }
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
    }
    Ok(match kind {
        SampleKind::Ginibre => ginibre_with(rng, n, n),
        SampleKind::Unitary => frame_with(rng, n, n),
        SampleKind::Projection(0) | SampleKind::PartialIsometry(0) | SampleKind::Rank(0) => {
            CMat::zeros(n, n)
        }
        SampleKind::Projection(r) => {
            let v = frame_with(rng, n, r);
            &v * &v.adjoint()
        }
        SampleKind::PartialIsometry(r) => {
            let w1 = frame_with(rng, n, r);
            let w2 = frame_with(rng, n, r);
            &w1 * &w2.adjoint()
        }
        SampleKind::Rank(r) => {
            let x = ginibre_with(rng, n, r);
            let y = ginibre_with(rng, r, n);
            &x * &y
        }
        SampleKind::Hermitian => {
            let g = ginibre_with(rng, n, n);
            (&g + &g.adjoint()).scale_real(0.5)
        }
    })
}

/// Deterministic sample for `(kind, n, seed)`.
pub fn sample(kind: SampleKind, n: usize, seed: u64) -> Result<CMat> {
    let (tag, r) = kind.tag();
    let mut rng = stream(seed, &[tag, n as u64, r]);
    sample_with(&mut rng, kind, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{rank, Tol};

    #[test]
    fn deterministic_per_key() {
        for kind in [
            SampleKind::Ginibre,
            SampleKind::Unitary,
            SampleKind::Projection(2),
            SampleKind::Hermitian,
        ] {
            assert_eq!(sample(kind, 4, 9).unwrap(), sample(kind, 4, 9).unwrap());
            assert_ne!(sample(kind, 4, 9).unwrap(), sample(kind, 4, 10).unwrap());
        }
        assert_ne!(
            sample(SampleKind::Rank(1), 3, 0).unwrap(),
            sample(SampleKind::Rank(2), 3, 0).unwrap()
        );
    }

    #[test]
    fn unitary_is_unitary() {
        for n in 1..=8 {
            for seed in 0..10 {
                let u = sample(SampleKind::Unitary, n, seed).unwrap();
                let d = (&(&u.adjoint() * &u) - &CMat::identity(n)).fro_norm();
                assert!(d <= 1e-12, "n={n} seed={seed}: {d}");
            }
        }
    }

    #[test]
    fn structured_kinds() {
        let tol = Tol::default();
        let p = sample(SampleKind::Projection(1), 4, 5).unwrap();
        assert!((&(&p * &p) - &p).fro_norm() < 1e-12);
        assert!((&p.adjoint() - &p).fro_norm() < 1e-12);
        assert_eq!(rank(&p, &tol).unwrap(), 1);

        let w = sample(SampleKind::PartialIsometry(2), 4, 5).unwrap();
        assert!((&(&(&w * &w.adjoint()) * &w) - &w).fro_norm() < 1e-12);
        assert_eq!(rank(&w, &tol).unwrap(), 2);

        assert_eq!(
            rank(&sample(SampleKind::Rank(3), 5, 1).unwrap(), &tol).unwrap(),
            3
        );
        let h = sample(SampleKind::Hermitian, 3, 1).unwrap();
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn rank_exceeding_dimension_errors() {
        assert_eq!(
            sample(SampleKind::Projection(5), 4, 0),
            Err(Error::RankTooLarge { rank: 5, n: 4 })
        );
        assert_eq!(
            sample(SampleKind::Rank(0), 3, 0).unwrap(),
            CMat::zeros(3, 3)
        );
    }
}
