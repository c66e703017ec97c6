//! Fixed inputs shared by the criterion benches.

use diamond_core::orders::gen_diamond_pair;
use diamond_core::{sample, CMat, SampleKind};

pub const SIZES: [usize; 3] = [4, 8, 16];

pub fn ginibre(n: usize) -> CMat {
    sample(SampleKind::Ginibre, n, 17).expect("valid size")
}

pub fn low_rank(n: usize) -> CMat {
    sample(SampleKind::Rank(n / 2), n, 17).expect("valid size")
}

pub fn diamond_pair(n: usize) -> (CMat, CMat) {
    gen_diamond_pair(n, 2).expect("generator does not fail")
}
