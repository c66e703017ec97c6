use super::dense::CMat;
use crate::error::{Error, Result};

/// Element of a block-diagonal algebra `M_{n1} ⊕ … ⊕ M_{nk}`.
///
/// With two or more blocks the algebra is unital with essential socle but
/// not prime. All algebra operations act blockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMat {
    blocks: Vec<CMat>,
}

impl BlockMat {
    pub fn new(blocks: Vec<CMat>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::BlockStructure);
        }
        for b in &blocks {
            b.ensure_square("BlockMat::new")?;
        }
        Ok(Self { blocks })
    }

    pub fn identity(sizes: &[usize]) -> Self {
        Self {
            blocks: sizes.iter().map(|&n| CMat::identity(n)).collect(),
        }
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(CMat::rows).collect()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(CMat::rows).sum()
    }

    pub fn to_dense(&self) -> CMat {
        CMat::block_diag(&self.blocks)
    }

    /// Split a dense matrix along the given block sizes, dropping the
    /// off-diagonal blocks.
    pub fn from_dense(a: &CMat, sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        if a.shape() != (n, n) {
            return Err(Error::BlockStructure);
        }
        let mut off = 0;
        let mut blocks = Vec::with_capacity(sizes.len());
        for &s in sizes {
            blocks.push(a.submatrix(off, off, s, s));
            off += s;
        }
        Self::new(blocks)
    }

    fn zip(&self, other: &Self, f: impl Fn(&CMat, &CMat) -> CMat) -> Result<Self> {
        if self.sizes() != other.sizes() {
            return Err(Error::BlockStructure);
        }
        Ok(Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(CMat::adjoint).collect(),
        }
    }

    pub fn map_blocks(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        Self {
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn fro_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.fro_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::sample::{sample, SampleKind};

    #[test]
    fn ops_commute_with_block_extraction() {
        let a = BlockMat::new(vec![
            sample(SampleKind::Ginibre, 2, 1).unwrap(),
            sample(SampleKind::Ginibre, 3, 2).unwrap(),
        ])
        .unwrap();
        let b = BlockMat::new(vec![
            sample(SampleKind::Ginibre, 2, 3).unwrap(),
            sample(SampleKind::Ginibre, 3, 4).unwrap(),
        ])
        .unwrap();
        let prod = a.mul(&b).unwrap();
        for i in 0..2 {
            assert_eq!(prod.blocks()[i], &a.blocks()[i] * &b.blocks()[i]);
            assert_eq!(a.adjoint().blocks()[i], a.blocks()[i].adjoint());
        }
        let dense = &a.to_dense() * &b.to_dense();
        assert!((&dense - &prod.to_dense()).fro_norm() < 1e-13);
        assert_eq!(BlockMat::from_dense(&a.to_dense(), &[2, 3]).unwrap(), a);
    }

    #[test]
    fn rejects_bad_structure() {
        assert_eq!(BlockMat::new(vec![]), Err(Error::BlockStructure));
        assert!(BlockMat::new(vec![CMat::zeros(2, 3)]).is_err());
        let a = BlockMat::identity(&[2, 2]);
        let b = BlockMat::identity(&[3, 1]);
        assert!(a.mul(&b).is_err());
    }
}
