use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
///
/// Constructors that take caller data validate shape and finiteness. The
/// arithmetic operators panic on shape mismatch, like slice indexing; the
/// order predicates check shapes up front and return [`Error::ShapeMismatch`]
/// instead.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(k) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            values.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn diag_complex(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { ZERO })
    }

    /// Matrix unit `E_ij` in `M_n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    /// Rebuild a matrix from its column-major vectorization.
    pub fn from_col_major(rows: usize, cols: usize, v: &[C64]) -> Self {
        assert_eq!(v.len(), rows * cols, "from_col_major: length mismatch");
        Self::from_fn(rows, cols, |i, j| v[i + j * rows])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// Column-major vectorization, the convention used for supermatrices.
    pub fn to_col_major(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self[(i, j)]);
            }
        }
        v
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        assert_eq!(col.len(), self.rows);
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul: {}x{} times {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = vec![ZERO; self.rows * rhs.cols];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let dst = &mut out[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &aik) in row.iter().enumerate() {
                if aik == ZERO {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += aik * b;
                }
            }
        }
        CMat {
            rows: self.rows,
            cols: rhs.cols,
            data: out,
        }
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matvec: length mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &CMat) -> CMat {
        let (p, q) = rhs.shape();
        CMat::from_fn(self.rows * p, self.cols * q, |i, j| {
            self[(i / p, j / q)] * rhs[(i % p, j % q)]
        })
    }

    /// Block-diagonal sum of square or rectangular pieces.
    pub fn block_diag(blocks: &[CMat]) -> CMat {
        let rows = blocks.iter().map(CMat::rows).sum();
        let cols = blocks.iter().map(CMat::cols).sum();
        let mut out = CMat::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[&CMat]) -> CMat {
        let cols = parts[0].cols;
        assert!(
            parts.iter().all(|p| p.cols == cols),
            "vstack: column mismatch"
        );
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            data.extend_from_slice(&p.data);
        }
        CMat { rows, cols, data }
    }

    pub fn hstack(parts: &[&CMat]) -> CMat {
        let adj: Vec<CMat> = parts.iter().map(|p| p.transpose()).collect();
        let refs: Vec<&CMat> = adj.iter().collect();
        CMat::vstack(&refs).transpose()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub(crate) fn ensure_same_shape(&self, other: &CMat, op: &'static str) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn ensure_square(&self, op: &'static str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;

    fn mul(self, rhs: &CMat) -> CMat {
        self.matmul(rhs)
    }
}

impl Mul<C64> for &CMat {
    type Output = CMat;

    fn mul(self, rhs: C64) -> CMat {
        self.scale(rhs)
    }
}

impl Mul<f64> for &CMat {
    type Output = CMat;

    fn mul(self, rhs: f64) -> CMat {
        self.scale_real(rhs)
    }
}

fn zip_with(a: &CMat, b: &CMat, op: &str, f: impl Fn(C64, C64) -> C64) -> CMat {
    assert_eq!(
        a.shape(),
        b.shape(),
        "{op}: {:?} vs {:?}",
        a.shape(),
        b.shape()
    );
    CMat {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(&x, &y)| f(x, y)).collect(),
    }
}

impl Add for &CMat {
    type Output = CMat;

    fn add(self, rhs: &CMat) -> CMat {
        zip_with(self, rhs, "add", |x, y| x + y)
    }
}

impl Sub for &CMat {
    type Output = CMat;

    fn sub(self, rhs: &CMat) -> CMat {
        zip_with(self, rhs, "sub", |x, y| x - y)
    }
}

impl AddAssign<&CMat> for CMat {
    fn add_assign(&mut self, rhs: &CMat) {
        assert_eq!(self.shape(), rhs.shape(), "add_assign: shape mismatch");
        for (x, y) in self.data.iter_mut().zip(&rhs.data) {
            *x += y;
        }
    }
}

impl Neg for &CMat {
    type Output = CMat;

    fn neg(self) -> CMat {
        self.map(|z| -z)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6e}{:+.6e}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if j > 0 {
                    write!(f, "  ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{:.6}", z.re)?;
                } else {
                    write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
                }
            }
            if i + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_validates_entries() {
        assert!(matches!(
            CMat::new(2, 2, vec![ONE; 3]),
            Err(Error::EntryCount { expected: 4, .. })
        ));
        assert!(matches!(
            CMat::new(0, 2, vec![]),
            Err(Error::EmptyMatrix { .. })
        ));
        let mut data = vec![ONE; 4];
        data[3] = C64::new(f64::NAN, 0.0);
        assert_eq!(
            CMat::new(2, 2, data),
            Err(Error::NonFinite { row: 1, col: 1 })
        );
    }

    #[test]
    fn products_and_adjoint() {
        let a = CMat::new(
            2,
            2,
            vec![ONE, C64::new(0.0, 1.0), C64::new(2.0, 0.0), ZERO],
        )
        .unwrap();
        let i2 = CMat::identity(2);
        assert_eq!(&a * &i2, a);
        let aa = a.adjoint();
        assert_eq!(aa[(1, 0)], C64::new(0.0, -1.0));
        assert_eq!(aa[(0, 1)], C64::new(2.0, 0.0));
        // (ab)* = b* a*
        let b = CMat::from_fn(2, 2, |i, j| C64::new(i as f64, j as f64 + 1.0));
        let lhs = (&a * &b).adjoint();
        let rhs = &b.adjoint() * &a.adjoint();
        assert!((&lhs - &rhs).fro_norm() < 1e-15);
    }

    #[test]
    fn col_major_round_trip() {
        let a = CMat::from_fn(2, 3, |i, j| C64::new((3 * i + j) as f64, 0.0));
        let v = a.to_col_major();
        assert_eq!(v[1], C64::new(3.0, 0.0));
        assert_eq!(CMat::from_col_major(2, 3, &v), a);
    }

    #[test]
    fn kron_matches_vec_identity() {
        // vec(AXB) = (Bᵀ ⊗ A) vec(X)
        let a = CMat::from_fn(2, 2, |i, j| C64::new(i as f64 + 1.0, j as f64));
        let x = CMat::from_fn(2, 2, |i, j| C64::new(j as f64 - i as f64, 1.0));
        let b = CMat::from_fn(2, 2, |i, j| C64::new((i * j) as f64, -1.0));
        let lhs = (&(&a * &x) * &b).to_col_major();
        let rhs = b.transpose().kron(&a).matvec(&x.to_col_major());
        for (l, r) in lhs.iter().zip(&rhs) {
            assert!((l - r).norm() < 1e-14);
        }
    }

    #[test]
    fn stacking_and_blocks() {
        let a = CMat::identity(2);
        let b = CMat::unit(2, 0, 1);
        let v = CMat::vstack(&[&a, &b]);
        assert_eq!(v.shape(), (4, 2));
        assert_eq!(v[(2, 1)], ONE);
        let h = CMat::hstack(&[&a, &b]);
        assert_eq!(h.shape(), (2, 4));
        assert_eq!(h[(0, 3)], ONE);
        let d = CMat::block_diag(&[a.clone(), b.clone()]);
        assert_eq!(d.submatrix(2, 2, 2, 2), b);
        assert_eq!(d[(0, 2)], ZERO);
    }

    #[test]
    #[should_panic(expected = "matmul")]
    fn matmul_shape_mismatch_panics() {
        let _ = &CMat::zeros(2, 3) * &CMat::zeros(2, 3);
    }
}
