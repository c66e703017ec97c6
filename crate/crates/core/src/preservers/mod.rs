//! Linear maps on matrix algebras and their interaction with the diamond
//! order.
//!
//! A map `T: M_n → M_{m1} ⊕ … ⊕ M_{mk}` is stored as its supermatrix acting
//! on column-stacked matrices: `vec(T(a)) = S·vec(a)`, where
//! `vec(a)[i + j·n] = a[i, j]` and the target blocks are stacked one after
//! another. With this convention `vec(X a Y) = (Yᵀ ⊗ X)·vec(a)`.

mod check;
mod decompose;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::format::MatrixDoc;
use crate::matcore::{BlockMat, CMat, C64};

pub use check::{
    jordan_star_check, mp_preservation_check, preserves_diamond, rro_check, Counterexample,
    Direction, IdentityCheck, PreserverVerdict,
};
pub use decompose::{decompose_preserver, phase_distance, DecompositionReport, Flavor};

/// Residual bound for unitarity of `U`, `V` in [`make_canonical`].
const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum MapTag {
    /// `a ↦ λ·U·a·V`, or `λ·U·aᵀ·V` when `transpose` is set.
    Canonical {
        lambda: f64,
        u: CMat,
        v: CMat,
        transpose: bool,
    },
    /// `a ↦ a ⊕ aᵀ`.
    JordanEmbedding,
    Opaque,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    dim: usize,
    target: Vec<usize>,
    matrix: CMat,
    tag: MapTag,
}

impl LinearMap {
    /// Map `M_n → M_n` from its n²×n² supermatrix.
    pub fn from_super(dim: usize, matrix: CMat) -> Result<Self> {
        Self::from_super_blocks(dim, vec![dim], matrix)
    }

    pub fn from_super_blocks(dim: usize, target: Vec<usize>, matrix: CMat) -> Result<Self> {
        let rows: usize = target.iter().map(|m| m * m).sum();
        if dim == 0 || target.is_empty() || target.contains(&0) {
            return Err(Error::EmptyMatrix {
                rows,
                cols: dim * dim,
            });
        }
        if matrix.shape() != (rows, dim * dim) {
            return Err(Error::ShapeMismatch {
                op: "LinearMap",
                left: (rows, dim * dim),
                right: matrix.shape(),
            });
        }
        Ok(Self {
            dim,
            target,
            matrix,
            tag: MapTag::Opaque,
        })
    }

    /// Supermatrix of `f` read off the matrix-unit basis.
    pub fn from_fn(dim: usize, f: impl Fn(&CMat) -> CMat) -> Self {
        Self::from_block_fn(dim, vec![dim], |a| {
            BlockMat::new(vec![f(a)]).expect("square image")
        })
    }

    pub fn from_block_fn(dim: usize, target: Vec<usize>, f: impl Fn(&CMat) -> BlockMat) -> Self {
        let rows: usize = target.iter().map(|m| m * m).sum();
        let mut matrix = CMat::zeros(rows, dim * dim);
        for j in 0..dim {
            for i in 0..dim {
                let img = f(&CMat::unit(dim, i, j));
                assert_eq!(img.sizes(), target, "from_block_fn: image block sizes");
                matrix.set_column(i + j * dim, &stack_blocks(&img));
            }
        }
        Self {
            dim,
            target,
            matrix,
            tag: MapTag::Opaque,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn tag(&self) -> &MapTag {
        &self.tag
    }

    /// Endomorphism of `M_n` (single target block of size n).
    pub fn is_endo(&self) -> bool {
        self.target == [self.dim]
    }

    pub fn apply_blocks(&self, a: &CMat) -> Result<BlockMat> {
        if a.shape() != (self.dim, self.dim) {
            return Err(Error::ShapeMismatch {
                op: "LinearMap::apply",
                left: (self.dim, self.dim),
                right: a.shape(),
            });
        }
        let v = self.matrix.matvec(&a.to_col_major());
        let mut off = 0;
        let mut blocks = Vec::with_capacity(self.target.len());
        for &m in &self.target {
            blocks.push(CMat::from_col_major(m, m, &v[off..off + m * m]));
            off += m * m;
        }
        BlockMat::new(blocks)
    }

    /// `T(a)` as a dense matrix (block-diagonal embedding for several blocks).
    pub fn apply(&self, a: &CMat) -> Result<CMat> {
        Ok(self.apply_blocks(a)?.to_dense())
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if !other.is_endo() || other.dim != self.dim {
            return Err(Error::ShapeMismatch {
                op: "LinearMap::compose",
                left: (self.dim, self.dim),
                right: (other.target.iter().sum(), other.dim),
            });
        }
        Self::from_super_blocks(self.dim, self.target.clone(), &self.matrix * &other.matrix)
    }

    /// Largest deviation between the supermatrix and the structured tag over
    /// the matrix-unit basis; `None` for opaque maps.
    pub fn tag_defect(&self) -> Option<f64> {
        let rebuilt = match &self.tag {
            MapTag::Opaque => return None,
            MapTag::JordanEmbedding => jordan_map(self.dim).matrix,
            MapTag::Canonical {
                lambda,
                u,
                v,
                transpose,
            } => canonical_super(*lambda, u, v, *transpose),
        };
        Some(
            (&rebuilt - &self.matrix)
                .as_slice()
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        )
    }
}

fn stack_blocks(b: &BlockMat) -> Vec<C64> {
    b.blocks().iter().flat_map(CMat::to_col_major).collect()
}

/// `vec(aᵀ) = K·vec(a)`.
pub fn commutation_matrix(n: usize) -> CMat {
    let mut k = CMat::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            k[(j + i * n, i + j * n)] = C64::new(1.0, 0.0);
        }
    }
    k
}

fn canonical_super(lambda: f64, u: &CMat, v: &CMat, transpose: bool) -> CMat {
    let base = v.transpose().kron(u).scale_real(lambda);
    if transpose {
        &base * &commutation_matrix(u.rows())
    } else {
        base
    }
}

fn unitarity_defect(u: &CMat) -> f64 {
    (&(&u.adjoint() * u) - &CMat::identity(u.rows())).fro_norm()
}

/// `a ↦ λ·U·a·V` (or `λ·U·aᵀ·V`) for `λ > 0` and unitary `U`, `V`.
pub fn make_canonical(lambda: f64, u: &CMat, v: &CMat, transpose: bool) -> Result<LinearMap> {
    u.ensure_square("make_canonical")?;
    u.ensure_same_shape(v, "make_canonical")?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scale must be positive, got {lambda}"
        )));
    }
    for (what, m) in [("U", u), ("V", v)] {
        let residual = unitarity_defect(m);
        if residual > UNITARY_TOL * m.rows() as f64 {
            return Err(Error::NotUnitary {
                op: "make_canonical",
                what,
                residual,
            });
        }
    }
    let n = u.rows();
    Ok(LinearMap {
        dim: n,
        target: vec![n],
        matrix: canonical_super(lambda, u, v, transpose),
        tag: MapTag::Canonical {
            lambda,
            u: u.clone(),
            v: v.clone(),
            transpose,
        },
    })
}

/// `J(a) = a ⊕ aᵀ`, a Jordan *-homomorphism into the non-prime algebra
/// `M_n ⊕ M_n` that is neither multiplicative nor anti-multiplicative.
pub fn jordan_embedding(a: &CMat) -> Result<BlockMat> {
    a.ensure_square("jordan_embedding")?;
    BlockMat::new(vec![a.clone(), a.transpose()])
}

pub fn jordan_map(n: usize) -> LinearMap {
    let mut t = LinearMap::from_block_fn(n, vec![n, n], |a| jordan_embedding(a).expect("square"));
    t.tag = MapTag::JordanEmbedding;
    t
}

/// On-disk form of a [`LinearMap`]: the supermatrix, the structured
/// canonical fields, or both (then they must agree within 1e-12).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct MapDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<usize>>,
    #[serde(rename = "super", default, skip_serializing_if = "Option::is_none")]
    pub super_matrix: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<MatrixDoc>,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transpose: Option<bool>,
}

const TAG_AGREEMENT: f64 = 1e-12;

impl MapDoc {
    pub fn to_map(&self) -> Result<LinearMap> {
        let structured = match (&self.u, &self.v) {
            (Some(u), Some(v)) => Some(make_canonical(
                self.lambda.unwrap_or(1.0),
                &u.to_dense()?,
                &v.to_dense()?,
                self.transpose.unwrap_or(false),
            )?),
            (None, None) => None,
            _ => return Err(Error::Format("`U` and `V` must be given together".into())),
        };
        let target = self.target.clone().unwrap_or_else(|| vec![self.dim]);
        match (&self.super_matrix, structured) {
            (None, None) => Err(Error::Format(
                "map document needs `super` or `U`/`V`".into(),
            )),
            (None, Some(t)) => {
                if t.dim != self.dim {
                    return Err(Error::Format(format!(
                        "dim = {} but U is {}x{}",
                        self.dim, t.dim, t.dim
                    )));
                }
                Ok(t)
            }
            (Some(doc), structured) => {
                let mut t = LinearMap::from_super_blocks(self.dim, target, doc.to_dense()?)?;
                if let Some(s) = structured {
                    t.tag = s.tag;
                    let defect = t.tag_defect().unwrap_or(0.0);
                    if defect > TAG_AGREEMENT {
                        return Err(Error::Format(format!(
                            "structured fields disagree with `super` (max entry deviation {defect:.3e})"
                        )));
                    }
                }
                Ok(t)
            }
        }
    }
}

impl From<&LinearMap> for MapDoc {
    fn from(t: &LinearMap) -> Self {
        let mut doc = MapDoc {
            dim: t.dim,
            target: (!t.is_endo()).then(|| t.target.clone()),
            super_matrix: Some(MatrixDoc::from(&t.matrix)),
            ..MapDoc::default()
        };
        if let MapTag::Canonical {
            lambda,
            u,
            v,
            transpose,
        } = &t.tag
        {
            doc.lambda = Some(*lambda);
            doc.u = Some(MatrixDoc::from(u));
            doc.v = Some(MatrixDoc::from(v));
            doc.transpose = Some(*transpose);
        }
        doc
    }
}

pub fn parse_map(text: &str) -> Result<LinearMap> {
    let doc: MapDoc = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    doc.to_map()
}

pub fn map_to_string(t: &LinearMap) -> String {
    serde_json::to_string_pretty(&MapDoc::from(t)).expect("map serializes")
}
