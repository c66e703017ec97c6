//! Generalized inverses, matrix partial orders and the analysis of linear maps
//! that preserve the diamond order on `M_n(ℂ)` and block-diagonal algebras.
//!
//! * [`matcore`]: dense complex matrices, SVD, rank, tolerances, sampling.
//! * [`geninv`]: Moore-Penrose, group and inner inverses.
//! * [`orders`]: space, diamond, star, left/right-star, minus and sharp orders.
//! * [`structure`]: rank-one elements, minimal/maximal elements, projection
//!   and invertibility characterizations, scalar-unitary multipliers.
//! * [`preservers`]: linear maps as supermatrices, canonical preservers,
//!   Jordan *-homomorphisms, preservation checks and decomposition.
//! * [`suite`]: the seeded property-suite runner behind `diamond-lab props`.

pub mod error;
pub mod geninv;
pub mod matcore;
pub mod orders;
pub mod preservers;
pub mod structure;
pub mod suite;

pub use error::{Error, Result};
pub use matcore::{approx_eq, rank, sample, svd, BlockMat, CMat, SampleKind, SvdFactors, Tol, C64};
pub use orders::{OrderKind, OrderReport, Verdict};
