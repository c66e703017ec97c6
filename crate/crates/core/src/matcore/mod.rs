//! Dense complex matrices, SVD-based rank, the tolerance policy and seeded
//! test-element generation.

mod block;
mod dense;
pub mod format;
mod lu;
mod qr;
pub mod sample;
mod svd;
mod tol;

pub use block::BlockMat;
pub use dense::{CMat, C64};
pub use lu::inverse;
pub use qr::lstsq;
pub use sample::{sample, SampleKind};
pub use svd::{rank, spectral_norm, svd, SvdFactors};
pub use tol::{approx_eq, Tol};
