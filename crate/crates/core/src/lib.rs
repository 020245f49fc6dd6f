//! Exact combinatorics of extended affine Weyl groups, affine Hecke algebras,
//! and depth-zero test functions for GL_d.
//!
//! Everything is computed over exact scalars: Laurent polynomials in v
//! (v² = q) with coefficients in a cyclotomic field ℚ(ζ_m). No floating
//! point appears anywhere in the library.

pub mod admissible;
pub mod depthzero;
pub mod error;
pub mod hecke;
pub mod perm;
pub mod scalar;
pub mod testfcn;
pub mod weyl;

pub use error::{Error, Result};
pub use perm::Perm;
pub use scalar::{parse_scalar, Scalar};
pub use weyl::{parse_elem_json, BaseAlcove, ExtAffElem, WeylCtx};
