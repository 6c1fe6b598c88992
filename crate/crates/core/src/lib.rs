//! Numerical verification of eigenvalue and norm versions of the
//! Vasić–Kečkić form of Bohr's inequality, together with the supporting
//! matrix machinery: a Hermitian Jacobi eigensolver, functional calculus,
//! weak majorization and Ky Fan norms, and positive / completely positive
//! maps with Choi, Kraus and Stinespring representations.

// Negated float comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod cpmaps;
pub mod error;
pub mod harness;
pub mod inequalities;
pub mod linalg;
pub mod majorization;

pub use error::{Error, Result};
