//! Dense complex linear algebra: matrices, the Hermitian eigensolver and
//! seeded random generation.

mod eig;
mod matrix;
pub mod random;

pub use eig::{
    abs_matrix, eig_hermitian, eig_hermitian_matrix, eigenvalues, EigenDecomposition, MAX_SWEEPS, OFF_DIAGONAL_TOL,
};
pub use matrix::{CMatrix, HermitianMatrix, C64, HERMITIAN_TOL, SPECTRUM_TOL};
pub use random::{random_hermitian, random_map_family, random_unitary, Rng};

/// `max(1, x)`, the scale every relative tolerance is measured against.
#[inline]
pub fn scale_of(x: f64) -> f64 {
    x.abs().max(1.0)
}
