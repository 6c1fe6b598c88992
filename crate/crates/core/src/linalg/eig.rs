//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq = |a_pq|e^{iφ}`
//! and then applies the classical real Jacobi rotation, so the combined
//! unitary on the `(p, q)` plane is
//!
//! ```text
//!     G = [  c          s·e^{iφ} ]
//!         [ -s·e^{-iφ}  c        ]
//! ```
//!
//! and `A ← G* A G`, `V ← V G`. Sweeps stop once the off-diagonal Frobenius
//! norm drops below `1e-13·‖A‖_F`.

use super::matrix::{CMatrix, HermitianMatrix, C64};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;

#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal columns; column `j` pairs with `eigenvalues[j]`.
    pub eigenvectors: CMatrix,
}

impl EigenDecomposition {
    /// `U diag(g(λ)) U*`.
    pub fn reconstruct_with(&self, mut g: impl FnMut(f64) -> f64) -> CMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, v) in vals.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * *v;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }
}

pub fn eig_hermitian(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    jacobi(a.matrix())
}

/// Eigendecomposition of a plain matrix after checking it is Hermitian.
pub fn eig_hermitian_matrix(a: &CMatrix) -> Result<EigenDecomposition> {
    eig_hermitian(&HermitianMatrix::new(a.clone())?)
}

/// Descending eigenvalues only.
pub fn eigenvalues(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(a)?.eigenvalues)
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(input: &CMatrix) -> Result<EigenDecomposition> {
    let n = input.require_square()?;
    let mut a = input.clone();
    let mut v = CMatrix::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm();

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: equal eigenvalues keep their original index order.
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta.is_finite() {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    } else {
        0.0
    };
    if t == 0.0 {
        return;
    }
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let s_phase = phase * s; // s·e^{iφ}
    let n = a.rows();

    // A ← A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - s_phase.conj() * akq;
        a[(k, q)] = s_phase * akp + akq * c;
    }
    // A ← G* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - s_phase * aqk;
        a[(q, k)] = s_phase.conj() * apk + aqk * c;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - s_phase.conj() * vkq;
        v[(k, q)] = s_phase * vkp + vkq * c;
    }
}

/// `|A| = (A*A)^{1/2}`, via the eigendecomposition of `A*A`.
pub fn abs_matrix(a: &CMatrix) -> Result<HermitianMatrix> {
    a.require_square()?;
    let gram = HermitianMatrix::from_parts_unchecked(a.adjoint().matmul(a)?.hermitian_part(), None);
    let eig = eig_hermitian(&gram)?;
    Ok(HermitianMatrix::from_parts_unchecked(
        eig.reconstruct_with(|l| l.max(0.0).sqrt()),
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let e = eig_hermitian(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn analytic_two_by_two() {
        let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        let e = eig_hermitian_matrix(&a).unwrap();
        assert!((e.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_y() {
        let y = CMatrix::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let e = eig_hermitian_matrix(&y).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-12);
        let recon = e.reconstruct();
        assert!((&recon - &y).frobenius_norm() < 1e-12);
    }

    #[test]
    fn ties_keep_index_order() {
        let e = eig_hermitian(&HermitianMatrix::from_real_diag(&[1.0, 2.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![2.0, 1.0, 1.0]);
        // the first 1.0 came from index 0, so column 1 is e_0
        assert_eq!(e.eigenvectors[(0, 1)], c(1.0, 0.0));
        assert_eq!(e.eigenvectors[(2, 2)], c(1.0, 0.0));
    }

    #[test]
    fn non_square_rejected() {
        let m = CMatrix::zeros(2, 3);
        assert!(matches!(abs_matrix(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn abs_of_diagonal() {
        let a = CMatrix::from_real_diag(&[-3.0, 2.0]);
        let r = abs_matrix(&a).unwrap();
        assert!((r.matrix() - &CMatrix::from_real_diag(&[3.0, 2.0])).frobenius_norm() < 1e-14);
    }

    #[test]
    fn abs_of_nilpotent() {
        let a = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = abs_matrix(&a).unwrap();
        assert!((r.matrix() - &CMatrix::from_real_diag(&[0.0, 1.0])).frobenius_norm() < 1e-14);
    }

    #[test]
    fn abs_of_jordan_block_has_golden_ratio_spectrum() {
        // A*A = [[1,1],[1,2]], characteristic polynomial t² − 3t + 1,
        // roots φ² and φ⁻², so |A| has eigenvalues φ and 1/φ.
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        let e = eig_hermitian(&abs_matrix(&a).unwrap()).unwrap();
        assert!((e.eigenvalues[0] - phi).abs() < 1e-12);
        assert!((e.eigenvalues[1] - 1.0 / phi).abs() < 1e-12);
    }
}
