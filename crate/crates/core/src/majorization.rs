//! Weak majorization, singular values and the Ky Fan family of norms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, random::random_frame, CMatrix, HermitianMatrix, Rng};

/// Eigenvalue noise of `A*A` below this magnitude is clamped to zero before
/// taking square roots.
pub const SINGULAR_CLAMP: f64 = 1e-11;

/// Default number of sampled frames per `(A, k)` in [`ky_fan_max_estimate`].
pub const DEFAULT_FRAME_TRIALS: usize = 500;

/// A real vector kept in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumVector(Vec<f64>);

impl SpectrumVector {
    /// Sorts `values` descending. Non-finite entries are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(SpectrumVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Top-`k` partial sums for `k = 1..n`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.0
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    pub fn sum_top(&self, k: usize) -> f64 {
        self.0[..k].iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub partial_sums_lhs: Vec<f64>,
    pub partial_sums_rhs: Vec<f64>,
    /// `min_k (rhs_k − lhs_k)`.
    pub min_slack: f64,
    /// 1-based index of the first `k` whose slack is below `−tol`.
    pub first_violation_k: Option<usize>,
}

/// Compares top-`k` partial sums of two descending vectors.
///
/// Holds iff `Σ_{j≤k} a_j ≤ Σ_{j≤k} b_j + tol` for every `k`.
pub fn weakly_majorized_by(a: &SpectrumVector, b: &SpectrumVector, tol: f64) -> Result<MajorizationVerdict> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            op: "weakly_majorized_by",
            left: (a.len(), 1),
            right: (b.len(), 1),
        });
    }
    Ok(compare_partial_sums(a.partial_sums(), b.partial_sums(), tol))
}

pub(crate) fn compare_partial_sums(lhs: Vec<f64>, rhs: Vec<f64>, tol: f64) -> MajorizationVerdict {
    let slacks: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| r - l).collect();
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let first_violation_k = slacks.iter().position(|&s| s < -tol).map(|i| i + 1);
    MajorizationVerdict {
        holds: first_violation_k.is_none(),
        partial_sums_lhs: lhs,
        partial_sums_rhs: rhs,
        min_slack,
        first_violation_k,
    }
}

/// `s_1 ≥ … ≥ s_n`, the square roots of the eigenvalues of `A*A`.
pub fn singular_values(a: &CMatrix) -> Result<SpectrumVector> {
    a.require_square()?;
    let gram = HermitianMatrix::new(a.adjoint().matmul(a)?.hermitian_part())?;
    let eig = eig_hermitian(&gram)?;
    let sv = eig
        .eigenvalues
        .iter()
        .map(|&l| {
            if (-SINGULAR_CLAMP..0.0).contains(&l) {
                0.0
            } else {
                l.max(0.0).sqrt()
            }
        })
        .collect();
    SpectrumVector::new(sv)
}

/// `‖A‖_(k) = Σ_{j≤k} s_j(A)`.
pub fn ky_fan_norm(a: &CMatrix, k: usize) -> Result<f64> {
    let n = a.require_square()?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("Ky Fan index {k} outside 1..={n}")));
    }
    Ok(singular_values(a)?.sum_top(k))
}

/// Checks `‖A‖_(k) ≤ ‖B‖_(k)` for every `k`, i.e. `s(A) ≺_w s(B)`. By the
/// Ky Fan dominance theorem a passing verdict certifies `|||A||| ≤ |||B|||`
/// for every unitarily invariant norm.
pub fn ky_fan_dominates(b: &CMatrix, a: &CMatrix, tol: f64) -> Result<MajorizationVerdict> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            op: "ky_fan_dominates",
            left: b.shape(),
            right: a.shape(),
        });
    }
    weakly_majorized_by(&singular_values(a)?, &singular_values(b)?, tol)
}

/// `(Σ s_j^p)^{1/p}` for `p ≥ 1`.
pub fn schatten_norm(a: &CMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("Schatten index must be ≥ 1, got {p}")));
    }
    let s = singular_values(a)?;
    Ok(schatten_from_singular_values(s.values(), p))
}

pub(crate) fn schatten_from_singular_values(s: &[f64], p: f64) -> f64 {
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0.0;
    }
    // Factor out s_1 so large p does not overflow.
    top * s.iter().map(|v| (v / top).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// `Σ_j ⟨A x_j, x_j⟩` for the columns `x_j` of `frame`.
pub fn frame_value(a: &HermitianMatrix, frame: &CMatrix) -> Result<f64> {
    let mut total = 0.0;
    for j in 0..frame.cols() {
        total += a.matrix().quadratic_form(&frame.col(j))?.re;
    }
    Ok(total)
}

/// Result of probing the Ky Fan maximum principle.
#[derive(Clone, Debug)]
pub struct KyFanMaxProbe {
    /// Largest frame value among the random frames.
    pub sampled_max: f64,
    /// Frame value of the top-`k` eigenvectors.
    pub eigen_frame_value: f64,
    /// `Σ_{j≤k} λ_j(A)`.
    pub eigen_partial_sum: f64,
}

impl KyFanMaxProbe {
    pub fn estimate(&self) -> f64 {
        self.sampled_max.max(self.eigen_frame_value)
    }
}

/// Samples `trials` random orthonormal `k`-frames plus the eigenvector frame.
pub fn ky_fan_max_probe(a: &HermitianMatrix, k: usize, trials: usize, rng: &mut Rng) -> Result<KyFanMaxProbe> {
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("frame size {k} outside 1..={n}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one frame trial is required".into()));
    }
    let eig = eig_hermitian(a)?;
    let eigen_frame = eig.eigenvectors.block(0, 0, n, k);
    let eigen_frame_value = frame_value(a, &eigen_frame)?;
    let eigen_partial_sum = eig.eigenvalues[..k].iter().sum();
    let mut sampled_max = f64::NEG_INFINITY;
    for _ in 0..trials {
        let frame = random_frame(n, k, rng)?;
        sampled_max = sampled_max.max(frame_value(a, &frame)?);
    }
    Ok(KyFanMaxProbe {
        sampled_max,
        eigen_frame_value,
        eigen_partial_sum,
    })
}

/// `max Σ_{j≤k} ⟨A x_j, x_j⟩` over sampled orthonormal frames and the
/// eigenvector frame.
pub fn ky_fan_max_estimate(a: &HermitianMatrix, k: usize, trials: usize, rng: &mut Rng) -> Result<f64> {
    Ok(ky_fan_max_probe(a, k, trials, rng)?.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary;

    fn sv(v: &[f64]) -> SpectrumVector {
        SpectrumVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn majorization_examples() {
        let v = weakly_majorized_by(&sv(&[2.0, 2.0]), &sv(&[3.0, 1.0]), 0.0).unwrap();
        assert!(v.holds);
        assert_eq!(v.partial_sums_lhs, vec![2.0, 4.0]);
        assert_eq!(v.partial_sums_rhs, vec![3.0, 4.0]);

        let same = weakly_majorized_by(&sv(&[1.0, 5.0]), &sv(&[5.0, 1.0]), 0.0).unwrap();
        assert!(same.holds);
        assert_eq!(same.min_slack, 0.0);

        let bad = weakly_majorized_by(&sv(&[2.0, -3.0]), &sv(&[1.0, 0.0]), 1e-12).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.first_violation_k, Some(1));
    }

    #[test]
    fn length_mismatch() {
        assert!(weakly_majorized_by(&sv(&[1.0]), &sv(&[1.0, 2.0]), 0.0).is_err());
    }

    #[test]
    fn singular_value_examples() {
        let nil = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(singular_values(&nil).unwrap().values(), &[1.0, 0.0]);

        let d = CMatrix::from_real_diag(&[-3.0, 2.0]);
        let s = singular_values(&d).unwrap();
        assert!((s.values()[0] - 3.0).abs() < 1e-14 && (s.values()[1] - 2.0).abs() < 1e-14);

        let u = random_unitary(5, &mut Rng::new(2, 0)).unwrap();
        assert!(singular_values(&u)
            .unwrap()
            .values()
            .iter()
            .all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn ky_fan_examples() {
        let d = CMatrix::from_real_diag(&[3.0, 1.0, -2.0]);
        assert!((ky_fan_norm(&d, 1).unwrap() - 3.0).abs() < 1e-13);
        assert!((ky_fan_norm(&d, 2).unwrap() - 5.0).abs() < 1e-13);
        assert!((ky_fan_norm(&d, 3).unwrap() - 6.0).abs() < 1e-13);
        assert!(ky_fan_norm(&d, 0).is_err());
        assert!(ky_fan_norm(&d, 4).is_err());
    }

    #[test]
    fn dominance_examples() {
        let a = CMatrix::from_real_diag(&[1.0, 1.0]);
        let b = CMatrix::from_real_diag(&[3.0, 0.0]);
        assert!(ky_fan_dominates(&b, &a, 1e-12).unwrap().holds);
        let v = ky_fan_dominates(&a, &a, 1e-12).unwrap();
        assert!(v.holds && v.min_slack.abs() < 1e-14);
        let v = ky_fan_dominates(&a, &CMatrix::from_real_diag(&[2.0, 0.0]), 1e-12).unwrap();
        assert_eq!(v.first_violation_k, Some(1));
        assert!(ky_fan_dominates(&a, &CMatrix::identity(3), 0.0).is_err());
    }

    #[test]
    fn schatten_examples() {
        let d = CMatrix::from_real_diag(&[3.0, 4.0]);
        assert!((schatten_norm(&d, 2.0).unwrap() - 5.0).abs() < 1e-13);
        assert!((schatten_norm(&d, 1.0).unwrap() - ky_fan_norm(&d, 2).unwrap()).abs() < 1e-13);
        let big = schatten_norm(&d, 64.0).unwrap();
        assert!((big - 4.0).abs() / 4.0 < 0.05);
        assert!(schatten_norm(&d, 0.5).is_err());
    }

    #[test]
    fn max_principle_examples() {
        let a = HermitianMatrix::from_real_diag(&[3.0, 2.0, 1.0]);
        let mut rng = Rng::new(4, 0);
        let est = ky_fan_max_estimate(&a, 2, 50, &mut rng).unwrap();
        assert!((est - 5.0).abs() < 1e-12);

        let p = ky_fan_max_probe(&a, 3, 20, &mut rng).unwrap();
        assert!((p.sampled_max - 6.0).abs() < 1e-12);
        assert!(ky_fan_max_probe(&a, 4, 1, &mut rng).is_err());
    }
}
