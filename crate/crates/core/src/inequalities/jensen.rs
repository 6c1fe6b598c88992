//! Jensen-type inequalities for vector states and for positive maps.

use serde::{Deserialize, Serialize};

use super::report::{CheckOptions, CheckReport, Comparison, ReportBuilder};
use super::{record_flags, record_spectrum_in, vector_norm, Flag};
use crate::calculus::{apply_fun, ConvexFunctionSpec};
use crate::cpmaps::{apply_map, unit_image, PositiveMap, PSD_TOL};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_matrix, CMatrix, HermitianMatrix, C64};

/// Allowance on `‖x‖ ≤ 1` and `‖x‖ = 1`.
pub const VECTOR_NORM_TOL: f64 = 1e-12;

/// `f(⟨Ax, x⟩) ≤ ⟨f(A)x, x⟩` for `‖x‖ ≤ 1`, `f` convex with `f(0) ≤ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenVectorInstance {
    pub f: ConvexFunctionSpec,
    #[serde(rename = "A")]
    pub a: HermitianMatrix,
    pub x: Vec<C64>,
}

impl JensenVectorInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("jensen-vec");
        if self.x.len() != self.a.dim() {
            return Err(Error::DimensionMismatch {
                op: "jensen-vec",
                left: self.a.matrix().shape(),
                right: (self.x.len(), 1),
            });
        }
        let mut ok = record_flags(
            &mut b,
            &self.f,
            &[Flag::Convex, Flag::ZeroInDomain, Flag::F0Nonpositive],
        );
        let norm = vector_norm(&self.x);
        ok &= b.hypothesis("‖x‖ ≤ 1", norm <= 1.0 + VECTOR_NORM_TOL, Some(format!("‖x‖ = {norm}")));
        ok &= record_spectrum_in(&mut b, "spectrum(A) ⊂ J", self.a.matrix(), &self.f)?;
        if !ok {
            return Ok(b.not_applicable(Comparison::Scalar));
        }
        let lhs = self.f.eval_in_domain(self.a.matrix().quadratic_form(&self.x)?.re)?;
        let fa = apply_fun(&self.f, &self.a)?;
        let rhs = fa.matrix().quadratic_form(&self.x)?.re;
        Ok(b.compare(Comparison::Scalar, vec![lhs], vec![rhs], opts))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JensenVariant {
    /// `0 < Φ(I) ≤ I`, `‖x‖ ≤ 1`, `0 ∈ J`, `f(0) ≤ 0`.
    Subunital,
    /// `Φ(I) = I`, `‖x‖ = 1`; no condition on `0` or `f(0)`.
    UnitalRemark,
}

/// `f(⟨Φ(A)x, x⟩) ≤ ⟨Φ(f(A))x, x⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JensenMapInstance {
    pub f: ConvexFunctionSpec,
    #[serde(rename = "A")]
    pub a: HermitianMatrix,
    pub map: PositiveMap,
    pub x: Vec<C64>,
    pub variant: JensenVariant,
}

impl JensenMapInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("jensen-map");
        let (n, m) = self.map.dims()?;
        if n != self.a.dim() || m != self.x.len() {
            return Err(Error::DimensionMismatch {
                op: "jensen-map",
                left: (n, m),
                right: (self.a.dim(), self.x.len()),
            });
        }
        let unit = unit_image(&self.map)?;
        let unit_eig = eig_hermitian_matrix(&unit)?;
        let norm = vector_norm(&self.x);
        let mut ok = b.hypothesis("map is positive", true, None);
        match self.variant {
            JensenVariant::Subunital => {
                ok &= record_flags(
                    &mut b,
                    &self.f,
                    &[Flag::Convex, Flag::ZeroInDomain, Flag::F0Nonpositive],
                );
                ok &= b.hypothesis(
                    "0 < Φ(I)",
                    unit_eig.min() > PSD_TOL,
                    Some(format!("λ_min(Φ(I)) = {:e}", unit_eig.min())),
                );
                ok &= b.hypothesis(
                    "Φ(I) ≤ I",
                    unit_eig.max() <= 1.0 + PSD_TOL,
                    Some(format!("λ_max(Φ(I)) = {}", unit_eig.max())),
                );
                ok &= b.hypothesis("‖x‖ ≤ 1", norm <= 1.0 + VECTOR_NORM_TOL, Some(format!("‖x‖ = {norm}")));
            }
            JensenVariant::UnitalRemark => {
                ok &= record_flags(&mut b, &self.f, &[Flag::Convex]);
                let defect = (&unit - &CMatrix::identity(m)).frobenius_norm();
                ok &= b.hypothesis(
                    "Φ(I) = I",
                    defect <= PSD_TOL,
                    Some(format!("‖Φ(I) − I‖_F = {defect:e}")),
                );
                ok &= b.hypothesis(
                    "‖x‖ = 1",
                    (norm - 1.0).abs() <= VECTOR_NORM_TOL,
                    Some(format!("‖x‖ = {norm}")),
                );
            }
        }
        ok &= record_spectrum_in(&mut b, "spectrum(A) ⊂ J", self.a.matrix(), &self.f)?;
        if !ok {
            return Ok(b.not_applicable(Comparison::Scalar));
        }
        let phi_a = apply_map(&self.map, self.a.matrix())?;
        let lhs = self.f.eval_in_domain(phi_a.quadratic_form(&self.x)?.re)?;
        let fa = apply_fun(&self.f, &self.a)?;
        let rhs = apply_map(&self.map, fa.matrix())?.quadratic_form(&self.x)?.re;
        Ok(b.compare(Comparison::Scalar, vec![lhs], vec![rhs], opts))
    }
}
