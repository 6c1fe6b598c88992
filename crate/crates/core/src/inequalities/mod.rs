//! Checkers for the scalar, vector and eigenvalue inequalities.
//!
//! Every checker records its hypotheses first. If one fails the verdict is
//! [`Verdict::NotApplicable`] and nothing is compared; structural problems
//! (mismatched dimensions, non-square inputs) are returned as errors.

mod instance;
mod jensen;
mod report;
mod scalar;
mod spectral;
mod weights;

pub use instance::{
    check_cor_congruence, check_eigen_bohr, check_increasing_convex_eigen, check_jensen_map, check_jensen_vector,
    check_norm_bohr, check_pointwise_bohr_r2, check_scalar_bohr, check_sum_square, check_thm_weak_major,
    check_vasic_keckic, Instance, InstanceFile, THEOREM_IDS,
};
pub use jensen::{JensenMapInstance, JensenVariant, JensenVectorInstance, VECTOR_NORM_TOL};
pub use report::{
    fnv1a64, CheckOptions, CheckReport, Comparison, CrossCheck, HypothesisCheck, Verdict, DEFAULT_TOL_FACTOR,
    EQUALITY_TOL, TOL_ENV,
};
pub use scalar::{ScalarBohrInstance, VasicKeckicInstance};
pub use spectral::{
    CongruenceInstance, EigenBohrInstance, IncreasingConvexInstance, NormBohrInstance, PointwiseBohrInstance,
    SumSquareInstance, SumSquareParts, WeakMajorInstance, CONSTRAINT_TOL, SCHATTEN_CROSS_CHECK,
    SUM_SQUARE_IDENTITY_TOL,
};
pub use weights::{bohr_constant, bohr_weight_sum, WeightConstraint, WeightVector, SUM_TO_ONE_TOL};

use report::ReportBuilder;

use crate::calculus::{ConvexFunctionSpec, DOMAIN_CLAMP_TOL};
use crate::error::Result;
use crate::linalg::{eig_hermitian_matrix, CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flag {
    Convex,
    ZeroInDomain,
    F0Nonpositive,
    Increasing,
    Submultiplicative,
}

/// Records one hypothesis per requested flag of `f`.
pub(crate) fn record_flags(b: &mut ReportBuilder, f: &ConvexFunctionSpec, flags: &[Flag]) -> bool {
    let got = f.flags();
    let mut ok = true;
    for flag in flags {
        let (name, passed) = match flag {
            Flag::Convex => ("f convex on J", got.convex_on_j),
            Flag::ZeroInDomain => ("0 ∈ J", got.zero_in_j),
            Flag::F0Nonpositive => ("f(0) ≤ 0", got.f0_nonpositive),
            Flag::Increasing => ("f increasing on J", got.increasing),
            Flag::Submultiplicative => ("f(uv) ≤ f(u)f(v)", got.submultiplicative),
        };
        ok &= b.hypothesis(name, passed, Some(format!("{} on {:?}", f.id(), f.domain())));
    }
    ok
}

/// Records whether the spectrum of `a` lies in the domain of `f`, up to the
/// clamping tolerance.
pub(crate) fn record_spectrum_in(
    b: &mut ReportBuilder,
    name: &str,
    a: &CMatrix,
    f: &ConvexFunctionSpec,
) -> Result<bool> {
    let e = eig_hermitian_matrix(a)?;
    let j = f.domain();
    let outside = e
        .eigenvalues
        .iter()
        .find(|&&l| !j.contains_within(l, DOMAIN_CLAMP_TOL * l.abs().max(1.0)));
    Ok(b.hypothesis(
        name,
        outside.is_none(),
        outside.map(|l| format!("eigenvalue {l} outside [{}, {}]", j.lo, j.hi)),
    ))
}

pub(crate) fn vector_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Descending eigenvalues of the Hermitian part of `m`.
pub(crate) fn desc_eigs(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian_matrix(&m.hermitian_part())?.eigenvalues)
}
