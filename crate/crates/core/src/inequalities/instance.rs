use serde::{Deserialize, Serialize};

use super::jensen::{JensenMapInstance, JensenVariant, JensenVectorInstance};
use super::report::{fnv1a64, CheckOptions, CheckReport};
use super::scalar::{ScalarBohrInstance, VasicKeckicInstance};
use super::spectral::{
    CongruenceInstance, EigenBohrInstance, IncreasingConvexInstance, NormBohrInstance, PointwiseBohrInstance,
    SumSquareInstance, WeakMajorInstance,
};
use crate::calculus::ConvexFunctionSpec;
use crate::cpmaps::{PositiveMap, WeightedTerm};
use crate::error::Result;
use crate::linalg::{CMatrix, HermitianMatrix, C64};

/// Every theorem id accepted in instance files and on the command line.
pub const THEOREM_IDS: [&str; 11] = [
    "bohr",
    "vasic",
    "jensen-vec",
    "jensen-map",
    "thm1",
    "cornew",
    "cor45",
    "zh",
    "prop-r2",
    "sumsq",
    "inc-convex",
];

/// A checkable instance, tagged by theorem id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "theorem")]
pub enum Instance {
    #[serde(rename = "bohr")]
    ScalarBohr(ScalarBohrInstance),
    #[serde(rename = "vasic")]
    VasicKeckic(VasicKeckicInstance),
    #[serde(rename = "jensen-vec")]
    JensenVector(JensenVectorInstance),
    #[serde(rename = "jensen-map")]
    JensenMap(JensenMapInstance),
    #[serde(rename = "thm1")]
    WeakMajor(WeakMajorInstance),
    #[serde(rename = "cornew")]
    Congruence(CongruenceInstance),
    #[serde(rename = "cor45", alias = "cor4.5")]
    EigenBohr(EigenBohrInstance),
    #[serde(rename = "zh")]
    NormBohr(NormBohrInstance),
    #[serde(rename = "prop-r2")]
    PointwiseBohr(PointwiseBohrInstance),
    #[serde(rename = "sumsq")]
    SumSquare(SumSquareInstance),
    #[serde(rename = "inc-convex")]
    IncreasingConvex(IncreasingConvexInstance),
}

impl Instance {
    pub fn theorem_id(&self) -> &'static str {
        match self {
            Instance::ScalarBohr(_) => "bohr",
            Instance::VasicKeckic(_) => "vasic",
            Instance::JensenVector(_) => "jensen-vec",
            Instance::JensenMap(_) => "jensen-map",
            Instance::WeakMajor(_) => "thm1",
            Instance::Congruence(_) => "cornew",
            Instance::EigenBohr(_) => "cor45",
            Instance::NormBohr(_) => "zh",
            Instance::PointwiseBohr(_) => "prop-r2",
            Instance::SumSquare(_) => "sumsq",
            Instance::IncreasingConvex(_) => "inc-convex",
        }
    }

    /// FNV-1a of the canonical JSON encoding.
    pub fn digest(&self) -> u64 {
        fnv1a64(&serde_json::to_vec(self).expect("instances always serialize"))
    }

    pub fn check(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut report = match self {
            Instance::ScalarBohr(i) => i.evaluate(opts),
            Instance::VasicKeckic(i) => i.evaluate(opts),
            Instance::JensenVector(i) => i.evaluate(opts)?,
            Instance::JensenMap(i) => i.evaluate(opts)?,
            Instance::WeakMajor(i) => i.evaluate(opts)?,
            Instance::Congruence(i) => i.evaluate(opts)?,
            Instance::EigenBohr(i) => i.evaluate(opts)?,
            Instance::NormBohr(i) => i.evaluate(opts)?,
            Instance::PointwiseBohr(i) => i.evaluate(opts)?,
            Instance::SumSquare(i) => i.evaluate(opts)?,
            Instance::IncreasingConvex(i) => i.evaluate(opts)?,
        };
        report.input_digest = self.digest();
        Ok(report)
    }
}

/// An instance together with the report it produced, as written by the
/// fuzzer for every violation and read back by `bohr check`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub instance: Instance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    /// Right-hand-side multiplier the report was produced with, when not 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_factor: Option<f64>,
}

pub fn check_scalar_bohr(z: C64, w: C64, p: f64, opts: &CheckOptions) -> CheckReport {
    Instance::ScalarBohr(ScalarBohrInstance { z, w, p })
        .check(opts)
        .expect("the scalar checker is infallible")
}

pub fn check_vasic_keckic(z: &[C64], p: &[f64], r: f64, opts: &CheckOptions) -> CheckReport {
    Instance::VasicKeckic(VasicKeckicInstance {
        z: z.to_vec(),
        p: p.to_vec(),
        r,
    })
    .check(opts)
    .expect("the scalar checker is infallible")
}

pub fn check_jensen_vector(
    f: &ConvexFunctionSpec,
    a: &HermitianMatrix,
    x: &[C64],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    Instance::JensenVector(JensenVectorInstance {
        f: f.clone(),
        a: a.clone(),
        x: x.to_vec(),
    })
    .check(opts)
}

pub fn check_jensen_map(
    f: &ConvexFunctionSpec,
    a: &HermitianMatrix,
    map: &PositiveMap,
    x: &[C64],
    variant: JensenVariant,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    Instance::JensenMap(JensenMapInstance {
        f: f.clone(),
        a: a.clone(),
        map: map.clone(),
        x: x.to_vec(),
        variant,
    })
    .check(opts)
}

pub fn check_thm_weak_major(
    f: &ConvexFunctionSpec,
    a: &HermitianMatrix,
    maps: &[WeightedTerm],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    Instance::WeakMajor(WeakMajorInstance {
        f: f.clone(),
        a: a.clone(),
        maps: maps.to_vec(),
    })
    .check(opts)
}

pub fn check_cor_congruence(
    f: &ConvexFunctionSpec,
    a: &[HermitianMatrix],
    x: &[CMatrix],
    alpha: &[f64],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    Instance::Congruence(CongruenceInstance {
        f: f.clone(),
        a: a.to_vec(),
        x: x.to_vec(),
        alpha: alpha.to_vec(),
    })
    .check(opts)
}

pub fn check_eigen_bohr(
    a: &[HermitianMatrix],
    x: &[CMatrix],
    p: &[f64],
    r: f64,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    Instance::EigenBohr(EigenBohrInstance {
        a: a.to_vec(),
        x: x.to_vec(),
        p: p.to_vec(),
        r,
    })
    .check(opts)
}

pub fn check_norm_bohr(a: &[HermitianMatrix], p: &[f64], r: f64, opts: &CheckOptions) -> Result<CheckReport> {
    Instance::NormBohr(NormBohrInstance {
        a: a.to_vec(),
        p: p.to_vec(),
        r,
    })
    .check(opts)
}

pub fn check_pointwise_bohr_r2(a: &[CMatrix], p: &[f64], r: f64, opts: &CheckOptions) -> Result<CheckReport> {
    Instance::PointwiseBohr(PointwiseBohrInstance {
        a: a.to_vec(),
        p: p.to_vec(),
        r,
    })
    .check(opts)
}

pub fn check_sum_square(a: &[CMatrix], p: &[f64], opts: &CheckOptions) -> Result<CheckReport> {
    Instance::SumSquare(SumSquareInstance {
        a: a.to_vec(),
        p: p.to_vec(),
    })
    .check(opts)
}

pub fn check_increasing_convex_eigen(
    f: &ConvexFunctionSpec,
    a: &[HermitianMatrix],
    p: &[f64],
    opts: &CheckOptions,
) -> Result<CheckReport> {
    Instance::IncreasingConvex(IncreasingConvexInstance {
        f: f.clone(),
        a: a.to_vec(),
        p: p.to_vec(),
    })
    .check(opts)
}
