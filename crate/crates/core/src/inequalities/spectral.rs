//! Eigenvalue inequalities: the weak-majorization theorem for positive maps
//! and the Bohr-type results derived from it.

use serde::{Deserialize, Serialize};

use super::report::{prefix_sums, CheckOptions, CheckReport, Comparison, ReportBuilder};
use super::weights::{bohr_constant, bohr_weight_sum, WeightConstraint, WeightVector};
use super::{desc_eigs, record_flags, record_spectrum_in, Flag};
use crate::calculus::{abs_power, apply_fun, ConvexFunctionSpec, Interval};
use crate::cpmaps::{apply_map, unit_image, WeightedTerm};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian_matrix, CMatrix, HermitianMatrix};
use crate::majorization::{ky_fan_dominates, schatten_from_singular_values, singular_values};

/// Relative bound on the residual of the sum-of-squares identity.
pub const SUM_SQUARE_IDENTITY_TOL: f64 = 1e-11;

/// Schatten indices used to cross-check Ky Fan dominance.
pub const SCHATTEN_CROSS_CHECK: [f64; 5] = [1.0, 1.5, 2.0, 3.0, 10.0];

/// Allowance on the Loewner-order constraints of the hypotheses.
pub const CONSTRAINT_TOL: f64 = 1e-10;

fn weighted_sum(parts: impl IntoIterator<Item = (f64, CMatrix)>) -> Result<CMatrix> {
    let mut acc: Option<CMatrix> = None;
    for (w, m) in parts {
        match acc.as_mut() {
            Some(a) => a.axpy(w, &m)?,
            None => acc = Some(m.scale(w)),
        }
    }
    acc.ok_or_else(|| Error::InvalidParameter("empty family".into()))
}

fn hermitian(m: CMatrix) -> Result<HermitianMatrix> {
    HermitianMatrix::new(m)
}

fn require_same_len(op: &'static str, a: usize, b: usize) -> Result<()> {
    if a != b || a == 0 {
        return Err(Error::DimensionMismatch {
            op,
            left: (a, 1),
            right: (b, 1),
        });
    }
    Ok(())
}

fn require_common_square<'a>(op: &'static str, ms: impl IntoIterator<Item = &'a CMatrix>) -> Result<usize> {
    let mut n = None;
    for m in ms {
        let d = m.require_square()?;
        match n {
            None => n = Some(d),
            Some(n0) if n0 != d => {
                return Err(Error::DimensionMismatch {
                    op,
                    left: (n0, n0),
                    right: (d, d),
                })
            }
            _ => {}
        }
    }
    n.ok_or_else(|| Error::InvalidParameter(format!("{op}: empty family")))
}

/// `Σ_{j≤k} λ_j(f(Σ α_i Φ_i(A))) ≤ Σ_{j≤k} λ_j(Σ α_i Φ_i(f(A)))` for every `k`,
/// given `0 ≤ Σ α_i Φ_i(I) ≤ I`, `f` convex on `J ∋ 0`, `f(0) ≤ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakMajorInstance {
    pub f: ConvexFunctionSpec,
    #[serde(rename = "A")]
    pub a: HermitianMatrix,
    pub maps: Vec<WeightedTerm>,
}

impl WeakMajorInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("thm1");
        let n = self.a.dim();
        let first = self
            .maps
            .first()
            .ok_or_else(|| Error::InvalidParameter("thm1 needs at least one map".into()))?;
        let (_, m) = first.map.dims()?;
        for t in &self.maps {
            let d = t.map.dims()?;
            if d != (n, m) {
                return Err(Error::DimensionMismatch {
                    op: "thm1",
                    left: (n, m),
                    right: d,
                });
            }
        }
        let mut ok = record_flags(
            &mut b,
            &self.f,
            &[Flag::Convex, Flag::ZeroInDomain, Flag::F0Nonpositive],
        );
        ok &= b.hypothesis(
            "α_i ≥ 0",
            self.maps.iter().all(|t| t.alpha >= 0.0 && t.alpha.is_finite()),
            Some("negative weight".into()),
        );
        ok &= record_spectrum_in(&mut b, "spectrum(A) ⊂ J", self.a.matrix(), &self.f)?;
        if ok {
            let unit = weighted_sum(
                self.maps
                    .iter()
                    .map(|t| Ok((t.alpha, unit_image(&t.map)?)))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let e = eig_hermitian_matrix(&unit)?;
            ok &= b.hypothesis(
                "0 ≤ Σ α_i Φ_i(I)",
                e.min() >= -CONSTRAINT_TOL,
                Some(format!("λ_min = {:e}", e.min())),
            );
            ok &= b.hypothesis(
                "Σ α_i Φ_i(I) ≤ I",
                e.max() <= 1.0 + CONSTRAINT_TOL,
                Some(format!("λ_max = {}", e.max())),
            );
        }
        if !ok {
            return Ok(b.not_applicable(Comparison::PartialSums));
        }

        let combined = |x: &CMatrix| -> Result<CMatrix> {
            weighted_sum(
                self.maps
                    .iter()
                    .map(|t| Ok((t.alpha, apply_map(&t.map, x)?)))
                    .collect::<Result<Vec<_>>>()?,
            )
        };
        let s = hermitian(combined(self.a.matrix())?)?;
        let lhs = desc_eigs(apply_fun(&self.f, &s)?.matrix())?;
        let fa = apply_fun(&self.f, &self.a)?;
        let rhs = desc_eigs(&combined(fa.matrix())?)?;
        Ok(b.compare(Comparison::PartialSums, prefix_sums(&lhs), prefix_sums(&rhs), opts))
    }
}

/// Congruence form:
/// `Σ_{j≤k} λ_j(f(Σ X_i* A_i X_i)) ≤ Σ_{j≤k} λ_j(Σ α_i f(α_i⁻¹) X_i* f(A_i) X_i)`
/// given `Σ α_i X_i* X_i ≤ I` and `f` convex, submultiplicative, `f(0) ≤ 0`.
///
/// The function must be convex on the whole line; its flags are re-scanned
/// on the window `[−W, W]`, `W = 10·max(1, |spectra|, max α_i⁻¹)`, which
/// contains every point at which `f` is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceInstance {
    pub f: ConvexFunctionSpec,
    #[serde(rename = "A")]
    pub a: Vec<HermitianMatrix>,
    #[serde(rename = "X")]
    pub x: Vec<CMatrix>,
    pub alpha: Vec<f64>,
}

impl CongruenceInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("cornew");
        require_same_len("cornew", self.a.len(), self.x.len())?;
        require_same_len("cornew", self.a.len(), self.alpha.len())?;
        let n = require_common_square("cornew", self.a.iter().map(HermitianMatrix::matrix))?;
        let xdim = self.x[0].shape();
        if xdim.0 != n || self.x.iter().any(|x| x.shape() != xdim) {
            return Err(Error::DimensionMismatch {
                op: "cornew",
                left: (n, xdim.1),
                right: xdim,
            });
        }
        let mut ok = b.hypothesis(
            "α_i > 0",
            self.alpha.iter().all(|&a| a > 0.0 && a.is_finite()),
            Some(format!("{:?}", self.alpha)),
        );
        if ok {
            let gram = weighted_sum(
                self.x
                    .iter()
                    .zip(&self.alpha)
                    .map(|(x, &a)| Ok((a, x.adjoint().matmul(x)?)))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let top = eig_hermitian_matrix(&gram)?.max();
            ok &= b.hypothesis(
                "Σ α_i X_i* X_i ≤ I",
                top <= 1.0 + CONSTRAINT_TOL,
                Some(format!("λ_max = {top}")),
            );
        }
        if !ok {
            return Ok(b.not_applicable(Comparison::PartialSums));
        }

        let s = hermitian(weighted_sum(
            self.a
                .iter()
                .zip(&self.x)
                .map(|(a, x)| Ok((1.0, a.matrix().congruence(x)?)))
                .collect::<Result<Vec<_>>>()?,
        )?)?;
        let mut radius: f64 = 1.0;
        for a in &self.a {
            let e = eig_hermitian_matrix(a.matrix())?;
            radius = radius.max(e.max().abs()).max(e.min().abs());
        }
        let es = eig_hermitian_matrix(s.matrix())?;
        radius = radius.max(es.max().abs()).max(es.min().abs());
        radius = self.alpha.iter().fold(radius, |acc, a| acc.max(1.0 / a));
        let window = Interval::symmetric(10.0 * radius);
        let fw = match self.f.on_domain(window) {
            Ok(fw) => fw,
            Err(e) => {
                b.hypothesis("f defined on the scan window", false, Some(e.to_string()));
                return Ok(b.not_applicable(Comparison::PartialSums));
            }
        };
        if !record_flags(
            &mut b,
            &fw,
            &[Flag::Convex, Flag::F0Nonpositive, Flag::Submultiplicative],
        ) {
            return Ok(b.not_applicable(Comparison::PartialSums));
        }

        let lhs = desc_eigs(apply_fun(&fw, &s)?.matrix())?;
        let mut parts = Vec::with_capacity(self.a.len());
        for ((a, x), &alpha) in self.a.iter().zip(&self.x).zip(&self.alpha) {
            let fa = apply_fun(&fw, a)?;
            parts.push((alpha * fw.eval(1.0 / alpha), fa.matrix().congruence(x)?));
        }
        let rhs = desc_eigs(&weighted_sum(parts)?)?;
        Ok(b.compare(Comparison::PartialSums, prefix_sums(&lhs), prefix_sums(&rhs), opts))
    }
}

/// Eigenvalue form of the Vasić–Kečkić inequality:
/// `Σ_{j≤k} λ_j(|Σ X_i* A_i X_i|^r) ≤ (Σ p_i^{1/(1−r)})^{r−1} Σ_{j≤k} λ_j(Σ p_i X_i* |A_i|^r X_i)`
/// given `Σ p_i^{1/(1−r)} X_i* X_i ≤ (Σ p_i^{1/(1−r)}) I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenBohrInstance {
    #[serde(rename = "A")]
    pub a: Vec<HermitianMatrix>,
    #[serde(rename = "X")]
    pub x: Vec<CMatrix>,
    pub p: Vec<f64>,
    pub r: f64,
}

impl EigenBohrInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("cor45");
        require_same_len("cor45", self.a.len(), self.x.len())?;
        require_same_len("cor45", self.a.len(), self.p.len())?;
        let n = require_common_square("cor45", self.a.iter().map(HermitianMatrix::matrix))?;
        require_common_square("cor45", self.x.iter())?;
        if self.x[0].rows() != n {
            return Err(Error::DimensionMismatch {
                op: "cor45",
                left: (n, n),
                right: self.x[0].shape(),
            });
        }
        let r = self.r;
        let mut ok = WeightVector::new(self.p.clone(), WeightConstraint::BohrConstraint { r }).record(&mut b);
        if ok {
            let e = 1.0 / (1.0 - r);
            let total = bohr_weight_sum(&self.p, r);
            let gram = weighted_sum(
                self.x
                    .iter()
                    .zip(&self.p)
                    .map(|(x, &p)| Ok((p.powf(e), x.adjoint().matmul(x)?)))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let top = eig_hermitian_matrix(&gram)?.max();
            ok &= b.hypothesis(
                "Σ p_i^{1/(1−r)} X_i* X_i ≤ (Σ p_i^{1/(1−r)}) I",
                top <= total * (1.0 + CONSTRAINT_TOL),
                Some(format!("λ_max = {top}, bound = {total}")),
            );
        }
        if !ok {
            return Ok(b.not_applicable(Comparison::PartialSums));
        }

        let s = weighted_sum(
            self.a
                .iter()
                .zip(&self.x)
                .map(|(a, x)| Ok((1.0, a.matrix().congruence(x)?)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let lhs = desc_eigs(abs_power(&s, r)?.matrix())?;
        let mut parts = Vec::with_capacity(self.a.len());
        for ((a, x), &p) in self.a.iter().zip(&self.x).zip(&self.p) {
            parts.push((p, abs_power(a.matrix(), r)?.matrix().congruence(x)?));
        }
        let c = bohr_constant(&self.p, r);
        let rhs: Vec<f64> = prefix_sums(&desc_eigs(&weighted_sum(parts)?)?)
            .into_iter()
            .map(|v| c * v)
            .collect();
        Ok(b.compare(Comparison::PartialSums, prefix_sums(&lhs), rhs, opts))
    }
}

/// Norm form for `1 < r ≤ 2`: the weak majorization
/// `λ(|Σ A_i|^r) ≺_w λ(Σ p_i⁻¹ |A_i|^r)`, which by Ky Fan dominance gives
/// `||| |Σ A_i|^r ||| ≤ ||| Σ p_i⁻¹ |A_i|^r |||` for every unitarily
/// invariant norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBohrInstance {
    #[serde(rename = "A")]
    pub a: Vec<HermitianMatrix>,
    pub p: Vec<f64>,
    pub r: f64,
}

impl NormBohrInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("zh");
        require_same_len("zh", self.a.len(), self.p.len())?;
        require_common_square("zh", self.a.iter().map(HermitianMatrix::matrix))?;
        let r = self.r;
        let mut ok = WeightVector::new(self.p.clone(), WeightConstraint::SumToOne).record(&mut b);
        ok &= b.hypothesis("1 < r ≤ 2", r > 1.0 && r <= 2.0, Some(format!("r = {r}")));
        if !ok {
            return Ok(b.not_applicable(Comparison::PartialSums));
        }

        let sum = weighted_sum(self.a.iter().map(|a| (1.0, a.matrix().clone())))?;
        let left = abs_power(&sum, r)?;
        let mut parts = Vec::with_capacity(self.a.len());
        for (a, &p) in self.a.iter().zip(&self.p) {
            parts.push((1.0 / p, abs_power(a.matrix(), r)?.into_matrix()));
        }
        let right = weighted_sum(parts)?;
        let lhs = prefix_sums(&desc_eigs(left.matrix())?);
        let rhs = prefix_sums(&desc_eigs(&right)?);

        let scale = lhs.iter().chain(&rhs).fold(1.0f64, |acc, v| acc.max(v.abs()));
        let tol = opts.tol_factor * scale;
        let dominance = ky_fan_dominates(&right, left.matrix(), tol)?;
        b.cross_check("Ky Fan dominance deficit", -dominance.min_slack, tol);
        if dominance.holds {
            let sl = singular_values(left.matrix())?;
            let sr = singular_values(&right)?;
            for q in SCHATTEN_CROSS_CHECK {
                let nl = schatten_from_singular_values(sl.values(), q);
                let nr = schatten_from_singular_values(sr.values(), q);
                b.cross_check(&format!("Schatten-{q} excess"), nl - nr, opts.tol_factor * nr.max(1.0));
            }
        }
        Ok(b.compare(Comparison::PartialSums, lhs, rhs, opts))
    }
}

/// Pointwise form for `r ≥ 2` and arbitrary square `A_i`:
/// `λ_j(|Σ A_i|^r) ≤ λ_j(Σ p_i^{1−r} |A_i|^r)` for every `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseBohrInstance {
    #[serde(rename = "A")]
    pub a: Vec<CMatrix>,
    pub p: Vec<f64>,
    pub r: f64,
}

impl PointwiseBohrInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("prop-r2");
        require_same_len("prop-r2", self.a.len(), self.p.len())?;
        require_common_square("prop-r2", self.a.iter())?;
        let r = self.r;
        let mut ok = WeightVector::new(self.p.clone(), WeightConstraint::SumToOne).record(&mut b);
        ok &= b.hypothesis("r ≥ 2", r >= 2.0 && r.is_finite(), Some(format!("r = {r}")));
        if !ok {
            return Ok(b.not_applicable(Comparison::Pointwise));
        }

        let sum = weighted_sum(self.a.iter().map(|a| (1.0, a.clone())))?;
        let lhs = desc_eigs(abs_power(&sum, r)?.matrix())?;
        let mut parts = Vec::with_capacity(self.a.len());
        for (a, &p) in self.a.iter().zip(&self.p) {
            parts.push((p.powf(1.0 - r), abs_power(a, r)?.into_matrix()));
        }
        let rhs = desc_eigs(&weighted_sum(parts)?)?;

        // The argument runs through |Σ p_i B_i|² ≤ Σ p_i |B_i|² with B_i = A_i/p_i.
        let scaled: Vec<CMatrix> = self.a.iter().zip(&self.p).map(|(a, &p)| a.scale(1.0 / p)).collect();
        let parts = SumSquareParts::new(&scaled, &self.p)?;
        b.cross_check(
            "sum-of-squares identity residual",
            parts.identity_residual(),
            SUM_SQUARE_IDENTITY_TOL * parts.scale(),
        );
        Ok(b.compare(Comparison::Pointwise, lhs, rhs, opts))
    }
}

/// The pieces of `Σ p_j|A_j|² − |Σ p_j A_j|² = ½ Σ_{i,j} p_i p_j (A_i − A_j)*(A_i − A_j)`.
pub struct SumSquareParts {
    /// `|Σ p_j A_j|²`
    pub square_of_mean: CMatrix,
    /// `Σ p_j |A_j|²`
    pub mean_of_squares: CMatrix,
    /// `Σ_{i,j} p_i p_j (A_i − A_j)*(A_i − A_j)`
    pub pairwise: CMatrix,
}

impl SumSquareParts {
    pub fn new(a: &[CMatrix], p: &[f64]) -> Result<Self> {
        require_same_len("sum-square", a.len(), p.len())?;
        require_common_square("sum-square", a.iter())?;
        let mean = weighted_sum(a.iter().cloned().zip(p).map(|(m, &w)| (w, m)))?;
        let square_of_mean = mean.adjoint().matmul(&mean)?;
        let mean_of_squares = weighted_sum(
            a.iter()
                .zip(p)
                .map(|(m, &w)| Ok((w, m.adjoint().matmul(m)?)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let n = a[0].rows();
        let mut pairwise = CMatrix::zeros(n, n);
        for (ai, &pi) in a.iter().zip(p) {
            for (aj, &pj) in a.iter().zip(p) {
                let d = ai - aj;
                pairwise.axpy(pi * pj, &d.adjoint().matmul(&d)?)?;
            }
        }
        Ok(SumSquareParts {
            square_of_mean,
            mean_of_squares,
            pairwise,
        })
    }

    /// `Σ p_j|A_j|² − |Σ p_j A_j|²`.
    pub fn difference(&self) -> CMatrix {
        &self.mean_of_squares - &self.square_of_mean
    }

    /// `‖difference − ½ pairwise‖_F`.
    pub fn identity_residual(&self) -> f64 {
        (&self.difference() - &self.pairwise.scale(0.5)).frobenius_norm()
    }

    pub fn scale(&self) -> f64 {
        self.mean_of_squares.frobenius_norm().max(1.0)
    }
}

/// `|Σ p_j A_j|² ≤ Σ p_j |A_j|²` with its sum-of-squares certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumSquareInstance {
    #[serde(rename = "A")]
    pub a: Vec<CMatrix>,
    pub p: Vec<f64>,
}

impl SumSquareInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("sumsq");
        require_same_len("sumsq", self.a.len(), self.p.len())?;
        require_common_square("sumsq", self.a.iter())?;
        if !WeightVector::new(self.p.clone(), WeightConstraint::SumToOne).record(&mut b) {
            return Ok(b.not_applicable(Comparison::Operator));
        }
        let parts = SumSquareParts::new(&self.a, &self.p)?;
        let scale = parts.scale();
        let tol = opts.tol_factor * scale;
        let pairwise_min = eig_hermitian_matrix(&parts.pairwise.hermitian_part())?.min();
        b.cross_check("−λ_min(Σ p_i p_j (A_i − A_j)*(A_i − A_j))", -pairwise_min, tol);
        b.cross_check(
            "sum-of-squares identity residual",
            parts.identity_residual(),
            SUM_SQUARE_IDENTITY_TOL * scale,
        );
        let lhs = desc_eigs(&parts.square_of_mean.hermitian_part())?;
        let rhs: Vec<f64> = desc_eigs(&parts.mean_of_squares.hermitian_part())?
            .into_iter()
            .map(|v| v * opts.rhs_factor)
            .collect();
        let diff = &parts.mean_of_squares.scale(opts.rhs_factor) - &parts.square_of_mean;
        let slack = eig_hermitian_matrix(&diff.hermitian_part())?.min();
        Ok(b.compare_with_slack(Comparison::Operator, lhs, rhs, slack, scale, opts))
    }
}

/// `λ_j(f(Σ p_i A_i)) ≤ λ_j(Σ p_i f(A_i))` for every `j`, `f` increasing and
/// convex on `J`, `0 ≤ p_i ≤ 1`, `Σ p_i = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncreasingConvexInstance {
    pub f: ConvexFunctionSpec,
    #[serde(rename = "A")]
    pub a: Vec<HermitianMatrix>,
    pub p: Vec<f64>,
}

impl IncreasingConvexInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> Result<CheckReport> {
        let mut b = ReportBuilder::new("inc-convex");
        require_same_len("inc-convex", self.a.len(), self.p.len())?;
        require_common_square("inc-convex", self.a.iter().map(HermitianMatrix::matrix))?;
        let p = &self.p;
        let mut ok = record_flags(&mut b, &self.f, &[Flag::Convex, Flag::Increasing]);
        ok &= b.hypothesis(
            "0 ≤ p_i ≤ 1",
            p.iter().all(|&x| (0.0..=1.0).contains(&x)),
            Some(format!("{p:?}")),
        );
        let s: f64 = p.iter().sum();
        ok &= b.hypothesis(
            "Σ p_i = 1",
            (s - 1.0).abs() <= super::weights::SUM_TO_ONE_TOL,
            Some(format!("Σ p_i = {s}")),
        );
        for a in &self.a {
            ok &= record_spectrum_in(&mut b, "spectrum(A_i) ⊂ J", a.matrix(), &self.f)?;
        }
        if !ok {
            return Ok(b.not_applicable(Comparison::Pointwise));
        }
        let mean = hermitian(weighted_sum(
            self.a.iter().zip(p).map(|(a, &w)| (w, a.matrix().clone())),
        )?)?;
        let lhs = desc_eigs(apply_fun(&self.f, &mean)?.matrix())?;
        let mut parts = Vec::with_capacity(self.a.len());
        for (a, &w) in self.a.iter().zip(p) {
            parts.push((w, apply_fun(&self.f, a)?.into_matrix()));
        }
        let rhs = desc_eigs(&weighted_sum(parts)?)?;
        Ok(b.compare(Comparison::Pointwise, lhs, rhs, opts))
    }
}
