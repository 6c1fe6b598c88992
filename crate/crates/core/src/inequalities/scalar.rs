//! The scalar inequalities: classical Bohr and its Vasić–Kečkić form.

use serde::{Deserialize, Serialize};

use super::report::{CheckOptions, CheckReport, Comparison, ReportBuilder};
use super::weights::{bohr_constant, WeightConstraint, WeightVector};
use crate::linalg::C64;

/// `|z + w|² ≤ p|z|² + q|w|²`, `1/p + 1/q = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarBohrInstance {
    pub z: C64,
    pub w: C64,
    pub p: f64,
}

impl ScalarBohrInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> CheckReport {
        let mut b = ReportBuilder::new("bohr");
        let p = self.p;
        if !b.hypothesis("p > 1", p > 1.0 && p.is_finite(), Some(format!("p = {p}"))) {
            return b.not_applicable(Comparison::Scalar);
        }
        let q = p / (p - 1.0);
        let lhs = (self.z + self.w).norm_sqr();
        let rhs = p * self.z.norm_sqr() + q * self.w.norm_sqr();
        let mut report = b.compare(Comparison::Scalar, vec![lhs], vec![rhs], opts);
        // Equality exactly when w = (p − 1) z.
        let scale = self.z.norm().max(self.w.norm()).max(1.0);
        report.equality = (self.w - self.z * (p - 1.0)).norm() <= 1e-12 * scale;
        report
    }
}

/// `|Σ z_j|^r ≤ (Σ p_j^{1/(1−r)})^{r−1} Σ p_j |z_j|^r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VasicKeckicInstance {
    pub z: Vec<C64>,
    pub p: Vec<f64>,
    pub r: f64,
}

impl VasicKeckicInstance {
    pub(crate) fn evaluate(&self, opts: &CheckOptions) -> CheckReport {
        let mut b = ReportBuilder::new("vasic");
        let weights = WeightVector::new(self.p.clone(), WeightConstraint::BohrConstraint { r: self.r });
        let mut ok = weights.record(&mut b);
        ok &= b.hypothesis(
            "one weight per term",
            self.z.len() == self.p.len() && !self.z.is_empty(),
            Some(format!("{} terms, {} weights", self.z.len(), self.p.len())),
        );
        if !ok {
            return b.not_applicable(Comparison::Scalar);
        }
        let r = self.r;
        let lhs = self.z.iter().sum::<C64>().norm().powf(r);
        let weighted: f64 = self.z.iter().zip(&self.p).map(|(z, p)| p * z.norm().powf(r)).sum();
        let rhs = bohr_constant(&self.p, r) * weighted;
        b.compare(Comparison::Scalar, vec![lhs], vec![rhs], opts)
    }
}
