use serde::{Deserialize, Serialize};

use super::report::ReportBuilder;

/// Tolerance on `|Σ p_i − 1|` for normalized weights.
pub const SUM_TO_ONE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightConstraint {
    /// `Σ p_i = 1`, `0 < p_i ≤ 1`.
    SumToOne,
    /// Nonnegative weights for a subunital combination `Σ α_i Φ_i(I) ≤ I`.
    Subunital,
    /// Positive weights entering the constant `(Σ p_i^{1/(1−r)})^{r−1}`.
    BohrConstraint { r: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub values: Vec<f64>,
    pub constraint: WeightConstraint,
}

impl WeightVector {
    pub fn new(values: Vec<f64>, constraint: WeightConstraint) -> Self {
        WeightVector { values, constraint }
    }

    /// `values / Σ values`.
    pub fn normalized(values: &[f64]) -> Self {
        let s: f64 = values.iter().sum();
        WeightVector::new(values.iter().map(|v| v / s).collect(), WeightConstraint::SumToOne)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Records the hypotheses implied by the constraint; returns whether all
    /// of them passed.
    pub(crate) fn record(&self, b: &mut ReportBuilder) -> bool {
        let v = &self.values;
        let mut ok = b.hypothesis("weights nonempty", !v.is_empty(), Some("no weights".into()));
        ok &= b.hypothesis(
            "weights finite",
            v.iter().all(|x| x.is_finite()),
            Some(format!("{v:?}")),
        );
        match self.constraint {
            WeightConstraint::SumToOne => {
                ok &= b.hypothesis("weights positive", v.iter().all(|&x| x > 0.0), Some(format!("{v:?}")));
                ok &= b.hypothesis("weights ≤ 1", v.iter().all(|&x| x <= 1.0), Some(format!("{v:?}")));
                let s: f64 = v.iter().sum();
                ok &= b.hypothesis(
                    "Σ p_i = 1",
                    (s - 1.0).abs() <= SUM_TO_ONE_TOL,
                    Some(format!("Σ p_i = {s}")),
                );
            }
            WeightConstraint::Subunital => {
                ok &= b.hypothesis(
                    "weights nonnegative",
                    v.iter().all(|&x| x >= 0.0),
                    Some(format!("{v:?}")),
                );
            }
            WeightConstraint::BohrConstraint { r } => {
                ok &= b.hypothesis("weights positive", v.iter().all(|&x| x > 0.0), Some(format!("{v:?}")));
                ok &= b.hypothesis("r > 1", r > 1.0, Some(format!("r = {r}")));
            }
        }
        ok
    }
}

/// `Σ p_i^{1/(1−r)}`.
pub fn bohr_weight_sum(p: &[f64], r: f64) -> f64 {
    let e = 1.0 / (1.0 - r);
    p.iter().map(|x| x.powf(e)).sum()
}

/// `(Σ p_i^{1/(1−r)})^{r−1}`, the constant of the Vasić–Kečkić inequality.
pub fn bohr_constant(p: &[f64], r: f64) -> f64 {
    bohr_weight_sum(p, r).powf(r - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_for_single_weight_is_one_over_p_times_p() {
        // (p^{1/(1−r)})^{r−1} = p^{-1}, so the constant times p is 1.
        let c = bohr_constant(&[0.3], 2.5);
        assert!((c * 0.3 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_for_equal_halves_r2() {
        // p = (½, ½), r = 2: Σ p^{-1} = 4.
        assert!((bohr_constant(&[0.5, 0.5], 2.0) - 4.0).abs() < 1e-14);
    }
}
