use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default slack tolerance factor; the tolerance actually used is
/// `factor·max(1, |LHS|, |RHS|)` per instance.
pub const DEFAULT_TOL_FACTOR: f64 = 1e-8;

/// Environment variable that overrides [`DEFAULT_TOL_FACTOR`].
pub const TOL_ENV: &str = "BOHR_TOL";

/// Relative threshold below which every slack counts as equality.
pub const EQUALITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    pub tol_factor: f64,
    /// Multiplies the right-hand side before comparing. Only useful to
    /// confirm that a checker can fail (mutation runs); 1.0 otherwise.
    pub rhs_factor: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tol_factor: DEFAULT_TOL_FACTOR,
            rhs_factor: 1.0,
        }
    }
}

impl CheckOptions {
    pub fn with_tol(tol_factor: f64) -> Self {
        CheckOptions {
            tol_factor,
            ..Self::default()
        }
    }

    /// Defaults, with the tolerance taken from `BOHR_TOL` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOL_ENV) {
            Ok(v) => {
                let tol: f64 = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("{TOL_ENV}={v} is not a number")))?;
                if !(tol >= 0.0) || !tol.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "{TOL_ENV} must be a nonnegative number"
                    )));
                }
                Ok(Self::with_tol(tol))
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// A hypothesis of the inequality failed; nothing was compared.
    NotApplicable,
}

/// How the two sides were compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// One number per side.
    Scalar,
    /// Top-`k` partial sums of descending eigenvalues, `k = 1..n`.
    PartialSums,
    /// Descending eigenvalues compared index by index.
    Pointwise,
    /// Loewner order; the slack is the smallest eigenvalue of `RHS − LHS`.
    Operator,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A secondary quantity that must satisfy `value ≤ bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem_id: String,
    pub verdict: Verdict,
    pub holds: bool,
    pub comparison: Comparison,
    pub partial_sums_lhs: Vec<f64>,
    pub partial_sums_rhs: Vec<f64>,
    /// `min (rhs − lhs)`; NaN (`null` in JSON) when not applicable.
    #[serde(with = "nullable_f64")]
    pub min_slack: f64,
    /// 1-based index of the first violated comparison.
    pub first_violation: Option<usize>,
    pub tol_used: f64,
    pub equality: bool,
    pub hypothesis_report: Vec<HypothesisCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_checks: Vec<CrossCheck>,
    #[serde(with = "hex_u64")]
    pub input_digest: u64,
    /// Wall-clock seconds; excluded from serialized reports so that they
    /// are reproducible byte for byte.
    #[serde(skip)]
    pub elapsed: f64,
}

impl CheckReport {
    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    pub fn is_not_applicable(&self) -> bool {
        self.verdict == Verdict::NotApplicable
    }

    /// `rhs_k − lhs_k` for every compared index.
    pub fn slacks(&self) -> Vec<f64> {
        self.partial_sums_rhs
            .iter()
            .zip(&self.partial_sums_lhs)
            .map(|(r, l)| r - l)
            .collect()
    }

    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.hypothesis_report.iter().filter(|h| !h.passed)
    }
}

/// Accumulates hypotheses and cross-checks, then produces the report.
pub(crate) struct ReportBuilder {
    theorem_id: &'static str,
    hypotheses: Vec<HypothesisCheck>,
    cross_checks: Vec<CrossCheck>,
    started: std::time::Instant,
}

impl ReportBuilder {
    pub fn new(theorem_id: &'static str) -> Self {
        ReportBuilder {
            theorem_id,
            hypotheses: Vec::new(),
            cross_checks: Vec::new(),
            started: std::time::Instant::now(),
        }
    }

    pub fn hypothesis(&mut self, name: &str, passed: bool, detail: impl Into<Option<String>>) -> bool {
        self.hypotheses.push(HypothesisCheck {
            name: name.to_string(),
            passed,
            detail: if passed { None } else { detail.into() },
        });
        passed
    }

    pub fn cross_check(&mut self, name: &str, value: f64, bound: f64) {
        self.cross_checks.push(CrossCheck {
            name: name.to_string(),
            value,
            bound,
            passed: value <= bound,
        });
    }

    pub fn not_applicable(self, comparison: Comparison) -> CheckReport {
        CheckReport {
            theorem_id: self.theorem_id.to_string(),
            verdict: Verdict::NotApplicable,
            holds: false,
            comparison,
            partial_sums_lhs: Vec::new(),
            partial_sums_rhs: Vec::new(),
            min_slack: f64::NAN,
            first_violation: None,
            tol_used: 0.0,
            equality: false,
            hypothesis_report: self.hypotheses,
            cross_checks: self.cross_checks,
            input_digest: 0,
            elapsed: self.started.elapsed().as_secs_f64(),
        }
    }

    /// Compares `lhs[k] ≤ rhs_factor·rhs[k]` for every `k`.
    pub fn compare(self, comparison: Comparison, lhs: Vec<f64>, rhs: Vec<f64>, opts: &CheckOptions) -> CheckReport {
        let rhs: Vec<f64> = rhs.into_iter().map(|v| v * opts.rhs_factor).collect();
        let scale = lhs.iter().chain(&rhs).fold(1.0f64, |acc, v| acc.max(v.abs()));
        self.compare_scaled(comparison, lhs, rhs, scale, opts)
    }

    /// Like [`compare`](Self::compare) but with an explicit slack vector
    /// (used for the Loewner-order comparison, whose slack is an eigenvalue
    /// of the difference rather than `rhs − lhs`).
    pub fn compare_with_slack(
        self,
        comparison: Comparison,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        slack: f64,
        scale: f64,
        opts: &CheckOptions,
    ) -> CheckReport {
        let mut r = self.compare_scaled(comparison, lhs, rhs, scale, opts);
        r.min_slack = slack;
        let tol = r.tol_used;
        let violated = slack < -tol || r.cross_checks.iter().any(|c| !c.passed);
        r.first_violation = (slack < -tol).then_some(1);
        r.verdict = if violated { Verdict::Violated } else { Verdict::Holds };
        r.holds = !violated;
        r.equality = slack.abs() <= EQUALITY_TOL * scale;
        r
    }

    fn compare_scaled(
        self,
        comparison: Comparison,
        lhs: Vec<f64>,
        rhs: Vec<f64>,
        scale: f64,
        opts: &CheckOptions,
    ) -> CheckReport {
        let tol = opts.tol_factor * scale;
        let slacks: Vec<f64> = rhs.iter().zip(&lhs).map(|(r, l)| r - l).collect();
        let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        let first_violation = slacks.iter().position(|&s| !(s >= -tol)).map(|i| i + 1);
        let cross_ok = self.cross_checks.iter().all(|c| c.passed);
        let holds = first_violation.is_none() && cross_ok;
        let equality = slacks.iter().all(|s| s.abs() <= EQUALITY_TOL * scale);
        CheckReport {
            theorem_id: self.theorem_id.to_string(),
            verdict: if holds { Verdict::Holds } else { Verdict::Violated },
            holds,
            comparison,
            partial_sums_lhs: lhs,
            partial_sums_rhs: rhs,
            min_slack,
            first_violation,
            tol_used: tol,
            equality,
            hypothesis_report: self.hypotheses,
            cross_checks: self.cross_checks,
            input_digest: 0,
            elapsed: self.started.elapsed().as_secs_f64(),
        }
    }
}

/// Running sums of a sequence.
pub(crate) fn prefix_sums(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

mod nullable_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

mod hex_u64 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:016x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u64, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        u64::from_str_radix(&s, 16).map_err(D::Error::custom)
    }
}
