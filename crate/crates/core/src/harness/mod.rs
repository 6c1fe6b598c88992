//! Seeded fuzzing campaigns, replay of saved instances and the demo table.

mod demo;
mod generate;

pub use demo::{demo, DemoRow};
pub use generate::{generate_instance, near_equality_eigen_bohr, ABS_POW_RANGE, DEFAULT_J};

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{CheckOptions, CheckReport, InstanceFile, Verdict, THEOREM_IDS};
use crate::linalg::Rng;

/// Attempts per trial before it is recorded as generation-failed.
pub const MAX_GENERATION_ATTEMPTS: usize = 1000;

/// Largest difference allowed between a replayed slack and the stored one.
pub const REPLAY_SLACK_TOL: f64 = 1e-15;

pub const DEFAULT_FUNCTION_IDS: [&str; 4] = ["abs_pow", "square", "exp_m1", "pos_part"];

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub theorem_id: String,
    pub trials: usize,
    pub seed: u64,
    /// Inclusive ranges.
    pub n_range: (usize, usize),
    pub m_range: (usize, usize),
    pub ell_range: (usize, usize),
    pub r_range: (f64, f64),
    pub function_ids: Vec<String>,
    pub tol_override: Option<f64>,
    /// Multiplies every right-hand side; below 1 only in mutation runs.
    pub rhs_factor: f64,
}

impl CampaignConfig {
    pub fn new(theorem_id: &str, trials: usize, seed: u64) -> Self {
        CampaignConfig {
            theorem_id: theorem_id.to_string(),
            trials,
            seed,
            n_range: (2, 8),
            m_range: (2, 8),
            ell_range: (1, 4),
            r_range: (1.1, 4.0),
            function_ids: DEFAULT_FUNCTION_IDS.iter().map(|s| s.to_string()).collect(),
            tol_override: None,
            rhs_factor: 1.0,
        }
    }

    /// Caps `n`, `m` and `ℓ`.
    pub fn with_max_dims(mut self, n_max: usize, ell_max: usize) -> Self {
        self.n_range.1 = n_max;
        self.m_range.1 = n_max;
        self.ell_range.1 = ell_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !THEOREM_IDS.contains(&self.theorem_id.as_str()) {
            return Err(Error::Unknown {
                what: "theorem",
                id: self.theorem_id.clone(),
            });
        }
        for (name, (lo, hi)) in [("n", self.n_range), ("m", self.m_range), ("ell", self.ell_range)] {
            if lo == 0 || lo > hi {
                return Err(Error::InvalidParameter(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        let (rlo, rhi) = self.r_range;
        if !(rlo > 1.0 && rlo <= rhi && rhi.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "r range [{rlo}, {rhi}] must satisfy 1 < r_min ≤ r_max"
            )));
        }
        if self.function_ids.is_empty() {
            return Err(Error::InvalidParameter("no function ids".into()));
        }
        for id in &self.function_ids {
            crate::calculus::FunctionKind::from_id(id, Some(2.0))?;
        }
        if let Some(t) = self.tol_override {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("tolerance {t} must be nonnegative")));
            }
        }
        Ok(())
    }

    pub fn check_options(&self) -> Result<CheckOptions> {
        let mut opts = match self.tol_override {
            Some(t) => CheckOptions::with_tol(t),
            None => CheckOptions::from_env()?,
        };
        opts.rhs_factor = self.rhs_factor;
        Ok(opts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Checked,
    GenerationFailed,
}

/// One line of the JSONL stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    /// Rng stream id; the trial's generator is `Rng::new(seed, stream)`.
    pub stream: u64,
    pub status: TrialStatus,
    pub attempts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub theorem: String,
    pub seed: u64,
    pub total: usize,
    pub held: usize,
    pub not_applicable: usize,
    pub violations: usize,
    pub generation_failed: usize,
    /// Smallest `min_slack` over all compared trials; `null` when none.
    pub min_slack_overall: Option<f64>,
}

impl CampaignSummary {
    /// 0 clean, 2 violations, 3 generation failures.
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            2
        } else if self.generation_failed > 0 {
            3
        } else {
            0
        }
    }
}

pub struct CampaignOutcome {
    pub records: Vec<TrialRecord>,
    pub summary: CampaignSummary,
    /// Violating instances with their reports, by trial index.
    pub violations: Vec<(usize, InstanceFile)>,
}

struct TrialResult {
    record: TrialRecord,
    violation: Option<InstanceFile>,
}

fn run_trial(cfg: &CampaignConfig, opts: &CheckOptions, trial: usize) -> TrialResult {
    let stream = trial as u64;
    let mut rng = Rng::new(cfg.seed, stream);
    let mut last_error = None;
    for attempt in 1..=MAX_GENERATION_ATTEMPTS {
        let outcome = generate_instance(cfg, &mut rng).and_then(|inst| {
            let report = inst.check(opts)?;
            Ok((inst, report))
        });
        match outcome {
            Ok((_, report)) if report.verdict == Verdict::NotApplicable => continue,
            Ok((inst, report)) => {
                let violation = report.is_violation().then(|| InstanceFile {
                    instance: inst,
                    report: Some(report.clone()),
                    rhs_factor: (opts.rhs_factor != 1.0).then_some(opts.rhs_factor),
                });
                return TrialResult {
                    record: TrialRecord {
                        trial,
                        stream,
                        status: TrialStatus::Checked,
                        attempts: attempt,
                        digest: Some(format!("{:016x}", report.input_digest)),
                        report: Some(report),
                        error: None,
                    },
                    violation,
                };
            }
            Err(e) => {
                // Parameter errors repeat on every attempt.
                let fatal = matches!(e, Error::InvalidParameter(_) | Error::Unknown { .. });
                last_error = Some(e.to_string());
                if fatal {
                    return failed(trial, stream, attempt, last_error);
                }
            }
        }
    }
    failed(trial, stream, MAX_GENERATION_ATTEMPTS, last_error)
}

fn failed(trial: usize, stream: u64, attempts: usize, error: Option<String>) -> TrialResult {
    TrialResult {
        record: TrialRecord {
            trial,
            stream,
            status: TrialStatus::GenerationFailed,
            attempts,
            digest: None,
            report: None,
            error: Some(error.unwrap_or_else(|| "no instance satisfied the hypotheses".into())),
        },
        violation: None,
    }
}

/// Runs every trial (in parallel) and merges the results in trial order.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignOutcome> {
    cfg.validate()?;
    let opts = cfg.check_options()?;
    let results: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, &opts, t))
        .collect();

    let mut summary = CampaignSummary {
        theorem: cfg.theorem_id.clone(),
        seed: cfg.seed,
        total: cfg.trials,
        ..Default::default()
    };
    let mut records = Vec::with_capacity(results.len());
    let mut violations = Vec::new();
    for res in results {
        match res.record.report.as_ref() {
            Some(rep) => {
                match rep.verdict {
                    Verdict::Holds => summary.held += 1,
                    Verdict::Violated => summary.violations += 1,
                    Verdict::NotApplicable => summary.not_applicable += 1,
                }
                if rep.min_slack.is_finite() {
                    let m = summary
                        .min_slack_overall
                        .map_or(rep.min_slack, |v| v.min(rep.min_slack));
                    summary.min_slack_overall = Some(m);
                }
            }
            None => summary.generation_failed += 1,
        }
        if let Some(v) = res.violation {
            violations.push((res.record.trial, v));
        }
        records.push(res.record);
    }
    Ok(CampaignOutcome {
        records,
        summary,
        violations,
    })
}

/// One record per line followed by the summary line.
pub fn write_jsonl<W: Write>(outcome: &CampaignOutcome, mut w: W) -> Result<()> {
    for rec in &outcome.records {
        serde_json::to_writer(&mut w, rec)?;
        w.write_all(b"\n")?;
    }
    serde_json::to_writer(&mut w, &serde_json::json!({ "summary": outcome.summary }))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// Writes each violating instance to `dir/violation-<trial>.json`.
pub fn persist_violations(outcome: &CampaignOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    if outcome.violations.is_empty() {
        return Ok(Vec::new());
    }
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(outcome.violations.len());
    for (trial, file) in &outcome.violations {
        let path = dir.join(format!("violation-{trial:06}.json"));
        std::fs::write(&path, serde_json::to_vec_pretty(file)?)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Result of re-checking a saved instance.
#[derive(Clone, Debug)]
pub struct Replay {
    pub report: CheckReport,
    /// `Some(true)` when a stored report was present and matches.
    pub matches_stored: Option<bool>,
}

/// Parses an instance file, reporting the line, column and field path of
/// the first schema error.
pub fn parse_instance_file(text: &str) -> Result<InstanceFile> {
    deserialize_located::<InstanceFile>(text).map_err(|e| {
        // The tagged enum buffers its body, which hides where inside it the
        // error sits. Decoding the body as the tagged struct recovers that.
        locate_in_body(text).unwrap_or(e)
    })
}

fn deserialize_located<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = if path.is_empty() || path == "." {
            String::new()
        } else {
            format!(" at `{path}`")
        };
        let msg = inner.to_string();
        let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m);
        Error::Parse(format!("line {} column {}{at}: {msg}", inner.line(), inner.column()))
    })
}

fn locate_in_body(text: &str) -> Option<Error> {
    use crate::inequalities::*;
    let value: serde_json::Value = serde_json::from_str(text).ok()?;
    let tag = value.get("theorem")?.as_str()?;
    let err = match tag {
        "bohr" => deserialize_located::<ScalarBohrInstance>(text).err(),
        "vasic" => deserialize_located::<VasicKeckicInstance>(text).err(),
        "jensen-vec" => deserialize_located::<JensenVectorInstance>(text).err(),
        "jensen-map" => deserialize_located::<JensenMapInstance>(text).err(),
        "thm1" => deserialize_located::<WeakMajorInstance>(text).err(),
        "cornew" => deserialize_located::<CongruenceInstance>(text).err(),
        "cor45" | "cor4.5" => deserialize_located::<EigenBohrInstance>(text).err(),
        "zh" => deserialize_located::<NormBohrInstance>(text).err(),
        "prop-r2" => deserialize_located::<PointwiseBohrInstance>(text).err(),
        "sumsq" => deserialize_located::<SumSquareInstance>(text).err(),
        "inc-convex" => deserialize_located::<IncreasingConvexInstance>(text).err(),
        _ => None,
    }?;
    Some(err)
}

/// Re-runs the checker named by the instance file. A multiplier stored in
/// the file takes precedence over `opts.rhs_factor`.
pub fn replay(text: &str, opts: &CheckOptions) -> Result<Replay> {
    let file = parse_instance_file(text)?;
    let mut opts = *opts;
    if let Some(f) = file.rhs_factor {
        opts.rhs_factor = f;
    }
    let report = file.instance.check(&opts)?;
    let matches_stored = file.report.as_ref().map(|stored| reports_agree(stored, &report));
    Ok(Replay { report, matches_stored })
}

pub fn replay_path(path: &Path, opts: &CheckOptions) -> Result<Replay> {
    replay(&std::fs::read_to_string(path)?, opts)
}

/// Same verdict, same sides and slack within [`REPLAY_SLACK_TOL`].
pub fn reports_agree(a: &CheckReport, b: &CheckReport) -> bool {
    let slack_ok =
        (a.min_slack.is_nan() && b.min_slack.is_nan()) || (a.min_slack - b.min_slack).abs() <= REPLAY_SLACK_TOL;
    a.theorem_id == b.theorem_id
        && a.verdict == b.verdict
        && slack_ok
        && a.partial_sums_lhs.len() == b.partial_sums_lhs.len()
        && a.first_violation == b.first_violation
}
