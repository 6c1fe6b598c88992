use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bohr_core::cpmaps::{is_completely_positive, stinespring, PositiveMap, KRAUS_RANK_TOL, PSD_TOL};
use bohr_core::harness::{self, CampaignConfig};
use bohr_core::inequalities::{CheckOptions, Verdict, THEOREM_IDS};
use bohr_core::Error;

/// Checks matrix versions of the Bohr inequality numerically.
#[derive(Parser)]
#[command(name = "bohr", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-check a saved instance file.
    Check {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Relative slack tolerance (overrides BOHR_TOL).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a seeded random campaign and write JSONL records.
    Fuzz {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(THEOREM_IDS))]
        theorem: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 4)]
        ell_max: usize,
        #[arg(long, default_value_t = 1.1)]
        r_min: f64,
        #[arg(long, default_value_t = 4.0)]
        r_max: f64,
        /// Comma-separated function ids.
        #[arg(long, value_delimiter = ',')]
        functions: Option<Vec<String>>,
        #[arg(long)]
        tol: Option<f64>,
        /// Multiply every right-hand side by this factor (mutation runs).
        #[arg(long, default_value_t = 1.0)]
        mutate_rhs: f64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        /// Where violating instances are saved; defaults to `<out>.violations`.
        #[arg(long, value_name = "DIR")]
        violations_dir: Option<PathBuf>,
    },
    /// Build the Stinespring dilation of a completely positive map.
    Dilate {
        #[arg(long, value_name = "FILE")]
        map: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Print the worked examples.
    Demo,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Command::Check { input, tol } => check(&input, tol),
        Command::Fuzz {
            theorem,
            trials,
            seed,
            n_max,
            ell_max,
            r_min,
            r_max,
            functions,
            tol,
            mutate_rhs,
            out,
            violations_dir,
        } => {
            let mut cfg = CampaignConfig::new(&theorem, trials, seed).with_max_dims(n_max, ell_max);
            cfg.r_range = (r_min, r_max);
            if let Some(f) = functions {
                cfg.function_ids = f;
            }
            cfg.tol_override = tol;
            cfg.rhs_factor = mutate_rhs;
            let dir = violations_dir.unwrap_or_else(|| {
                let mut s = out.clone().into_os_string();
                s.push(".violations");
                PathBuf::from(s)
            });
            fuzz(&cfg, &out, &dir)
        }
        Command::Dilate { map, out } => dilate(&map, &out),
        Command::Demo => demo(),
    }
}

fn options(tol: Option<f64>) -> Result<CheckOptions, Error> {
    match tol {
        Some(t) if t >= 0.0 && t.is_finite() => Ok(CheckOptions::with_tol(t)),
        Some(t) => Err(Error::InvalidParameter(format!("--tol {t} must be nonnegative"))),
        None => CheckOptions::from_env(),
    }
}

fn check(input: &Path, tol: Option<f64>) -> Result<u8, Error> {
    let opts = options(tol)?;
    let text = std::fs::read_to_string(input)?;
    let replay = harness::replay(&text, &opts).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", input.display())),
        e => e,
    })?;
    println!("{}", serde_json::to_string_pretty(&replay.report)?);
    if replay.matches_stored == Some(false) {
        eprintln!("warning: report differs from the one stored in {}", input.display());
    }
    Ok(match replay.report.verdict {
        Verdict::Violated => 2,
        _ => 0,
    })
}

fn fuzz(cfg: &CampaignConfig, out: &Path, violations_dir: &Path) -> Result<u8, Error> {
    let outcome = harness::run_campaign(cfg)?;
    let file =
        File::create(out).map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", out.display())))?;
    harness::write_jsonl(&outcome, BufWriter::new(file))?;
    for path in harness::persist_violations(&outcome, violations_dir)? {
        eprintln!("violation saved to {}", path.display());
    }
    let s = &outcome.summary;
    eprintln!(
        "{}: {} trials, {} held, {} not applicable, {} violations, {} generation failures, min slack {}",
        s.theorem,
        s.total,
        s.held,
        s.not_applicable,
        s.violations,
        s.generation_failed,
        s.min_slack_overall.map_or("-".to_string(), |v| format!("{v:.3e}")),
    );
    Ok(s.exit_code() as u8)
}

fn dilate(map_path: &Path, out: &Path) -> Result<u8, Error> {
    let text = std::fs::read_to_string(map_path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let map: PositiveMap = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!(
            "{}: line {} column {} at `{path}`: {inner}",
            map_path.display(),
            inner.line(),
            inner.column()
        ))
    })?;
    if !is_completely_positive(&map, PSD_TOL)? {
        return Err(Error::InvalidParameter(
            "map is not completely positive; it has no Stinespring dilation".into(),
        ));
    }
    let d = stinespring(&map, KRAUS_RANK_TOL)?;
    std::fs::write(out, serde_json::to_vec_pretty(&d)?)?;
    eprintln!(
        "{} Kraus operators, ‖V*V − I‖_F = {:.3e}, reconstruction residual = {:.3e}",
        d.kraus.len(),
        d.isometry_defect,
        d.reconstruction_residual
    );
    Ok(0)
}

fn demo() -> Result<u8, Error> {
    let rows = harness::demo()?;
    let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    writeln!(
        w,
        "{:<width$}  {:>2}  {:>14}  {:>14}  {:>11}",
        "case", "k", "lhs", "rhs", "slack"
    )?;
    for r in rows {
        let pad = width - r.name.chars().count();
        writeln!(
            w,
            "{}{}  {:>2}  {:>14.10}  {:>14.10}  {:>11.3e}",
            r.name,
            " ".repeat(pad),
            r.k,
            r.lhs,
            r.rhs,
            r.slack
        )?;
    }
    Ok(0)
}
