//! The `expsum` command line tool.
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 3 for numerical
//! failures. `verify` exits 0 whatever its verdict; the verdict is in the report.

pub mod problem;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freqcore::{Coefficient, ExactCoeff, ExponentialSum};
use crate::gkformula::{frequency_span, mean_value, mean_zero_count};
use crate::laurent::{residue_formula_sum, substitute, sum_over_roots};
use crate::verifier::{convergence_report, empirical_mean, fewnomial_check};
use crate::zerofinder::{find_zeros, QuadratureConfig, Zero};
use problem::{FromScalars, Mode, ProblemFile};
use report::{complex, flatten, format_float, ReportEnvelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "expsum", version, about = "Mean values over zeros of exponential sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Symbolic mean value (A₁, Aₙ, M and support generators).
    Mean(Common),
    /// Mean number of zeros αₙ − α₁, optionally compared with a count at --R.
    Density(Common),
    /// Zeros with |Im z| near --R.
    Zeros(Common),
    /// Convergence of the empirical mean over --R-list.
    Verify(Common),
    /// Residue formula against root sums for rational frequencies.
    LaurentCheck(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "R")]
    r: Option<f64>,
    #[arg(long = "R-list", value_delimiter = ',')]
    r_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long = "emit-points")]
    emit_points: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    margin: f64,
    /// Include wall-clock timing (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

impl Common {
    fn config(&self) -> QuadratureConfig {
        QuadratureConfig { jitter_seed: self.seed, strip_margin: self.margin, ..Default::default() }
    }

    fn require_r(&self) -> Result<f64> {
        self.r.ok_or_else(|| Error::Input("--R is required for this command".into()))
    }

    fn echo(&self, problem: &ProblemFile) -> Value {
        json!({
            "problem": serde_json::to_value(problem).expect("problem serializes"),
            "R": self.r,
            "R_list": self.r_list,
            "tol": self.tol,
            "seed": self.seed,
            "margin": self.margin,
        })
    }
}

/// Output of one command: a results object and, for tabular commands, a CSV table.
struct Outcome {
    results: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

/// Runs the tool with `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    let (name, common) = match &cli.command {
        Command::Mean(c) => ("mean", c),
        Command::Density(c) => ("density", c),
        Command::Zeros(c) => ("zeros", c),
        Command::Verify(c) => ("verify", c),
        Command::LaurentCheck(c) => ("laurent-check", c),
    };
    match execute(name, common) {
        Ok((envelope, table)) => {
            let text = match (common.format, table) {
                (Format::Json, _) => envelope.to_json(),
                (Format::Csv, Some((header, rows))) => csv(&header, &rows),
                (Format::Csv, None) => {
                    let rows: Vec<Vec<String>> =
                        flatten(&envelope.results).into_iter().map(|(k, v)| vec![k, v]).collect();
                    csv(&["key", "value"], &rows)
                }
            };
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_NUMERICAL;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

type Table = Option<(Vec<&'static str>, Vec<Vec<String>>)>;

fn execute(name: &str, common: &Common) -> Result<(ReportEnvelope, Table)> {
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", common.input.display())))?;
    let problem = ProblemFile::from_json(&text)?;
    let start = Instant::now();
    let outcome = match problem.mode {
        Mode::Float => dispatch::<Complex64>(name, common, &problem)?,
        Mode::Exact => dispatch::<ExactCoeff>(name, common, &problem)?,
    };
    let timing = if common.timing {
        json!({ "elapsed_seconds": start.elapsed().as_secs_f64() })
    } else {
        Value::Null
    };
    let envelope = ReportEnvelope {
        command: name.to_string(),
        inputs: common.echo(&problem),
        results: outcome.results,
        timing,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    Ok((envelope, outcome.table))
}

fn dispatch<C: FromScalars + std::fmt::Display>(name: &str, common: &Common, problem: &ProblemFile) -> Result<Outcome> {
    let (f, g) = problem.sums::<C>()?;
    match name {
        "mean" => cmd_mean(&f, &g),
        "density" => cmd_density(&f, common),
        "zeros" => cmd_zeros(&f, common),
        "verify" => cmd_verify(&f, &g, common),
        _ => cmd_laurent_check(&f, &g),
    }
}

fn coefficient_value<C: Coefficient>(c: &C, f: &ExponentialSum<C>) -> Value {
    complex(c.to_complex(f.basis()))
}

fn cmd_mean<C: Coefficient + std::fmt::Display>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
) -> Result<Outcome> {
    let r = mean_value(f, g)?;
    let strings = |v: &[crate::freqcore::Frequency]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>();
    let results = json!({
        "A_first": coefficient_value(&r.a_first, f),
        "A_last": coefficient_value(&r.a_last, f),
        "M": coefficient_value(&r.mean, f),
        "exact": {
            "A_first": r.a_first.to_string(),
            "A_last": r.a_last.to_string(),
            "M": r.mean.to_string(),
        },
        "neg_generators": strings(&r.neg_generators),
        "pos_generators": strings(&r.pos_generators),
    });
    Ok(Outcome { results, table: None })
}

fn cmd_density<C: Coefficient>(f: &ExponentialSum<C>, common: &Common) -> Result<Outcome> {
    let density = mean_zero_count(f)?;
    let mut results = json!({
        "density": density,
        "span": frequency_span(f)?.to_string(),
    });
    if let Some(r) = common.r {
        let one = ExponentialSum::constant(C::one(), f.basis().clone());
        let em = empirical_mean(f, &one, r, &common.config())?;
        results["empirical"] = json!({
            "R": r,
            "R_used": em.contour_r(),
            "count": em.count,
            "density": em.mean.re,
            "abs_error": (em.mean.re - density).abs(),
        });
    }
    Ok(Outcome { results, table: None })
}

fn zero_rows(zeros: &[Zero]) -> Vec<Vec<String>> {
    zeros
        .iter()
        .map(|z| {
            vec![
                format_float(z.location.re),
                format_float(z.location.im),
                z.multiplicity.to_string(),
            ]
        })
        .collect()
}

fn cmd_zeros<C: Coefficient>(f: &ExponentialSum<C>, common: &Common) -> Result<Outcome> {
    let r = common.require_r()?;
    let set = find_zeros(f, r, &common.config())?;
    let rows = zero_rows(&set.zeros);
    if let Some(path) = &common.emit_points {
        std::fs::write(path, csv(&["re", "im", "multiplicity"], &rows))
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let span = mean_zero_count(f)?;
    let results = json!({
        "R": r,
        "R_used": set.r_used(),
        "rect": [set.rect.re_min, set.rect.re_max, set.rect.im_min, set.rect.im_max],
        "strip_bound": set.strip_bound,
        "outer_winding": set.outer_winding,
        "total_multiplicity": set.total_multiplicity(),
        "fewnomial_ok": fewnomial_check(&set.zeros, f.len(), span),
        "zeros": set.zeros.iter().map(|z| json!({
            "re": z.location.re,
            "im": z.location.im,
            "multiplicity": z.multiplicity,
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome { results, table: Some((vec!["re", "im", "multiplicity"], rows)) })
}

fn cmd_verify<C: Coefficient>(
    f: &ExponentialSum<C>,
    g: &ExponentialSum<C>,
    common: &Common,
) -> Result<Outcome> {
    let r_list = common
        .r_list
        .as_deref()
        .ok_or_else(|| Error::Input("--R-list is required for verify".into()))?;
    let report = convergence_report(f, g, r_list, &common.config(), common.tol)?;
    let span = mean_zero_count(f)?;
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| {
            json!({
                "R": row.r,
                "R_used": row.r_used,
                "count": row.count,
                "weighted_sum": complex(row.weighted_sum),
                "empirical_mean": complex(row.empirical_mean),
                "abs_error": row.abs_error,
                "outer_winding": row.outer_winding,
                "strip_bound": row.strip_bound,
                "fewnomial_ok": fewnomial_check(&row.zeros, f.len(), span),
            })
        })
        .collect();
    let table = report
        .rows
        .iter()
        .map(|row| {
            vec![
                format_float(row.r),
                format_float(row.r_used),
                row.count.to_string(),
                format_float(row.weighted_sum.re),
                format_float(row.weighted_sum.im),
                format_float(row.empirical_mean.re),
                format_float(row.empirical_mean.im),
                format_float(row.abs_error),
            ]
        })
        .collect();
    let results = json!({
        "symbolic_mean": complex(report.symbolic_mean),
        "rows": rows,
        "tolerance": report.tolerance,
        "median_ratio": report.median_ratio,
        "verdict": if report.pass { "pass" } else { "fail" },
    });
    let header = vec![
        "R", "R_used", "count", "weighted_sum_re", "weighted_sum_im", "empirical_mean_re",
        "empirical_mean_im", "abs_error",
    ];
    Ok(Outcome { results, table: Some((header, table)) })
}

fn cmd_laurent_check<C: Coefficient>(f: &ExponentialSum<C>, g: &ExponentialSum<C>) -> Result<Outcome> {
    let (q, pf, pg) = substitute(f, g)?;
    let residues = residue_formula_sum(&pf, &pg)?;
    let roots = sum_over_roots(&pf, &pg)?;
    let mean = mean_value(f, g)?.mean.to_complex(f.basis());
    let via_roots = roots / q as f64;
    let results = json!({
        "q": q,
        "residue_formula_sum": complex(residues),
        "sum_over_roots": complex(roots),
        "mean_via_substitution": complex(via_roots),
        "mean_value": complex(mean),
        "residue_vs_roots": (residues - roots).norm(),
        "mean_vs_substitution": (mean - via_roots).norm(),
    });
    Ok(Outcome { results, table: None })
}

fn csv<S: AsRef<str>>(header: &[S], rows: &[Vec<String>]) -> String {
    let mut out = header.iter().map(|h| h.as_ref()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
