//! `ulrich`: classify Ulrich line bundles, construct rank-2 special Ulrich
//! bundles and sweep parameter grids on ruled surfaces.
//!
//! Exit codes: 0 success, 2 invalid input, 3 condition violated,
//! 4 internal verification failure, 5 oracle requested at positive genus.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ulrich_core::classify::{classify_line_bundles, reconcile_with_oracle, Classification};
use ulrich_core::oracle::{search_ulrich_lines, SearchBox};
use ulrich_core::report::{self, BetaRange, Summary, SweepSpec};
use ulrich_core::{Error, Polar, Surface};

/// Arguments larger than this are refused so `i64` arithmetic cannot overflow.
const MAX_MAGNITUDE: i64 = 1_000_000;

#[derive(Parser)]
#[command(
    name = "ulrich",
    version,
    about = "Ulrich bundles on geometrically ruled surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Params {
    /// Genus of the base curve.
    #[arg(long, allow_negative_numbers = true)]
    g: i64,
    /// Invariant of the ruling (C0^2 = -e).
    #[arg(long, allow_negative_numbers = true)]
    e: i64,
    /// Coefficient of C0 in H.
    #[arg(long, allow_negative_numbers = true)]
    alpha: i64,
    /// Coefficient of F in H.
    #[arg(long, allow_negative_numbers = true)]
    beta: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructFormat {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Classify Ulrich line bundles for H = alpha*C0 + beta*F.
    Classify {
        #[command(flatten)]
        params: Params,
        /// Cross-check with an exhaustive cohomology scan (genus 0 only).
        #[arg(long)]
        oracle: bool,
        #[arg(long, allow_negative_numbers = true)]
        a_min: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        a_max: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        b_min: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        b_max: Option<i64>,
        #[arg(long, value_enum, default_value = "text")]
        format: ClassifyFormat,
    },
    /// Emit the numerical data of a rank-2 special Ulrich bundle.
    Construct {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "json")]
        format: ConstructFormat,
    },
    /// Run the full verification over a parameter grid.
    Sweep {
        /// Genus range, e.g. `0..3` (inclusive) or `2`.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Absolute beta range.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "beta_offset")]
        beta: Option<String>,
        /// Beta range relative to alpha*e, e.g. `1..4` for alpha*e+1 ..= alpha*e+4.
        #[arg(long, allow_hyphen_values = true)]
        beta_offset: Option<String>,
        #[arg(long, value_enum, default_value = "csv")]
        format: SweepFormat,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify every row of a JSON sweep file.
    Verify { path: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Invalid(anyhow::Error),
    Condition(anyhow::Error),
    Verification(anyhow::Error),
    OracleUnavailable(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Condition(_) => 3,
            Failure::Verification(_) => 4,
            Failure::OracleUnavailable(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Invalid(e)
            | Failure::Condition(e)
            | Failure::Verification(e)
            | Failure::OracleUnavailable(e) => format!("{e:#}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::InvalidSurface { .. } | Error::InvalidPolarization { .. } => {
                Failure::Invalid(err.into())
            }
            Error::ConditionViolated { .. } => Failure::Condition(err.into()),
            _ => Failure::Verification(err.into()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn check_magnitude(values: &[i64]) -> CmdResult {
    match values.iter().find(|v| v.abs() > MAX_MAGNITUDE) {
        Some(v) => Err(Failure::Invalid(anyhow!(
            "argument {v} exceeds the supported magnitude {MAX_MAGNITUDE}"
        ))),
        None => Ok(()),
    }
}

fn setup(p: Params) -> Result<(Surface, Polar), Failure> {
    check_magnitude(&[p.g, p.e, p.alpha, p.beta])?;
    let s = Surface::new(p.g, p.e)?;
    let h = Polar::new(p.alpha, p.beta, &s)?;
    Ok((s, h))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn classification_text(c: &Classification<i64>) -> String {
    let mut out = String::new();
    match c {
        Classification::Empty => out.push_str("classification: Empty (no Ulrich line bundles)\n"),
        Classification::Pair { l1, l2, genericity } => {
            out.push_str("classification: Pair\n");
            let _ = writeln!(out, "  L1 = {l1}");
            let _ = writeln!(out, "  L2 = {l2}");
            for req in genericity {
                let _ = writeln!(out, "  requires: {req}");
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_classify(
    p: Params,
    oracle: bool,
    a_min: Option<i64>,
    a_max: Option<i64>,
    b_min: Option<i64>,
    b_max: Option<i64>,
    format: ClassifyFormat,
) -> CmdResult {
    let (s, h) = setup(p)?;
    let classification = classify_line_bundles(&s, &h);
    let mut scan = None;
    if oracle {
        if p.g != 0 {
            return Err(Failure::OracleUnavailable(anyhow!(
                "the cohomology oracle only covers genus 0, got g = {}",
                p.g
            )));
        }
        let default = SearchBox::default_for(&h);
        let area = SearchBox::new(
            a_min.unwrap_or(default.a_min),
            a_max.unwrap_or(default.a_max),
            b_min.unwrap_or(default.b_min),
            b_max.unwrap_or(default.b_max),
        );
        check_magnitude(&[area.a_min, area.a_max, area.b_min, area.b_max])?;
        let found = search_ulrich_lines(&p.e, &h, &area)?;
        let agree = reconcile_with_oracle(&p.e, &h, &area)?;
        scan = Some((area, found, agree));
    }

    match format {
        ClassifyFormat::Text => {
            let mut out = classification_text(&classification);
            if let Some((area, found, agree)) = &scan {
                let _ = writeln!(
                    out,
                    "oracle scan a in [{}, {}], b in [{}, {}]: {} class(es)",
                    area.a_min,
                    area.a_max,
                    area.b_min,
                    area.b_max,
                    found.len()
                );
                for d in found {
                    let _ = writeln!(out, "  {d}");
                }
                let _ = writeln!(out, "{}", if *agree { "AGREE" } else { "DISAGREE" });
            }
            emit(&out);
        }
        ClassifyFormat::Json => {
            let mut v = serde_json::json!({ "classification": classification });
            if let Some((area, found, agree)) = &scan {
                v["oracle"] = serde_json::json!({ "box": area, "scan": found, "agree": agree });
            }
            emit(&format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("json")
            ));
        }
    }
    match scan {
        Some((_, _, false)) => Err(Failure::Verification(anyhow!(
            "oracle scan disagrees with the classification"
        ))),
        _ => Ok(()),
    }
}

fn cmd_construct(p: Params, format: ConstructFormat) -> CmdResult {
    setup(p)?;
    let r = report::construct_report(p.g, p.e, p.alpha, p.beta)?;
    match format {
        ConstructFormat::Json => emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(&r).expect("json")
        )),
        ConstructFormat::Md => emit(&r.to_markdown()),
    }
    if r.flags.consistent() {
        Ok(())
    } else {
        Err(Failure::Verification(anyhow!("a verification flag failed")))
    }
}

fn parse_range(text: &str, what: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || {
        Failure::Invalid(anyhow!(
            "cannot parse {what} range {text:?}; use N, N..M or N..=M"
        ))
    };
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    let range = if let Some((lo, hi)) = text.split_once("..") {
        parse(lo)?..=parse(hi.strip_prefix('=').unwrap_or(hi))?
    } else {
        let v = parse(text)?;
        v..=v
    };
    check_magnitude(&[*range.start(), *range.end()])?;
    Ok(range)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    g: &str,
    e: &str,
    alpha: &str,
    beta: Option<&str>,
    beta_offset: Option<&str>,
    format: SweepFormat,
    out: Option<PathBuf>,
) -> CmdResult {
    let beta = match (beta, beta_offset) {
        (Some(b), None) => BetaRange::Absolute(parse_range(b, "beta")?),
        (None, Some(b)) => BetaRange::AboveAlphaE(parse_range(b, "beta offset")?),
        _ => {
            return Err(Failure::Invalid(anyhow!(
                "give exactly one of --beta or --beta-offset"
            )))
        }
    };
    let spec = SweepSpec {
        g: parse_range(g, "g")?,
        e: parse_range(e, "e")?,
        alpha: parse_range(alpha, "alpha")?,
        beta,
    };
    let rows = report::sweep(&spec)?;
    let text = match format {
        SweepFormat::Csv => report::to_csv(&rows),
        SweepFormat::Json => report::to_json(&rows),
        SweepFormat::Md => report::to_markdown(&rows),
    };
    match &out {
        Some(path) => fs::write(path, &text)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Failure::Invalid)?,
        None => emit(&text),
    }
    if !matches!(format, SweepFormat::Md) {
        eprint!("{}", Summary::of(&rows).to_text());
    }
    let bad = rows.iter().filter(|r| !r.flags.consistent()).count();
    if bad > 0 {
        return Err(Failure::Verification(anyhow!(
            "{bad} row(s) failed verification"
        )));
    }
    Ok(())
}

fn cmd_verify(path: PathBuf) -> CmdResult {
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Invalid)?;
    let rows = report::from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Invalid)?;
    let mut problems = Vec::new();
    for row in &rows {
        problems.extend(row.reverify()?);
    }
    for p in &problems {
        eprintln!("{p}");
    }
    emit(&format!(
        "{} rows re-verified, {} mismatch(es)\n",
        rows.len(),
        problems.len()
    ));
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(anyhow!("stored flags do not match")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify {
            params,
            oracle,
            a_min,
            a_max,
            b_min,
            b_max,
            format,
        } => cmd_classify(params, oracle, a_min, a_max, b_min, b_max, format),
        Command::Construct { params, format } => cmd_construct(params, format),
        Command::Sweep {
            g,
            e,
            alpha,
            beta,
            beta_offset,
            format,
            out,
        } => cmd_sweep(
            &g,
            &e,
            &alpha,
            beta.as_deref(),
            beta_offset.as_deref(),
            format,
            out,
        ),
        Command::Verify { path } => cmd_verify(path),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
