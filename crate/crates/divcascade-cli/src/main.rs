//! `divcascade` command-line tool: list the measure registry, evaluate a
//! measure on a pair or on two distributions, run the audit suite and
//! compare audit reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divcascade::audit::diff_verdicts;
use divcascade::cascade::chains::{self, ChainSpec};
use divcascade::distributions::{self, Format as FileFormat};
use divcascade::{run_audit, AuditConfig, AuditReport, ChainSelection, Error, MeasureId, PositivePair};

/// Exit status for invalid input values or unparsable files.
const EXIT_VALIDATION: u8 = 2;
/// Exit status for a measure name that is not in the registry.
const EXIT_UNKNOWN_MEASURE: u8 = 3;
/// Exit status when at least one audit check fails.
const EXIT_CHECK_FAILED: u8 = 4;
/// Exit status for an invalid audit configuration.
const EXIT_CONFIG: u8 = 5;
/// Exit status of `report-diff` when verdicts differ.
const EXIT_DIFFERENT: u8 = 1;

#[derive(Parser)]
#[command(name = "divcascade", version, about = "Mean-difference divergence measures and their audit suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every registry measure with its definition and normalization.
    List {
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Evaluate a measure on a pair (--a/--b) or on two distribution files (--p/--q).
    Compute(ComputeArgs),
    /// Run the audit suite and optionally write a JSON report.
    Audit(AuditArgs),
    /// Compare the verdicts of two JSON reports.
    ReportDiff { report_a: PathBuf, report_b: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ComputeArgs {
    /// Measure name, e.g. `V1`, `delta`, `W8`, `L(2)`, `Delta1(3)`.
    #[arg(long, value_name = "NAME")]
    measure: String,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    /// First distribution: CSV (one row or one column) or a JSON array.
    #[arg(long, value_name = "FILE")]
    p: Option<PathBuf>,
    /// Second distribution, same format as --p.
    #[arg(long, value_name = "FILE")]
    q: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Args)]
struct AuditArgs {
    /// Comma-separated chain ids, or `all` for the full suite.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    chains: Vec<String>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, env = "DIVCASCADE_SEED", default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Write the JSON report to this path.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Extra chains to audit, as a TOML (`[[chain]]`) or JSON document.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List { format } => list(format),
        Command::Compute(args) => compute(&args),
        Command::Audit(args) => audit(&args),
        Command::ReportDiff { report_a, report_b } => report_diff(&report_a, &report_b),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Shortest decimal form that reads back to the same double (at most 17
/// significant digits).
fn fmt_value(v: f64) -> String {
    if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn list(format: OutputFormat) -> Result<u8, Failure> {
    let catalog = MeasureId::catalog();
    match format {
        OutputFormat::Text => {
            for m in catalog {
                let name = m.to_string();
                let desc = m.describe();
                if desc.starts_with(&name) {
                    println!("{desc}");
                } else {
                    println!("{name}, {desc}");
                }
            }
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = catalog
                .into_iter()
                .map(|m| serde_json::json!({ "id": m.to_string(), "description": m.describe() }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).expect("static data serializes"));
        }
    }
    Ok(0)
}

fn measure_error(e: Error) -> Failure {
    match e {
        Error::UnknownMeasure(_) => Failure::new(EXIT_UNKNOWN_MEASURE, e.to_string()),
        other => Failure::new(EXIT_VALIDATION, other.to_string()),
    }
}

fn compute(args: &ComputeArgs) -> Result<u8, Failure> {
    let measure: MeasureId = args.measure.parse().map_err(measure_error)?;
    let scalar = args.a.is_some() || args.b.is_some();
    let files = args.p.is_some() || args.q.is_some();
    let value = match (scalar, files) {
        (true, false) => {
            let (Some(a), Some(b)) = (args.a, args.b) else {
                return Err(Failure::new(EXIT_VALIDATION, "--a and --b must be given together"));
            };
            let pair = PositivePair::new(a, b).map_err(measure_error)?;
            measure.eval(pair)
        }
        (false, true) => {
            let (Some(p), Some(q)) = (&args.p, &args.q) else {
                return Err(Failure::new(EXIT_VALIDATION, "--p and --q must be given together"));
            };
            let load = |path: &PathBuf| {
                distributions::load_distribution(path, FileFormat::from_path(path))
                    .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
            };
            let (p, q) = (load(p)?, load(q)?);
            distributions::divergence(measure, &p, &q).map_err(measure_error)?
        }
        _ => {
            return Err(Failure::new(EXIT_VALIDATION, "give exactly one input mode: --a/--b or --p/--q"));
        }
    };
    match args.format {
        OutputFormat::Text => println!("{}", fmt_value(value)),
        OutputFormat::Json => println!("{}", serde_json::json!({ "measure": measure.to_string(), "value": value })),
    }
    Ok(0)
}

fn load_chain_document(path: &Path) -> Result<Vec<ChainSpec>, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))?;
    let is_json = path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let parsed = if is_json { chains::chains_from_json(&text) } else { chains::chains_from_toml(&text) };
    parsed.map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))
}

fn audit_config(args: &AuditArgs) -> Result<AuditConfig, Failure> {
    let defaults = AuditConfig::default();
    let chains = if args.chains.len() == 1 && args.chains[0] == "all" {
        ChainSelection::All
    } else {
        ChainSelection::Named(args.chains.iter().map(|c| c.trim().to_string()).collect())
    };
    let extra_chains = match &args.config {
        Some(path) => load_chain_document(path)?,
        None => Vec::new(),
    };
    let cfg = AuditConfig {
        chains,
        extra_chains,
        samples: args.samples,
        seed: args.seed,
        tolerance: args.tolerance,
        workers: args.workers.unwrap_or(defaults.workers),
    };
    cfg.validate().map_err(|e| Failure::new(EXIT_CONFIG, e.to_string()))?;
    Ok(cfg)
}

fn audit(args: &AuditArgs) -> Result<u8, Failure> {
    let cfg = audit_config(args)?;
    let report = run_audit(&cfg).map_err(|e| Failure::new(EXIT_CONFIG, e.to_string()))?;
    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json())
            .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    }
    let failures = report.failures();
    match args.format {
        OutputFormat::Json => println!("{}", report.to_json()),
        OutputFormat::Text => {
            for c in &failures {
                println!("FAIL {} (max violation {})", c.id, fmt_value(c.max_violation));
                for cx in &c.counterexamples {
                    println!("    #{} {}: {} [{}]", cx.index, cx.input, fmt_value(cx.violation), cx.detail);
                }
            }
            for e in &report.errata {
                println!("ERRATUM {} at {}: {} -> {}", e.id, e.location, e.description, e.suggested_correction);
            }
            println!(
                "{} checks, {} passed, {} failed, {} errata (seed {})",
                report.checks.len(),
                report.checks.len() - failures.len(),
                failures.len(),
                report.errata.len(),
                cfg.seed
            );
        }
    }
    Ok(if failures.is_empty() { 0 } else { EXIT_CHECK_FAILED })
}

fn read_report(path: &Path) -> Result<AuditReport, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    AuditReport::from_json(&text).map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

fn report_diff(a: &Path, b: &Path) -> Result<u8, Failure> {
    let (ra, rb) = (read_report(a)?, read_report(b)?);
    let lines = diff_verdicts(&ra, &rb);
    for l in &lines {
        println!("{l}");
    }
    Ok(if lines.is_empty() { 0 } else { EXIT_DIFFERENT })
}
