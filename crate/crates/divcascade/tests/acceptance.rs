//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed even when
//! the criterion passes. Criteria listed in [`KNOWN_INFEASIBLE`] are evaluated
//! exactly as stated and reported honestly; their failure does not fail the
//! run because the claim cannot hold in floating point (or at all), and the
//! accompanying analysis is printed alongside.

use std::sync::OnceLock;
use std::time::Instant;

use divcascade::analysis::{audit_chain, SamplerConfig};
use divcascade::cascade::chains;
use divcascade::distributions::divergence;
use divcascade::generators::{exp_representation, exp_series_partial, step_ratio_generator};
use divcascade::{run_audit, AuditConfig, AuditReport, CheckResult, FamilyId, MeasureId, PositivePair, ProbVector};

const SEED: u64 = 42;

/// Criterion numbers whose statement cannot be met; see the analysis printed
/// by the criterion itself.
const KNOWN_INFEASIBLE: &[u32] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn full_report() -> &'static AuditReport {
    static REPORT: OnceLock<AuditReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        run_audit(&AuditConfig { seed: SEED, ..AuditConfig::default() }).expect("default config is valid")
    })
}

fn checks_with_prefix(prefix: &str) -> Vec<&'static CheckResult> {
    full_report().checks.iter().filter(|c| c.id.starts_with(prefix)).collect()
}

/// Every check passes, with at least `min_samples` inputs and a maximum
/// violation no larger than `max_violation`.
fn group_summary(checks: &[&CheckResult], min_samples: u64, max_violation: f64) -> Outcome {
    if checks.is_empty() {
        return outcome(false, "no checks found");
    }
    let bad: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed() || c.samples < min_samples || c.max_violation > max_violation)
        .map(|c| format!("{} ({}, {} samples, max violation {:e})", c.id, c.verdict, c.samples, c.max_violation))
        .collect();
    let worst = checks.iter().map(|c| c.max_violation).fold(0.0, f64::max);
    if bad.is_empty() {
        outcome(true, format!("{} checks, worst violation {worst:e}", checks.len()))
    } else {
        outcome(false, format!("{} of {} checks out of bounds: {}", bad.len(), checks.len(), bad.join("; ")))
    }
}

fn errata_present(ids: &[&str]) -> Result<(), String> {
    let missing: Vec<&str> =
        ids.iter().copied().filter(|id| !full_report().errata.iter().any(|e| e.id == *id)).collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(format!("missing errata {missing:?}"))
    }
}

fn criterion_1() -> Outcome {
    let sampler = SamplerConfig { near_diagonal_fraction: 0.0, ..SamplerConfig::new(1_000_000, SEED) };
    let start = Instant::now();
    let mut results = Vec::new();
    for id in ["means", "base"] {
        let chain = chains::find(id).expect("catalog chain");
        results.push(audit_chain(&chain, &sampler, 1e-12, 1).expect("catalog chains are valid"));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let refs: Vec<&CheckResult> = results.iter().collect();
    let summary = group_summary(&refs, 1_000_000, 1e-12);
    outcome(summary.pass && elapsed < 10.0, format!("{}; {elapsed:.2} s on one thread", summary.detail))
}

fn criterion_2() -> Outcome {
    group_summary(&checks_with_prefix("identity."), 100_000, 1e-12)
}

fn criterion_3() -> Outcome {
    let checks = checks_with_prefix("chain.");
    let ids: Vec<&str> = checks.iter().map(|c| c.id.as_str()).collect();
    let required =
        ["chain.base", "chain.w-scale", "chain.w-definitions", "chain.pyramid", "chain.reverse-4", "chain.u-tail"];
    if let Some(missing) = required.iter().find(|r| !ids.contains(r)) {
        return outcome(false, format!("{missing} not audited"));
    }
    group_summary(&checks, 100_000, 1e-12)
}

fn criterion_4() -> Outcome {
    group_summary(&checks_with_prefix("beta."), 1, 1e-9)
}

fn criterion_5() -> Outcome {
    let mut checks = checks_with_prefix("decomposition.");
    let parts = checks.len();
    checks.extend(checks_with_prefix("combination."));
    let summary = group_summary(&checks, 10_000, 1e-11);
    // Every corrected coefficient or combination must have an erratum record.
    let corrected = [
        "coefficient.w-step.17",
        "combination.w-step.3",
        "combination.w-step.15",
        "combination.w-step.16",
        "combination.w-step.25",
    ];
    match errata_present(&corrected) {
        Ok(()) => outcome(
            summary.pass && parts == 27 + 14 + 8 + 4,
            format!("{parts} proof parts; {}; {} corrections carry errata", summary.detail, corrected.len()),
        ),
        Err(e) => outcome(false, e),
    }
}

fn criterion_6() -> Outcome {
    let summary = group_summary(&checks_with_prefix("convexity."), 1, 1e-6);
    // Corrected f″ of W8 against its closed form; the printed 14x⁴ variant must differ.
    let w8 = MeasureId::W(8);
    let corrected = |x: f64| (15.0 * x.powi(4) + 2.0 * x * x + 15.0) / (16.0 * x.powf(3.5));
    let printed = |x: f64| (14.0 * x.powi(4) + 2.0 * x * x + 15.0) / (16.0 * x.powf(3.5));
    let xs = [0.01, 0.3, 1.0, 2.5, 100.0];
    let corrected_err =
        xs.iter().map(|&x| (w8.second_derivative(x) - corrected(x)).abs() / corrected(x)).fold(0.0, f64::max);
    let printed_err =
        xs.iter().map(|&x| (w8.second_derivative(x) - printed(x)).abs() / corrected(x)).fold(0.0, f64::max);
    let e4 = errata_present(&["E4"]);
    outcome(
        summary.pass && corrected_err < 1e-12 && printed_err > 1e-3 && e4.is_ok(),
        format!(
            "{}; W8 f″ closed form within {corrected_err:e}, printed variant off by {printed_err:e}, E4 {}",
            summary.detail,
            if e4.is_ok() { "recorded" } else { "missing" }
        ),
    )
}

fn criterion_7() -> Outcome {
    let summary = group_summary(&checks_with_prefix("series."), 1, 1e-12);
    let e5 = errata_present(&["E5.Delta1", "E5.K1", "E5.Mnew"]);
    // Size of the neglected tail at the worst end of the range.
    let p = PositivePair::new(0.1, 1.0).unwrap();
    let (s, u) = p.su();
    let tails: Vec<String> = [FamilyId::Delta2, FamilyId::K2]
        .into_iter()
        .map(|f| {
            let closed = exp_representation(f, p);
            let tail = (closed - exp_series_partial(f, p, 30)) / closed;
            format!("{}: step ratio {:.3}, 30-term tail {tail:.3e}", f.name(), step_ratio_generator(f, s, u))
        })
        .collect();
    let analysis = format!(
        "for the families with step ratio (x−1)²/x the ratio reaches 8.1 at a/b = 0.1 and 10, \
         so 30 terms leave a relative tail near 7e-10, above 1e-12 ({})",
        tails.join("; ")
    );
    outcome(
        summary.pass && e5.is_ok(),
        format!("{}; E5 errata {}; {analysis}", summary.detail, if e5.is_ok() { "recorded" } else { "missing" }),
    )
}

fn criterion_8() -> Outcome {
    let summary = group_summary(&checks_with_prefix("distribution."), 1, 1e-12);
    let p = ProbVector::new(vec![0.5, 0.5]).unwrap();
    let q = ProbVector::new(vec![0.25, 0.75]).unwrap();
    let delta = divergence("delta".parse().unwrap(), &p, &q).unwrap();
    let v1 = "V1".parse::<MeasureId>().unwrap().eval(PositivePair::new(4.0, 1.0).unwrap());
    let (d_err, v_err) = ((delta - 2.0 / 15.0).abs(), (v1 - 0.1).abs());
    let samples_ok = checks_with_prefix("distribution.chain.").iter().all(|c| c.samples >= 10_000);
    outcome(
        summary.pass && samples_ok && d_err <= 1e-15 && v_err <= 1e-15,
        format!("{}; delta point value off by {d_err:e}, V1(4,1) off by {v_err:e}", summary.detail),
    )
}

fn criterion_9() -> Outcome {
    let many = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).max(4);
    let single = run_audit(&AuditConfig { seed: SEED, workers: 1, ..AuditConfig::default() }).unwrap();
    let again = run_audit(&AuditConfig { seed: SEED, workers: many, ..AuditConfig::default() }).unwrap();
    let reference = full_report().body_json();
    let same = single.body_json() == reference && again.body_json() == reference;
    outcome(
        same,
        format!(
            "bodies of three runs (1, {many} and default workers) are {}",
            if same { "byte-identical" } else { "different" }
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "means and generator chains on 1e6 pairs", criterion_1),
        (2, "exact-identity suite", criterion_2),
        (3, "chain suite", criterion_3),
        (4, "sharp-constant suite", criterion_4),
        (5, "residual-decomposition suite", criterion_5),
        (6, "convexity suite", criterion_6),
        (7, "exponential-series suite", criterion_7),
        (8, "distribution suite", criterion_8),
        (9, "determinism", criterion_9),
    ];
    let mut unexpected = 0;
    for (n, name, run) in criteria {
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_INFEASIBLE.contains(&n) { " [known infeasible]" } else { "" };
        println!("criterion {n} ({name}): {verdict}{note} — {}", o.detail);
        if !o.pass && note.is_empty() {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
