//! Numerical machinery behind every audit: finite-difference derivative
//! checks, convexity certificates, sup-ratio (`β`) estimation, seeded
//! sampling and a deterministic parallel check engine.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::cascade::chains::{to_f64, ChainSpec};
use crate::distributions::{sample_dirichlet, ProbVector};
use crate::error::{Error, Result};
use crate::num::{rel_residual, su_of_offset, DoubleDouble, PositivePair, Scalar};
use crate::registry::MeasureId;

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// Default central-difference step `max(1e-5·x, 1e-7)`.
pub fn default_step(x: f64) -> f64 {
    (1e-5 * x).max(1e-7)
}

/// Central second difference `(f(x+h) − 2f(x) + f(x−h))/h²` in `f64`.
/// `h` defaults to [`default_step`].
pub fn fd_second_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: Option<f64>) -> Result<f64> {
    let h = h.unwrap_or_else(|| default_step(x));
    if !(h > 0.0) || !(x - h > 0.0) {
        return Err(Error::Domain(format!("step h = {h} leaves the domain at x = {x}")));
    }
    // Round the step down to a power of two so that x ± h are exact.
    let h = 2f64.powi(h.log2().floor() as i32);
    Ok((f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h))
}

/// The same central second difference with every function value carried in
/// double-double arithmetic. `g` receives the `(s, u)` coordinates of the
/// shifted point. Rounding in `f` no longer dominates the difference, so the
/// result is limited by truncation only, even where `f` is nearly linear.
pub fn fd_second_derivative_extended<G>(g: G, x: f64, h: f64) -> Result<f64>
where
    G: Fn(DoubleDouble, DoubleDouble) -> DoubleDouble,
{
    if !(h > 0.0) || !(x - h > 0.0) {
        return Err(Error::Domain(format!("step h = {h} leaves the domain at x = {x}")));
    }
    let at = |dx: f64| {
        let (s, u) = su_of_offset(x, dx);
        g(s, u)
    };
    let d = at(h) - at(0.0) * DoubleDouble::cst(2.0) + at(-h);
    let h2 = DoubleDouble::cst(h) * DoubleDouble::cst(h);
    Ok((d / h2).into())
}

/// Step used for certification: `10⁻³·x`, shrunk to `2·10⁻²·|x−1|` near the
/// diagonal so that generators with high-order zeros at `x = 1` are resolved,
/// floored at `10⁻⁶·x`.
pub fn certification_step(x: f64) -> f64 {
    (1e-3 * x).min(2e-2 * (x - 1.0).abs()).max(1e-6 * x)
}

/// Richardson-extrapolated extended-precision second difference of a
/// measure's generator, `(4·D(h/2) − D(h))/3`, accurate to `O(h⁴)`.
pub fn fd_certified(measure: MeasureId, x: f64) -> f64 {
    let h = certification_step(x);
    let g = |s, u| measure.generator(s, u);
    let d1 = fd_second_derivative_extended(g, x, h).unwrap_or(f64::NAN);
    let d2 = fd_second_derivative_extended(g, x, h / 2.0).unwrap_or(f64::NAN);
    (4.0 * d2 - d1) / 3.0
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// A strictly increasing set of positive evaluation points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    /// Validate an explicit point list.
    pub fn new(points: Vec<f64>) -> Result<Grid> {
        if points.iter().any(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::Domain("grid points must be positive and finite".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("grid points must be strictly increasing".into()));
        }
        Ok(Grid { points })
    }

    /// `n ≥ 2` log-spaced points from `lo` to `hi` inclusive.
    pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if !(lo > 0.0 && hi > lo) || n < 2 {
            return Err(Error::Domain(format!("bad log grid [{lo}, {hi}] with {n} points")));
        }
        let (a, b) = (lo.ln(), hi.ln());
        let k = (n - 1) as f64;
        let mut pts: Vec<f64> = (0..n).map(|i| ((a * (k - i as f64) + b * i as f64) / k).exp()).collect();
        pts[0] = lo;
        pts[n - 1] = hi;
        Grid::new(pts)
    }

    /// `n ≥ 2` evenly spaced points from `lo` to `hi` inclusive.
    pub fn linear(lo: f64, hi: f64, n: usize) -> Result<Grid> {
        if !(lo > 0.0 && hi > lo) || n < 2 {
            return Err(Error::Domain(format!("bad linear grid [{lo}, {hi}] with {n} points")));
        }
        Grid::new((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
    }

    /// Sorted union of two grids (duplicates removed).
    pub fn union(&self, other: &Grid) -> Grid {
        let mut pts: Vec<f64> = self.points.iter().chain(&other.points).copied().collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Grid { points: pts }
    }

    /// 2001 log-spaced points on `[1e-4, 1e4]` plus 201 points on
    /// `[0.999, 1.001]`.
    pub fn default_grid() -> Grid {
        let wide = Grid::log_spaced(1e-4, 1e4, 2001).expect("static grid");
        // Built around 1 so that x = 1 itself is a grid point.
        let band = Grid::new((-100..=100).map(|k| 1.0 + f64::from(k) * 1e-5).collect()).expect("static grid");
        wide.union(&band)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Check results
// ---------------------------------------------------------------------------

/// Outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// A violating input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Sample or grid index.
    pub index: u64,
    /// The input, printed with 17 significant digits.
    pub input: String,
    pub violation: f64,
    /// Which link, identity or sub-claim was violated.
    pub detail: String,
}

/// Result of one verified claim.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub kind: String,
    pub samples: u64,
    pub max_violation: f64,
    pub verdict: Verdict,
    pub counterexamples: Vec<Counterexample>,
    /// Plain-language statement of the claim being verified.
    pub paper_ref: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// At most this many counterexamples are kept per check.
pub const MAX_COUNTEREXAMPLES: usize = 10;

/// Format a float with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Map each item through `f` on `workers` threads and return the results in
/// input order, independent of the worker count.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                scope.spawn(move || c.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

/// Evaluate `eval` on every input (in parallel), then merge single-threaded
/// in input order. `eval` returns the violation and the index of the
/// violated sub-claim; `input` renders an input and `detail` a sub-claim.
/// A non-finite violation counts as a failure and is reported as `f64::MAX`.
#[allow(clippy::too_many_arguments)]
pub fn run_check<T, E, I, D>(
    id: &str,
    kind: &str,
    claim: &str,
    inputs: &[T],
    tol: f64,
    workers: usize,
    eval: E,
    input: I,
    detail: D,
) -> CheckResult
where
    T: Sync,
    E: Fn(&T) -> (f64, usize) + Sync,
    I: Fn(&T) -> String,
    D: Fn(usize) -> String,
{
    let outcomes = par_map(inputs, workers, eval);
    let mut max_violation = f64::NEG_INFINITY;
    let mut counterexamples = Vec::new();
    let mut failed = false;
    for (i, (v, which)) in outcomes.into_iter().enumerate() {
        let v = if v.is_finite() { v } else { f64::MAX };
        if v > max_violation {
            max_violation = v;
        }
        if v > tol {
            failed = true;
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(Counterexample {
                    index: i as u64,
                    input: input(&inputs[i]),
                    violation: v,
                    detail: detail(which),
                });
            }
        }
    }
    if inputs.is_empty() {
        max_violation = 0.0;
    }
    CheckResult {
        id: id.to_string(),
        kind: kind.to_string(),
        samples: inputs.len() as u64,
        // Report 0 rather than a negative slack so that reports read naturally.
        max_violation: max_violation.max(0.0),
        verdict: if failed { Verdict::Fail } else { Verdict::Pass },
        counterexamples,
        paper_ref: claim.to_string(),
    }
}

/// Render a pair input.
pub fn fmt_pair(p: &PositivePair) -> String {
    format!("a={}, b={}", fmt17(p.a), fmt17(p.b))
}

/// Render a distribution pair input.
pub fn fmt_dist(pq: &(ProbVector, ProbVector)) -> String {
    let v = |p: &ProbVector| p.entries().iter().map(|&e| fmt17(e)).collect::<Vec<_>>().join(",");
    format!("P=[{}], Q=[{}]", v(&pq.0), v(&pq.1))
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// How audit pairs are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub samples: usize,
    pub seed: u64,
    /// Log-uniform range for each coordinate.
    pub lo: f64,
    pub hi: f64,
    /// Fraction of samples drawn from the near-diagonal band.
    pub near_diagonal_fraction: f64,
    /// Half-width of the band: `b = a(1+δ)`, `|δ| ≤ band`.
    pub band: f64,
    /// Draw only exact ties `a = b` (a vacuous control).
    pub diagonal_only: bool,
}

impl SamplerConfig {
    /// The standard policy: `[1e-6, 1e6]`, 10% of samples with `|δ| ≤ 1e-3`.
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplerConfig {
            samples,
            seed,
            lo: 1e-6,
            hi: 1e6,
            near_diagonal_fraction: 0.1,
            band: 1e-3,
            diagonal_only: false,
        }
    }
}

/// Draw pairs sequentially from a ChaCha20 stream seeded with `cfg.seed`.
pub fn sample_pairs(cfg: &SamplerConfig) -> Vec<PositivePair> {
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let (l0, l1) = (cfg.lo.ln(), cfg.hi.ln());
    let log_uniform = |rng: &mut ChaCha20Rng| (l0 + (l1 - l0) * rng.gen::<f64>()).exp();
    (0..cfg.samples)
        .map(|_| {
            let a = log_uniform(&mut rng);
            let b = if cfg.diagonal_only {
                a
            } else if rng.gen::<f64>() < cfg.near_diagonal_fraction {
                a * (1.0 + cfg.band * (2.0 * rng.gen::<f64>() - 1.0))
            } else {
                log_uniform(&mut rng)
            };
            PositivePair { a, b }
        })
        .collect()
}

/// Draw `count` pairs of Dirichlet(1) distributions with a common length
/// drawn uniformly from `2..=16`.
pub fn sample_distribution_pairs(count: usize, seed: u64) -> Vec<(ProbVector, ProbVector)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=16);
            let p = sample_dirichlet(&mut rng, n);
            let q = sample_dirichlet(&mut rng, n);
            (p, q)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Claims
// ---------------------------------------------------------------------------

/// Largest relative violation over the links of a chain, given the value of
/// each measure, and the index of the worst link. Each link `i ≤ j`
/// contributes `(vᵢ − vⱼ)/max(|vᵢ|, |vⱼ|, 1e-300)`; exact ties give 0.
pub fn chain_violation_with<F: Fn(MeasureId) -> f64>(chain: &ChainSpec, value: F) -> (f64, usize) {
    let vals: Vec<f64> = chain.terms.iter().map(|t| to_f64(t.coef) * value(t.measure)).collect();
    let mut worst = (f64::NEG_INFINITY, 0);
    for (k, (i, j)) in chain.edges().into_iter().enumerate() {
        let (lo, hi) = (vals[i], vals[j]);
        let v = if lo == hi { 0.0 } else { (lo - hi) / lo.abs().max(hi.abs()).max(1e-300) };
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v > worst.0 {
            worst = (v, k);
        }
    }
    worst
}

/// Chain violation at a pair.
pub fn chain_violation(chain: &ChainSpec, pair: PositivePair) -> (f64, usize) {
    chain_violation_with(chain, |m| m.eval(pair))
}

/// Human-readable name of link `k` of a chain.
pub fn link_label(chain: &ChainSpec, k: usize) -> String {
    chain.edges().get(k).map(|&(i, j)| format!("{} ≤ {}", chain.terms[i], chain.terms[j])).unwrap_or_default()
}

/// Check a chain on pairs drawn per `sampler`.
pub fn audit_chain(chain: &ChainSpec, sampler: &SamplerConfig, tol: f64, workers: usize) -> Result<CheckResult> {
    chain.validate()?;
    let pairs = sample_pairs(sampler);
    Ok(audit_chain_on(chain, &pairs, tol, workers))
}

/// Check a chain on given pairs.
pub fn audit_chain_on(chain: &ChainSpec, pairs: &[PositivePair], tol: f64, workers: usize) -> CheckResult {
    let claim = if chain.description.is_empty() {
        chain.render()
    } else {
        format!("{}: {}", chain.description, chain.render())
    };
    run_check(
        &format!("chain.{}", chain.id),
        "chain",
        &claim,
        pairs,
        tol,
        workers,
        |p| chain_violation(chain, *p),
        fmt_pair,
        |k| link_label(chain, k),
    )
}

/// An exact linear identity `Σ cᵢ·Mᵢ = Σ dⱼ·Nⱼ` between measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearIdentity {
    pub id: String,
    pub lhs: Vec<(f64, MeasureId)>,
    pub rhs: Vec<(f64, MeasureId)>,
}

impl LinearIdentity {
    pub fn new(id: &str, lhs: Vec<(f64, MeasureId)>, rhs: Vec<(f64, MeasureId)>) -> Self {
        LinearIdentity { id: id.to_string(), lhs, rhs }
    }

    /// Relative residual given measure values, scaled by the largest term
    /// before cancellation.
    pub fn residual_with<F: Fn(MeasureId) -> f64>(&self, value: F) -> f64 {
        let mut scale: f64 = 0.0;
        let mut side = |terms: &[(f64, MeasureId)]| {
            terms.iter().fold(0.0, |acc, &(c, m)| {
                let v = c * value(m);
                scale = scale.max(v.abs());
                acc + v
            })
        };
        let l = side(&self.lhs);
        let r = side(&self.rhs);
        let res = rel_residual(l, r, scale);
        if res.is_nan() {
            f64::INFINITY
        } else {
            res
        }
    }

    /// Residual at a pair.
    pub fn residual(&self, pair: PositivePair) -> f64 {
        self.residual_with(|m| m.eval(pair))
    }

    /// Rendering `c·M + … = d·N + …`.
    pub fn render(&self) -> String {
        let side = |t: &[(f64, MeasureId)]| {
            t.iter()
                .map(|(c, m)| if *c == 1.0 { m.to_string() } else { format!("{c}·{m}") })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} = {}", side(&self.lhs), side(&self.rhs))
    }
}

/// A claim searched for counterexamples.
#[derive(Debug, Clone)]
pub enum Claim {
    Chain(ChainSpec),
    Identity(LinearIdentity),
}

/// Draw `budget` pairs per `sampler` (sequentially, single worker) and
/// report every violation found, first ones first, with the worst violation
/// as `max_violation`.
pub fn counterexample_search(claim: &Claim, sampler: &SamplerConfig, budget: usize, tol: f64) -> Result<CheckResult> {
    let cfg = SamplerConfig { samples: budget, ..sampler.clone() };
    let pairs = sample_pairs(&cfg);
    Ok(match claim {
        Claim::Chain(chain) => {
            chain.validate()?;
            let mut r = audit_chain_on(chain, &pairs, tol, 1);
            r.kind = "search".into();
            r
        }
        Claim::Identity(ident) => run_check(
            &format!("identity.{}", ident.id),
            "search",
            &ident.render(),
            &pairs,
            tol,
            1,
            |p| (ident.residual(*p), 0),
            fmt_pair,
            |_| ident.render(),
        ),
    })
}

// ---------------------------------------------------------------------------
// Convexity and β
// ---------------------------------------------------------------------------

/// Relative agreement required between analytic and finite-difference `f″`.
pub const FD_REL_TOL: f64 = 1e-6;
/// Absolute agreement required within [`NEAR_ONE`] of `x = 1`.
pub const FD_ABS_TOL_NEAR_ONE: f64 = 1e-8;
/// Half-width of the band around `x = 1` compared in absolute terms.
pub const NEAR_ONE: f64 = 1e-4;

/// Certify a generator on a grid:
///
/// * `f(1) = 0` and `f′(1) = 0` for divergences;
/// * `f″(x) > 0` at every grid point (`≥ 0` at `x = 1` itself, where
///   generators with a zero of order four or more have `f″(1) = 0`);
/// * analytic `f″` agrees with [`fd_certified`] to [`FD_REL_TOL`] relative,
///   or [`FD_ABS_TOL_NEAR_ONE`] absolute within [`NEAR_ONE`] of 1.
///
/// The reported violation is the worst agreement error in units of
/// [`FD_REL_TOL`] (absolute errors near 1 rescaled by
/// `FD_REL_TOL/FD_ABS_TOL_NEAR_ONE`); a sign failure counts as 1.
pub fn certify_convexity(measure: MeasureId, grid: &Grid) -> Result<CheckResult> {
    let measure = measure.validate()?;
    let xs = grid.points();
    let mut labels = vec!["f(1) = 0 and f′(1) = 0".to_string()];
    labels.push("f″ > 0".into());
    labels.push("analytic f″ matches finite differences".into());
    // Index 0 is the anchor at x = 1, then one entry per grid point.
    let mut inputs = vec![1.0];
    inputs.extend_from_slice(xs);
    let eval = |&x: &f64| -> (f64, usize) {
        if x == 1.0 && measure.is_divergence() {
            let (f, d, _) = measure.jet(1.0);
            return (f.abs().max(d.abs()), 0);
        }
        let (_, _, dd) = measure.jet(x);
        let strict = (x - 1.0).abs() > 1e-12;
        if !(dd > 0.0 || (!strict && dd >= 0.0)) {
            return (1.0, 1);
        }
        let fd = fd_certified(measure, x);
        let err = if (x - 1.0).abs() < NEAR_ONE {
            (fd - dd).abs() * (FD_REL_TOL / FD_ABS_TOL_NEAR_ONE)
        } else {
            (fd - dd).abs() / dd.abs()
        };
        (err, 2)
    };
    Ok(run_check(
        &format!("convexity.{measure}"),
        "convexity",
        &format!("{measure} has a convex generator vanishing at 1"),
        &inputs,
        FD_REL_TOL,
        1,
        eval,
        |x| format!("x={}", fmt17(*x)),
        |k| labels[k].clone(),
    ))
}

/// Result of [`estimate_sup_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupRatio {
    /// Largest ratio on the grid (the limit is used at `x = 1`).
    pub sup: f64,
    pub arg: f64,
    /// `lim_{x→1} f″_num/f″_den`.
    pub limit: f64,
    /// Grid steps where the ratio moves the wrong way: it should increase
    /// towards `x = 1` from the left and decrease from `x = 1` to the right.
    /// Changes below `1e-9` relative are ignored.
    pub monotonicity_breaks: usize,
}

/// Symmetric-mean Richardson extrapolation of `g` to `x = 1` from
/// `x = 1 ± ε`, `ε ∈ {1e-5, 1e-6}`.
pub fn limit_at_one<G: Fn(f64) -> f64>(g: G) -> f64 {
    let (e1, e2) = (1e-5f64, 1e-6f64);
    let m = |e: f64| 0.5 * (g(1.0 + e) + g(1.0 - e));
    let (m1, m2) = (m(e1), m(e2));
    (e1 * e1 * m2 - e2 * e2 * m1) / (e1 * e1 - e2 * e2)
}

/// Ratio of analytic second derivatives `f″_num/f″_den` at `x`.
pub fn second_derivative_ratio(num: MeasureId, den: MeasureId, x: f64) -> f64 {
    num.second_derivative(x) / den.second_derivative(x)
}

/// Supremum of `f″_num/f″_den` over a grid, with its argmax and the limit at
/// `x = 1`. Fails with the offending `x` when `f″_den ≤ 0` away from 1.
pub fn estimate_sup_ratio(num: MeasureId, den: MeasureId, grid: &Grid) -> Result<SupRatio> {
    let (num, den) = (num.validate()?, den.validate()?);
    let limit = limit_at_one(|x| second_derivative_ratio(num, den, x));
    let mut best = SupRatio { sup: f64::NEG_INFINITY, arg: f64::NAN, limit, monotonicity_breaks: 0 };
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid.points() {
        let dd = den.second_derivative(x);
        let g = if dd > 0.0 {
            num.second_derivative(x) / dd
        } else if (x - 1.0).abs() < 1e-12 {
            limit
        } else {
            return Err(Error::Singularity(x));
        };
        if g > best.sup {
            best.sup = g;
            best.arg = x;
        }
        if let Some((px, pg)) = prev {
            let slack = 1e-9 * g.abs().max(pg.abs());
            let wrong = if x <= 1.0 {
                g < pg - slack
            } else if px >= 1.0 {
                g > pg + slack
            } else {
                false
            };
            if wrong {
                best.monotonicity_breaks += 1;
            }
        }
        prev = Some((x, g));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fd_of_quadratic() {
        for x in [0.5, 1.0, 3.0, 1024.0] {
            let v = fd_second_derivative(|x| x * x, x, None).unwrap();
            assert!((v - 2.0).abs() < 1e-6, "{x}: {v}");
        }
        // Away from dyadic points the result is exact up to rounding in f.
        let v = fd_second_derivative(|x| x * x, 0.7, None).unwrap();
        assert!((v - 2.0).abs() < 1e-4);
        assert!(fd_second_derivative(|x| x, 1e-3, Some(1e-2)).is_err());
    }

    #[test]
    fn fd_of_generators_at_one() {
        let w1 = MeasureId::W(1);
        let v = fd_second_derivative(|x| w1.generator_at(x), 1.0, None).unwrap();
        assert!((v - 2.0).abs() < 1e-5);
        let v1 = MeasureId::V(1);
        let v = fd_second_derivative(|x| v1.generator_at(x), 1.0, None).unwrap();
        assert!(v.abs() < 1e-8);
    }

    #[test]
    fn extended_fd_resolves_nearly_linear_generators() {
        // f″ of W1 at x = 1e4 is 16/(x+1)³ ≈ 1.6e-11 while f ≈ 2e4.
        let w1 = MeasureId::W(1);
        let x = 1e4;
        let an = w1.second_derivative(x);
        let fd = fd_second_derivative_extended(|s, u| w1.generator(s, u), x, default_step(x)).unwrap();
        assert!(((fd - an) / an).abs() < 1e-8, "{fd} vs {an}");
    }

    #[test]
    fn grid_shapes() {
        let g = Grid::default_grid();
        assert_eq!(g.len(), 2001 + 201 - 1); // x = 1 is shared
        assert!(g.points().contains(&1.0));
        assert_eq!(g.points()[0], 1e-4);
        assert_eq!(*g.points().last().unwrap(), 1e4);
        assert!(Grid::new(vec![1.0, 1.0]).is_err());
        assert!(Grid::new(vec![-1.0, 1.0]).is_err());
    }

    #[test]
    fn sampler_is_deterministic_and_banded() {
        let cfg = SamplerConfig::new(10_000, 9);
        let a = sample_pairs(&cfg);
        assert_eq!(a, sample_pairs(&cfg));
        let near = a.iter().filter(|p| (p.a / p.b - 1.0).abs() <= 1.001e-3).count();
        assert!((800..1200).contains(&near), "{near}");
        assert!(a.iter().all(|p| p.a >= 1e-6 && p.a <= 1e6));
        let diag = sample_pairs(&SamplerConfig { diagonal_only: true, ..cfg });
        assert!(diag.iter().all(|p| p.a == p.b));
    }

    #[test]
    fn parallel_merge_is_order_preserving() {
        let items: Vec<u32> = (0..1000).collect();
        for w in [1, 2, 3, 7, 64] {
            assert_eq!(par_map(&items, w, |x| x * 2), items.iter().map(|x| x * 2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn sup_ratio_of_first_step() {
        let grid = Grid::default_grid();
        let r = estimate_sup_ratio(MeasureId::D(1), MeasureId::D(15), &grid).unwrap();
        assert!((r.limit - 1.0 / 14.0).abs() < 1e-9);
        assert!(r.sup <= 1.0 / 14.0 + 1e-9);
        assert_eq!(r.monotonicity_breaks, 0);
        let same = estimate_sup_ratio(MeasureId::V(3), MeasureId::V(3), &grid).unwrap();
        assert!((same.sup - 1.0).abs() < 1e-15 && (same.limit - 1.0).abs() < 1e-12);
        let r = estimate_sup_ratio(MeasureId::V(1), MeasureId::V(3), &grid).unwrap();
        assert!((r.limit - 0.125).abs() < 1e-9);
    }

    #[test]
    fn convexity_certificates() {
        let grid = Grid::default_grid();
        for m in [MeasureId::W(6), MeasureId::V(7), MeasureId::U(15)] {
            let r = certify_convexity(m, &grid).unwrap();
            assert!(r.passed(), "{m}: {:?}", r.counterexamples);
        }
        // A mean is not a convex divergence generator.
        let r = certify_convexity("H".parse().unwrap(), &grid).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn negative_control_is_refuted_quickly() {
        let chain = crate::cascade::chains::w_scale_reversed();
        let r = counterexample_search(&Claim::Chain(chain), &SamplerConfig::new(0, 42), 100, 1e-12).unwrap();
        assert!(!r.passed());
        assert!(r.counterexamples[0].index < 100);
    }

    #[test]
    fn vacuous_pass_on_the_diagonal() {
        let chain = crate::cascade::chains::w_scale_reversed();
        let cfg = SamplerConfig { diagonal_only: true, ..SamplerConfig::new(0, 1) };
        let r = counterexample_search(&Claim::Chain(chain), &cfg, 1000, 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(r.max_violation, 0.0);
    }
}
