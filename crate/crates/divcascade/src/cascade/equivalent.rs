//! Every residual measure written as an integer combination of the base
//! measures and mean differences, together with a least-squares oracle that
//! recovers such combinations numerically.
//!
//! The closed-form generators in the parent module are normative; these
//! combinations are data. [`equivalent_expression`] evaluates a combination
//! as published, [`fit_combination`] recovers the exact rational
//! coefficients over a given basis, and [`repair_combination`] finds the
//! smallest edit (prefactor, one coefficient, or one measure) that turns a
//! mismatching line into an exact identity.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::chains::{q, to_f64, Rational};
use super::ResidualKind;
use crate::error::{Error, Result};
use crate::num::{rel_residual, PositivePair};
use crate::registry::MeasureId;

/// `prefactor·Σ cᵢ·Mᵢ` with integer `cᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub prefactor: Rational,
    pub terms: Vec<(i64, MeasureId)>,
}

impl Combination {
    /// Build from registry names; panics on an invalid name (static data only).
    fn of(prefactor: (i64, i64), terms: &[(i64, &str)]) -> Self {
        Combination {
            prefactor: q(prefactor.0, prefactor.1),
            terms: terms.iter().map(|&(c, n)| (c, n.parse().expect("static combination names are valid"))).collect(),
        }
    }

    /// Value at a pair and the largest absolute term before cancellation.
    pub fn eval(&self, pair: PositivePair) -> (f64, f64) {
        self.eval_with(|m| m.eval(pair))
    }

    /// Value with caller-supplied measure values (used for distributions).
    pub fn eval_with<F: Fn(MeasureId) -> f64>(&self, value: F) -> (f64, f64) {
        let pf = to_f64(self.prefactor);
        let mut sum = 0.0;
        let mut scale: f64 = 0.0;
        for &(c, m) in &self.terms {
            let v = pf * c as f64 * value(m);
            sum += v;
            scale = scale.max(v.abs());
        }
        (sum, scale)
    }

    /// Distinct measures in order of first appearance.
    pub fn basis(&self) -> Vec<MeasureId> {
        let mut out: Vec<MeasureId> = Vec::new();
        for &(_, m) in &self.terms {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        for (i, &(c, m)) in self.terms.iter().enumerate() {
            let sign = if c < 0 {
                " − "
            } else if i == 0 {
                ""
            } else {
                " + "
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                body.push_str(&format!("{sign}{m}"));
            } else {
                body.push_str(&format!("{sign}{mag}·{m}"));
            }
        }
        if self.prefactor == q(1, 1) {
            f.write_str(&body)
        } else {
            write!(f, "({})({body})", self.prefactor)
        }
    }
}

/// All published combination lines for a residual measure (several for the
/// measures written in four equivalent ways).
pub fn combinations_as_printed(kind: ResidualKind, t: u8) -> Vec<Combination> {
    let c = Combination::of;
    let one = (1, 1);
    let two = (2, 1);
    match (kind, t) {
        (ResidualKind::V, 1) => vec![
            c(one, &[(1, "K"), (26, "delta"), (-48, "D_CN")]),
            c(one, &[(1, "K"), (30, "D_CN"), (-26, "D_CG")]),
            c(one, &[(1, "K"), (14, "D_CG"), (-30, "D_RG")]),
            c(one, &[(1, "K"), (12, "D_RG"), (-28, "h")]),
        ],
        (ResidualKind::V, 2) => vec![c(one, &[(1, "Psi"), (64, "h"), (-4, "delta"), (-8, "K")])],
        (ResidualKind::V, 3) => vec![
            c(one, &[(1, "Psi"), (108, "delta"), (-192, "D_CN")]),
            c(one, &[(1, "Psi"), (132, "D_CN"), (-108, "D_CG")]),
            c(one, &[(1, "Psi"), (68, "D_CG"), (-132, "D_RG")]),
            c(one, &[(1, "Psi"), (72, "D_RG"), (-136, "h")]),
        ],
        (ResidualKind::V, 4) => vec![c(one, &[(1, "Psi"), (32, "h"), (-6, "K")])],
        (ResidualKind::V, 5) => vec![c(two, &[(1, "F"), (6, "K"), (-4, "delta"), (-3, "Psi")])],
        (ResidualKind::V, 6) => vec![
            c(two, &[(1, "F"), (164, "delta"), (-288, "D_CN")]),
            c(two, &[(1, "F"), (204, "D_CN"), (-164, "D_CG")]),
            c(two, &[(1, "F"), (108, "D_CG"), (-204, "D_RG")]),
            c(two, &[(1, "F"), (120, "D_RG"), (-216, "h")]),
        ],
        (ResidualKind::V, 7) => vec![c(two, &[(1, "F"), (-10, "K"), (64, "h")])],
        (ResidualKind::V, 8) => vec![c(two, &[(1, "F"), (2, "K"), (-2, "Psi")])],
        (ResidualKind::V, 9) => vec![c(one, &[(1, "L"), (16, "K"), (-16, "delta"), (-8, "F")])],
        (ResidualKind::V, 10) => vec![
            c(one, &[(1, "L"), (880, "delta"), (-1536, "D_CN")]),
            c(one, &[(1, "L"), (1104, "D_CN"), (-880, "D_CG")]),
            c(one, &[(1, "L"), (592, "D_CG"), (-1104, "D_RG")]),
            c(one, &[(1, "L"), (6724, "D_RG"), (-1184, "h")]),
        ],
        (ResidualKind::V, 11) => vec![c(one, &[(1, "L"), (384, "h"), (-56, "K")])],
        (ResidualKind::V, 12) => vec![c(one, &[(1, "L"), (12, "Psi"), (-8, "K"), (-12, "F")])],
        (ResidualKind::V, 13) => vec![c(one, &[(1, "L"), (16, "K"), (-12, "Psi")])],
        (ResidualKind::V, 14) => vec![c(one, &[(1, "L"), (4, "Psi"), (-8, "F")])],
        (ResidualKind::U, 1) => vec![c(one, &[(1, "Psi"), (192, "D_CN"), (-100, "delta"), (-8, "K")])],
        (ResidualKind::U, 2) => vec![c(two, &[(1, "F"), (14, "K"), (-64, "h"), (-4, "Psi")])],
        (ResidualKind::U, 3) => vec![c(one, &[(4, "F"), (576, "D_CN"), (-316, "delta"), (-9, "Psi")])],
        (ResidualKind::U, 4) => vec![c(one, &[(9, "L"), (4608, "D_CN"), (-2576, "delta"), (-64, "F")])],
        (ResidualKind::U, 5) => {
            vec![c((1, 7), &[(7, "L"), (6144, "h"), (13824, "D_CN"), (-896, "K"), (-7920, "delta")])]
        }
        (ResidualKind::U, 6) => vec![c((2, 5), &[(5, "F"), (576, "h"), (1152, "D_CN"), (-90, "K"), (-656, "delta")])],
        (ResidualKind::U, 7) => {
            vec![c(one, &[(1, "L"), (384, "h"), (36, "Psi"), (-92, "K"), (-18, "F")])]
        }
        (ResidualKind::U, 8) => vec![c(one, &[(1, "L"), (160, "K"), (-36, "Psi"), (-768, "h")])],
        (ResidualKind::U, 9) => vec![c(one, &[(1, "L"), (12, "Psi"), (-8, "K"), (-12, "F")])],
        (ResidualKind::U, 10) => {
            vec![c(two, &[(1, "F"), (22, "K"), (4, "delta"), (-5, "Psi"), (-128, "h")])]
        }
        (ResidualKind::U, 11) => {
            vec![c(one, &[(1, "L"), (16, "delta"), (24, "Psi"), (-16, "F"), (-32, "K")])]
        }
        (ResidualKind::U, 12) => vec![c(
            (1, 7),
            &[(77, "L"), (-9856, "K"), (67584, "h"), (-73728, "D_CN"), (36752, "delta"), (-1568, "F"), (3528, "Psi")],
        )],
        (ResidualKind::U, 13) => {
            vec![c(one, &[(1, "L"), (44, "Psi"), (-120, "K"), (512, "h"), (-20, "F")])]
        }
        (ResidualKind::U, 14) => {
            vec![c((1, 7), &[(7, "L"), (-392, "Psi"), (2240, "K"), (-11776, "h"), (-7680, "D_CN"), (4400, "delta")])]
        }
        (ResidualKind::U, 15) => vec![c(
            (1, 7),
            &[(7, "L"), (448, "delta"), (-1456, "K"), (9728, "h"), (-7680, "D_CN"), (3728, "delta"), (-168, "F")],
        )],
        _ => Vec::new(),
    }
}

fn residual_id(kind: ResidualKind, t: u8) -> MeasureId {
    match kind {
        ResidualKind::V => MeasureId::V(t),
        ResidualKind::U => MeasureId::U(t),
    }
}

/// Result of comparing one combination line with the closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    pub combination: f64,
    pub closed_form: f64,
    /// Relative residual scaled by the largest term of the combination.
    pub residual: f64,
}

/// Evaluate combination line `line` (0-based) published for a residual
/// measure and compare it with the closed form.
pub fn equivalent_expression(kind: ResidualKind, t: u8, line: usize, pair: PositivePair) -> Result<Equivalence> {
    let id = residual_id(kind, t).validate()?;
    let lines = combinations_as_printed(kind, t);
    let combo = lines
        .get(line)
        .ok_or_else(|| Error::Range(format!("{id} has {} combination line(s), got index {line}", lines.len())))?;
    let (combination, scale) = combo.eval(pair);
    let closed_form = id.eval(pair);
    Ok(Equivalence { combination, closed_form, residual: rel_residual(combination, closed_form, scale) })
}

/// Ratios at which combinations are fitted: 24 log-spaced points on
/// `[1/20, 20]`, away from the diagonal where all terms vanish together.
pub fn fit_ratios() -> Vec<f64> {
    let n = 24;
    let (lo, hi) = (0.05f64.ln(), 20f64.ln());
    (0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()).filter(|x| (x - 1.0).abs() > 1e-2).collect()
}

/// A least-squares fit `target ≈ Σ βⱼ·basisⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub coefficients: Vec<f64>,
    /// Rational reconstruction of each coefficient (denominator ≤ 1000).
    pub rationals: Vec<Option<Rational>>,
    /// Largest relative misfit over the fit ratios.
    pub misfit: f64,
    /// Numerical rank of the weighted design matrix.
    pub rank: usize,
}

/// Fit `target(x) ≈ Σ βⱼ·f_j(x)` over generator values at [`fit_ratios`],
/// each row weighted by its largest entry, solved by SVD.
pub fn fit_combination<F: Fn(f64) -> f64>(target: F, basis: &[MeasureId]) -> Fit {
    let xs = fit_ratios();
    let n = basis.len();
    let mut a = DMatrix::<f64>::zeros(xs.len(), n);
    let mut y = DVector::<f64>::zeros(xs.len());
    let mut weights = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let row: Vec<f64> = basis.iter().map(|m| m.generator_at(x)).collect();
        let t = target(x);
        let w = row.iter().fold(t.abs(), |acc, v| acc.max(v.abs())).max(1e-300);
        weights.push(w);
        for (j, v) in row.iter().enumerate() {
            a[(i, j)] = v / w;
        }
        y[i] = t / w;
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let rank = svd.singular_values.iter().filter(|&&s| s > smax * 1e-11).count();
    let beta = svd.solve(&y, smax * 1e-11).unwrap_or_else(|_| DVector::zeros(n));
    let fitted = &a * &beta;
    let misfit = (0..xs.len()).map(|i| (fitted[i] - y[i]).abs()).fold(0.0, f64::max);
    let coefficients: Vec<f64> = beta.iter().cloned().collect();
    let rationals = coefficients.iter().map(|&c| recover_rational(c, 1000, 1e-8)).collect();
    Fit { coefficients, rationals, misfit, rank }
}

/// Best rational approximation with denominator ≤ `max_den`, accepted when
/// within `rel_tol` of `v`.
pub fn recover_rational(v: f64, max_den: i64, rel_tol: f64) -> Option<Rational> {
    if !v.is_finite() {
        return None;
    }
    // Continued-fraction convergents.
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = v;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - v).abs() <= rel_tol * v.abs().max(1.0) {
            return Some(q(h1, k1));
        }
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// The kind of edit that repairs a combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum RepairKind {
    Prefactor,
    Coefficient { term: usize },
    Measure { term: usize },
}

/// A minimal correction of a published combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Repair {
    pub kind: RepairKind,
    pub corrected: Combination,
}

/// Base measures and mean differences, the default candidates when a single
/// term may carry the wrong measure name.
pub fn repair_candidates() -> Vec<MeasureId> {
    ["delta", "h", "K", "Psi", "F", "L", "D_CN", "D_CG", "D_RG"]
        .iter()
        .map(|n| n.parse().expect("static names are valid"))
        .collect()
}

fn exact_at_fit_ratios<F: Fn(f64) -> f64>(target: &F, combo: &Combination) -> bool {
    fit_ratios().iter().all(|&x| {
        let (v, scale) = combo.eval_with(|m| m.generator_at(x));
        rel_residual(target(x), v, scale) < 1e-11
    })
}

/// Find the smallest edit that makes `printed` reproduce `target` exactly:
/// first a corrected prefactor, then a single corrected coefficient, then a
/// single replaced measure. Each candidate coefficient is fitted by least
/// squares and must be a small rational.
pub fn repair_combination<F: Fn(f64) -> f64>(
    target: F,
    printed: &Combination,
    candidates: &[MeasureId],
) -> Option<Repair> {
    if exact_at_fit_ratios(&target, printed) {
        return None;
    }
    // Prefactor.
    let unit = Combination { prefactor: q(1, 1), terms: printed.terms.clone() };
    let fit = fit_with(&target, |x| unit.eval_with(|m| m.generator_at(x)));
    if let Some(p) = fit {
        let corrected = Combination { prefactor: p, terms: printed.terms.clone() };
        if exact_at_fit_ratios(&target, &corrected) {
            return Some(Repair { kind: RepairKind::Prefactor, corrected });
        }
    }
    let pf = to_f64(printed.prefactor);
    // One coefficient.
    for i in 0..printed.terms.len() {
        let m = printed.terms[i].1;
        let rest = |x: f64| {
            printed
                .terms
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &(c, mm))| pf * c as f64 * mm.generator_at(x))
                .sum::<f64>()
        };
        let scale = |x: f64| printed.eval_with(|mm| mm.generator_at(x)).1;
        if let Some(c) = fit_with(&|x| target(x) - rest(x), |x| (pf * m.generator_at(x), scale(x))) {
            if *c.denom() == 1 {
                let mut corrected = printed.clone();
                corrected.terms[i].0 = *c.numer();
                if exact_at_fit_ratios(&target, &corrected) {
                    return Some(Repair { kind: RepairKind::Coefficient { term: i }, corrected });
                }
            }
        }
    }
    // One measure.
    for i in 0..printed.terms.len() {
        for &cand in candidates {
            if cand == printed.terms[i].1 {
                continue;
            }
            let mut corrected = printed.clone();
            corrected.terms[i].1 = cand;
            if exact_at_fit_ratios(&target, &corrected) {
                return Some(Repair { kind: RepairKind::Measure { term: i }, corrected });
            }
        }
    }
    None
}

/// One-dimensional weighted least squares `target ≈ λ·g`, returned as a
/// rational when it reconstructs cleanly. `g` returns its value and the
/// largest term it was summed from; rows are weighted by that magnitude so
/// that points where the terms cancel heavily carry little weight.
fn fit_with<F: Fn(f64) -> f64, G: Fn(f64) -> (f64, f64)>(target: &F, g: G) -> Option<Rational> {
    let (mut num, mut den) = (0.0, 0.0);
    for x in fit_ratios() {
        let (t, (v, scale)) = (target(x), g(x));
        let w = t.abs().max(v.abs()).max(scale).max(1e-300);
        num += t * v / (w * w);
        den += v * v / (w * w);
    }
    if den == 0.0 {
        return None;
    }
    recover_rational(num / den, 1000, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_line_by_hand() {
        let e = equivalent_expression(ResidualKind::V, 1, 0, PositivePair::new(4.0, 1.0).unwrap()).unwrap();
        assert!((e.combination - 0.1).abs() < 1e-13);
        assert!(e.residual < 1e-14);
    }

    #[test]
    fn every_line_but_two_matches() {
        let pair = PositivePair::new(3.0, 0.7).unwrap();
        let mut bad = Vec::new();
        for (kind, n) in [(ResidualKind::V, 14u8), (ResidualKind::U, 15u8)] {
            for t in 1..=n {
                for (i, _) in combinations_as_printed(kind, t).iter().enumerate() {
                    if equivalent_expression(kind, t, i, pair).unwrap().residual > 1e-12 {
                        bad.push((kind, t, i));
                    }
                }
            }
        }
        assert_eq!(bad, vec![(ResidualKind::V, 10, 3), (ResidualKind::U, 15, 0)]);
    }

    #[test]
    fn fit_recovers_full_rank_line() {
        let basis: Vec<MeasureId> = ["L", "D_RG", "h"].iter().map(|n| n.parse().unwrap()).collect();
        let fit = fit_combination(|x| MeasureId::V(10).generator_at(x), &basis);
        assert_eq!(fit.rank, 3);
        assert_eq!(fit.rationals, vec![Some(q(1, 1)), Some(q(672, 1)), Some(q(-1184, 1))]);
        assert!(fit.misfit < 1e-12);
    }

    #[test]
    fn repairs_the_two_bad_lines() {
        let v10 = &combinations_as_printed(ResidualKind::V, 10)[3];
        let r = repair_combination(|x| MeasureId::V(10).generator_at(x), v10, &repair_candidates()).unwrap();
        assert_eq!(r.kind, RepairKind::Coefficient { term: 1 });
        assert_eq!(r.corrected.terms[1].0, 672);

        let u15 = &combinations_as_printed(ResidualKind::U, 15)[0];
        let r = repair_combination(|x| MeasureId::U(15).generator_at(x), u15, &repair_candidates()).unwrap();
        assert_eq!(r.kind, RepairKind::Measure { term: 1 });
        assert_eq!(r.corrected.terms[1].1, "Psi".parse().unwrap());

        let ok = &combinations_as_printed(ResidualKind::V, 2)[0];
        assert!(repair_combination(|x| MeasureId::V(2).generator_at(x), ok, &repair_candidates()).is_none());
    }

    #[test]
    fn rational_recovery() {
        assert_eq!(recover_rational(0.25, 1000, 1e-12), Some(q(1, 4)));
        assert_eq!(recover_rational(-1184.0, 1000, 1e-12), Some(q(-1184, 1)));
        assert_eq!(recover_rational(1.0 / 81.0, 1000, 1e-12), Some(q(1, 81)));
        assert_eq!(recover_rational(std::f64::consts::PI, 100, 1e-12), None);
    }
}
