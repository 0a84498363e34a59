//! Step-by-step certificates of the refined chains.
//!
//! Every step `small ≤ β·big` of a chain is certified twice:
//!
//! * by the sharp constant `β = lim_{x→1} f″_small(x)/f″_big(x)`, which is
//!   also the supremum of that ratio (see [`crate::analysis::estimate_sup_ratio`]);
//! * by an exact decomposition `β·big − small = c·R` with `R` a nonnegative
//!   residual measure, which makes the inequality evident.
//!
//! The four tables cover the 27 steps over the pyramid differences, the 14
//! steps over the `V` residuals, the 8 steps over the eighth-order `U`
//! residuals and the 4 steps over the tenth-order ones.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::chains::{q, to_f64, Rational};
use crate::error::{Error, Result};
use crate::num::{rel_residual, PositivePair};
use crate::registry::MeasureId;

/// A table of proof steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PartTable {
    /// Steps over the pyramid differences; residuals `V₁…V₁₄`.
    WStep,
    /// Steps over `V₁…V₁₄`; residuals `U₁…U₁₁`.
    VStep,
    /// Steps over the eighth-order `U` residuals; residuals `U₁₀…U₁₄`.
    UStep,
    /// Steps over the tenth-order `U` residuals; residual `U₁₅`.
    UTailStep,
}

impl PartTable {
    pub const ALL: [PartTable; 4] = [PartTable::WStep, PartTable::VStep, PartTable::UStep, PartTable::UTailStep];

    /// Short name used in check ids (`w-step.1`, `v-step.3`, …).
    pub fn name(self) -> &'static str {
        match self {
            PartTable::WStep => "w-step",
            PartTable::VStep => "v-step",
            PartTable::UStep => "u-step",
            PartTable::UTailStep => "u-tail-step",
        }
    }

    /// Number of parts in the table.
    pub fn part_count(self) -> u8 {
        match self {
            PartTable::WStep => 27,
            PartTable::VStep => 14,
            PartTable::UStep => 8,
            PartTable::UTailStep => 4,
        }
    }
}

impl fmt::Display for PartTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PartTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartTable::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown part table {s:?}")))
    }
}

/// One certified step `small ≤ β·big` with `β·big − small = c·residual`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProofPart {
    pub table: PartTable,
    pub index: u8,
    pub small: MeasureId,
    pub big: MeasureId,
    pub beta: Rational,
    /// Coefficient of the residual under the normalizations of this crate.
    pub c: Rational,
    /// Coefficient as originally published (differs from `c` only where the
    /// publication is in error).
    pub printed_c: Rational,
    pub residual: MeasureId,
}

impl ProofPart {
    /// Check id, e.g. `w-step.17`.
    pub fn id(&self) -> String {
        format!("{}.{}", self.table.name(), self.index)
    }

    /// Human-readable statement of the decomposition.
    pub fn statement(&self) -> String {
        format!("{}·{} − {} = {}·{}", self.beta, self.big, self.small, self.c, self.residual)
    }
}

// (small, big, β, c, printed c, residual index) per table.
type Row = (u8, u8, (i64, i64), (i64, i64), (i64, i64), u8);

const W_ROWS: [Row; 27] = [
    (1, 15, (1, 14), (1, 14), (1, 14), 1),
    (15, 14, (14, 13), (1, 13), (1, 13), 1),
    (14, 13, (39, 35), (4, 35), (4, 35), 1),
    (13, 12, (25, 21), (4, 21), (4, 21), 1),
    (12, 11, (7, 5), (2, 5), (2, 5), 1),
    (11, 21, (1, 4), (1, 8), (1, 8), 2),
    (21, 20, (28, 27), (1, 54), (1, 54), 3),
    (20, 19, (81, 77), (2, 77), (2, 77), 3),
    (19, 18, (55, 51), (2, 51), (2, 51), 3),
    (18, 17, (17, 15), (1, 15), (1, 15), 3),
    (17, 16, (3, 2), (1, 4), (1, 4), 4),
    (16, 28, (1, 3), (1, 12), (1, 12), 5),
    (28, 27, (42, 41), (1, 164), (1, 164), 6),
    (27, 26, (123, 119), (1, 119), (1, 119), 6),
    (26, 25, (85, 81), (1, 81), (1, 81), 6),
    (25, 24, (27, 25), (1, 50), (1, 50), 6),
    (24, 23, (5, 4), (1, 16), (1, 4), 7),
    (23, 22, (2, 1), (1, 4), (1, 4), 8),
    (23, 36, (1, 2), (1, 16), (1, 16), 9),
    (36, 35, (56, 55), (1, 440), (1, 440), 10),
    (35, 34, (165, 161), (1, 322), (1, 322), 10),
    (34, 33, (115, 111), (1, 222), (1, 222), 10),
    (33, 32, (37, 35), (1, 140), (1, 140), 10),
    (32, 31, (7, 6), (1, 48), (1, 48), 11),
    (22, 31, (1, 3), (1, 24), (1, 24), 12),
    (31, 30, (3, 2), (1, 16), (1, 16), 13),
    (30, 29, (2, 1), (1, 8), (1, 8), 14),
];

const V_ROWS: [Row; 14] = [
    (1, 3, (1, 8), (1, 8), (1, 8), 1),
    (3, 4, (4, 1), (3, 1), (3, 1), 1),
    (4, 7, (1, 8), (1, 8), (1, 8), 2),
    (3, 6, (2, 9), (1, 9), (1, 9), 3),
    (6, 10, (9, 32), (1, 32), (1, 32), 4),
    (10, 11, (16, 9), (7, 9), (7, 9), 5),
    (6, 7, (9, 4), (5, 4), (5, 4), 6),
    (7, 8, (2, 1), (1, 1), (1, 1), 2),
    (8, 11, (1, 9), (1, 9), (1, 9), 7),
    (11, 13, (3, 2), (1, 2), (1, 2), 8),
    (13, 14, (3, 1), (2, 1), (2, 1), 9),
    (2, 5, (1, 4), (1, 4), (1, 4), 10),
    (5, 9, (1, 4), (1, 4), (1, 4), 11),
    (9, 12, (2, 1), (1, 1), (1, 1), 11),
];

const U_ROWS: [Row; 8] = [
    (1, 6, (1, 10), (1, 10), (1, 10), 10),
    (6, 3, (10, 11), (9, 11), (9, 11), 10),
    (3, 5, (11, 56), (1, 56), (1, 56), 12),
    (3, 2, (11, 2), (7, 2), (7, 2), 10),
    (2, 8, (1, 10), (1, 10), (1, 10), 13),
    (5, 8, (14, 5), (9, 5), (9, 5), 14),
    (8, 9, (5, 2), (3, 2), (3, 2), 13),
    (9, 7, (4, 1), (3, 1), (3, 1), 13),
];

const U_TAIL_ROWS: [Row; 4] = [
    (10, 14, (1, 12), (1, 12), (1, 12), 15),
    (14, 11, (3, 1), (2, 1), (2, 1), 15),
    (11, 13, (2, 1), (1, 1), (1, 1), 15),
    (13, 12, (1, 10), (1, 10), (1, 10), 15),
];

fn rows(table: PartTable) -> &'static [Row] {
    match table {
        PartTable::WStep => &W_ROWS,
        PartTable::VStep => &V_ROWS,
        PartTable::UStep => &U_ROWS,
        PartTable::UTailStep => &U_TAIL_ROWS,
    }
}

fn build(table: PartTable, index: u8, r: &Row) -> ProofPart {
    let (small, big, residual) = match table {
        PartTable::WStep => (MeasureId::D(r.0), MeasureId::D(r.1), MeasureId::V(r.5)),
        PartTable::VStep => (MeasureId::V(r.0), MeasureId::V(r.1), MeasureId::U(r.5)),
        PartTable::UStep | PartTable::UTailStep => (MeasureId::U(r.0), MeasureId::U(r.1), MeasureId::U(r.5)),
    };
    ProofPart {
        table,
        index,
        small,
        big,
        beta: q(r.2 .0, r.2 .1),
        c: q(r.3 .0, r.3 .1),
        printed_c: q(r.4 .0, r.4 .1),
        residual,
    }
}

/// Part `index` (1-based) of `table`.
pub fn part(table: PartTable, index: u8) -> Result<ProofPart> {
    let r = rows(table)
        .get(usize::from(index).wrapping_sub(1))
        .ok_or_else(|| Error::Range(format!("{table} has parts 1..={}, got {index}", table.part_count())))?;
    Ok(build(table, index, r))
}

/// All parts of a table, in order.
pub fn parts(table: PartTable) -> Vec<ProofPart> {
    rows(table).iter().enumerate().map(|(i, r)| build(table, i as u8 + 1, r)).collect()
}

/// All 53 parts of all tables.
pub fn all_parts() -> Vec<ProofPart> {
    PartTable::ALL.into_iter().flat_map(parts).collect()
}

/// The sharp constant `β` of a part, as an exact rational.
pub fn beta_constant(table: PartTable, index: u8) -> Result<Rational> {
    Ok(part(table, index)?.beta)
}

/// Outcome of [`residual_decompositions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub id: String,
    /// `β·big − small`.
    pub lhs: f64,
    /// `c·residual`.
    pub rhs: f64,
    /// Relative residual of the identity with the correct coefficient.
    pub residual: f64,
    /// Relative residual with the published coefficient.
    pub printed_residual: f64,
    pub pass: bool,
}

/// Check `β·big − small = c·R` for one part at one pair. The residual is
/// measured relative to `β·big`, the largest term before cancellation.
pub fn residual_decompositions(table: PartTable, index: u8, pair: PositivePair, tol: f64) -> Result<Decomposition> {
    let p = part(table, index)?;
    Ok(decompose(&p, pair, tol))
}

/// [`residual_decompositions`] for an already resolved part.
pub fn decompose(p: &ProofPart, pair: PositivePair, tol: f64) -> Decomposition {
    let big = to_f64(p.beta) * p.big.eval(pair);
    let small = p.small.eval(pair);
    let res = p.residual.eval(pair);
    let lhs = big - small;
    let rhs = to_f64(p.c) * res;
    let scale = big.abs().max(small.abs());
    let residual = rel_residual(lhs, rhs, scale);
    let printed_residual = rel_residual(lhs, to_f64(p.printed_c) * res, scale);
    Decomposition { id: p.id(), lhs, rhs, residual, printed_residual, pass: residual <= tol }
}

/// A linear combination `prefactor·Σ cᵢ·W_{jᵢ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WCombination {
    pub prefactor: Rational,
    pub terms: Vec<(i64, u8)>,
}

impl WCombination {
    fn new(prefactor: Rational, terms: &[(i64, u8)]) -> Self {
        WCombination { prefactor, terms: terms.to_vec() }
    }

    /// The same combination over registry measures.
    pub fn to_combination(&self) -> super::equivalent::Combination {
        super::equivalent::Combination {
            prefactor: self.prefactor,
            terms: self.terms.iter().map(|&(c, j)| (c, MeasureId::W(j))).collect(),
        }
    }

    /// Value at a pair and the largest absolute term (for residual scaling).
    pub fn eval(&self, pair: PositivePair) -> (f64, f64) {
        let pf = to_f64(self.prefactor);
        let mut sum = 0.0;
        let mut scale: f64 = 0.0;
        for &(c, j) in &self.terms {
            let v = pf * c as f64 * MeasureId::W(j).eval(pair);
            sum += v;
            scale = scale.max(v.abs());
        }
        (sum, scale)
    }
}

impl fmt::Display for WCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        for (i, &(c, j)) in self.terms.iter().enumerate() {
            let sign = if c < 0 {
                " − "
            } else if i == 0 {
                ""
            } else {
                " + "
            };
            let mag = c.unsigned_abs();
            let coef = if mag == 1 { String::new() } else { mag.to_string() };
            body.push_str(&format!("{sign}{coef}W{j}"));
        }
        if self.prefactor == q(1, 1) {
            f.write_str(&body)
        } else {
            write!(f, "({})({body})", self.prefactor)
        }
    }
}

/// The intermediate `W`-combination written for each step of the pyramid
/// table, exactly as published (with `K` indices read as `W`).
pub fn w_combination_as_printed(index: u8) -> Option<WCombination> {
    let c = WCombination::new;
    Some(match index {
        1 => c(q(1, 14), &[(1, 6), (13, 1), (-14, 2)]),
        2 => c(q(1, 13), &[(1, 6), (13, 1), (-14, 2)]),
        // W₂ printed where W₃ belongs.
        3 => c(q(1, 35), &[(4, 6), (35, 2), (-39, 2)]),
        4 => c(q(1, 21), &[(4, 6), (21, 3), (-25, 4)]),
        5 => c(q(1, 5), &[(2, 6), (5, 4), (-7, 5)]),
        6 => c(q(1, 4), &[(1, 7), (4, 5), (-1, 1), (-4, 6)]),
        7 => c(q(1, 27), &[(1, 7), (27, 1), (-28, 2)]),
        8 => c(q(1, 77), &[(4, 7), (77, 2), (-81, 3)]),
        9 => c(q(1, 51), &[(4, 7), (51, 3), (-55, 4)]),
        10 => c(q(1, 15), &[(2, 7), (15, 4), (-17, 5)]),
        11 => c(q(1, 2), &[(1, 7), (2, 5), (-3, 6)]),
        12 => c(q(1, 3), &[(1, 8), (3, 6), (-1, 1), (-3, 7)]),
        13 => c(q(1, 41), &[(1, 8), (41, 1), (-42, 2)]),
        14 => c(q(1, 119), &[(4, 8), (119, 2), (-123, 3)]),
        // Prefactor 1/81 missing.
        15 => c(q(1, 1), &[(4, 8), (81, 3), (-85, 4)]),
        // Prefactor printed as 1/50.
        16 => c(q(1, 50), &[(2, 8), (25, 4), (-27, 5)]),
        17 => c(q(1, 4), &[(1, 8), (4, 5), (-5, 6)]),
        18 => c(q(1, 1), &[(1, 8), (1, 6), (-2, 7)]),
        19 => c(q(1, 2), &[(1, 9), (2, 6), (-1, 1), (-2, 8)]),
        20 => c(q(1, 55), &[(1, 9), (55, 1), (-56, 2)]),
        21 => c(q(1, 161), &[(4, 9), (161, 2), (-165, 3)]),
        22 => c(q(1, 111), &[(4, 9), (111, 3), (-115, 4)]),
        23 => c(q(1, 35), &[(2, 9), (35, 4), (-37, 5)]),
        24 => c(q(1, 6), &[(1, 9), (6, 5), (-7, 6)]),
        // Prefactor printed as 1/6.
        25 => c(q(1, 6), &[(1, 9), (3, 7), (-1, 6), (-3, 8)]),
        26 => c(q(1, 2), &[(1, 9), (2, 6), (-3, 7)]),
        27 => c(q(1, 1), &[(1, 9), (1, 7), (-2, 8)]),
        _ => return None,
    })
}

/// The corrected `W`-combination equal to `β·big − small` for each step of
/// the pyramid table.
pub fn w_combination(index: u8) -> Option<WCombination> {
    let mut c = w_combination_as_printed(index)?;
    match index {
        3 => c.terms = vec![(4, 6), (35, 2), (-39, 3)],
        15 => c.prefactor = q(1, 81),
        16 => c.prefactor = q(1, 25),
        25 => c.prefactor = q(1, 3),
        _ => {}
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> PositivePair {
        PositivePair::new(4.0, 1.0).unwrap()
    }

    #[test]
    fn table_sizes_and_ids() {
        assert_eq!(all_parts().len(), 27 + 14 + 8 + 4);
        for t in PartTable::ALL {
            assert_eq!(parts(t).len(), usize::from(t.part_count()));
            assert_eq!(t.name().parse::<PartTable>().unwrap(), t);
        }
        assert!(part(PartTable::WStep, 0).is_err());
        assert!(part(PartTable::UTailStep, 5).is_err());
        assert_eq!(part(PartTable::WStep, 17).unwrap().id(), "w-step.17");
    }

    #[test]
    fn published_constants() {
        assert_eq!(beta_constant(PartTable::WStep, 1).unwrap(), q(1, 14));
        assert_eq!(beta_constant(PartTable::WStep, 18).unwrap(), q(2, 1));
        assert_eq!(beta_constant(PartTable::UTailStep, 4).unwrap(), q(1, 10));
    }

    #[test]
    fn first_step_by_hand() {
        // (1/14)(W6 − W1) − (W2 − W1) = (1/14)·0.9 − 4/70 = (1/14)·V1(4,1)
        let d = residual_decompositions(PartTable::WStep, 1, pair(), 1e-14).unwrap();
        assert!((d.lhs - 0.1 / 14.0).abs() < 1e-16);
        assert!(d.pass);
    }

    #[test]
    fn every_decomposition_holds() {
        for &(a, b) in &[(4.0, 1.0), (0.3, 7.0), (1.0 + 1e-4, 1.0), (1e-5, 3e4)] {
            let pr = PositivePair::new(a, b).unwrap();
            for p in all_parts() {
                let d = decompose(&p, pr, 1e-12);
                assert!(d.pass, "{} at ({a}, {b}): {}", p.id(), d.residual);
            }
        }
    }

    #[test]
    fn printed_coefficient_error_is_detected() {
        let d = residual_decompositions(PartTable::WStep, 17, pair(), 1e-12).unwrap();
        assert!(d.pass);
        assert!(d.printed_residual > 0.1);
    }

    #[test]
    fn w_combinations_match_steps() {
        for p in parts(PartTable::WStep) {
            let pr = PositivePair::new(3.0, 0.5).unwrap();
            let lhs = to_f64(p.beta) * p.big.eval(pr) - p.small.eval(pr);
            let (v, scale) = w_combination(p.index).unwrap().eval(pr);
            assert!(rel_residual(lhs, v, scale) < 1e-13, "part {}", p.index);
            let (pv, ps) = w_combination_as_printed(p.index).unwrap().eval(pr);
            let bad = [3, 15, 16, 25].contains(&p.index);
            assert_eq!(rel_residual(lhs, pv, ps) > 1e-6, bad, "part {}", p.index);
        }
    }

    #[test]
    fn combination_display() {
        assert_eq!(w_combination(1).unwrap().to_string(), "(1/14)(W6 + 13W1 − 14W2)");
        assert_eq!(w_combination(18).unwrap().to_string(), "W8 + W6 − 2W7");
    }
}
