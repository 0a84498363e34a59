//! A single identifier type naming every measure in the catalog, with
//! parsing, display, evaluation and analytic second derivatives.
//!
//! Name syntax (used by the CLI and chain configuration files):
//!
//! | Measure | Names |
//! |---------|-------|
//! | Means | `H`, `G`, `N`, `A`, `R`, `S`, `C` |
//! | Mean differences | `D_CN`, `D_GH`, … (upper mean first) |
//! | Base measures | `delta`, `h`, `K`, `Psi`, `F`, `L` |
//! | `L_t` family | `L(-1)`, `L(3)`, … |
//! | W scale | `W1` … `W9` |
//! | Pyramid differences | `D1` … `D36` |
//! | Residual measures | `V1` … `V14`, `U1` … `U15` |
//! | Generating families | `Delta1(t)`, `Delta2(t)`, `K1(t)`, `K2(t)`, `Hgen(t)`, `Mnew(t)` |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cascade::{self, ResidualKind};
use crate::discriminations::{self, BaseMeasureId, LT_MAX, LT_MIN};
use crate::error::{Error, Result};
use crate::generators::{self, FamilyId, T_MAX};
use crate::means::{self, MeanKind};
use crate::num::{su_jet, su_of_ratio, PositivePair, Scalar};

/// Identifier of any measure in the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasureId {
    Mean(MeanKind),
    MeanDiff(MeanKind, MeanKind),
    Base(BaseMeasureId),
    Lt(i32),
    W(u8),
    D(u8),
    V(u8),
    U(u8),
    Family(FamilyId, u32),
}

impl MeasureId {
    /// Validate index ranges and orderings.
    pub fn validate(self) -> Result<Self> {
        let ok = match self {
            MeasureId::Mean(_) | MeasureId::Base(_) => true,
            MeasureId::MeanDiff(u, l) => u > l,
            MeasureId::Lt(t) => (LT_MIN..=LT_MAX).contains(&t),
            MeasureId::W(i) => (1..=9).contains(&i),
            MeasureId::D(k) => (1..=cascade::PYRAMID_LEN).contains(&k),
            MeasureId::V(t) => (1..=14).contains(&t),
            MeasureId::U(t) => (1..=15).contains(&t),
            MeasureId::Family(_, t) => t <= T_MAX,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::UnknownMeasure(self.to_string()))
        }
    }

    /// Generator `f` with `M(a,b) = b·f(a/b)`, in `(s, u)` coordinates.
    pub fn generator<T: Scalar>(self, s: T, u: T) -> T {
        match self {
            MeasureId::Mean(k) => means::generator_s(k, s),
            MeasureId::MeanDiff(up, lo) => means::difference_generator(up, lo, s, u),
            MeasureId::Base(b) => discriminations::base_generator(b, s, u),
            MeasureId::Lt(t) => discriminations::lt_generator(t, s, u),
            MeasureId::W(i) => cascade::w_generator(i, s, u),
            MeasureId::D(k) => cascade::pyramid_generator(k, s, u),
            MeasureId::V(t) => cascade::v_generator(t, s, u),
            MeasureId::U(t) => cascade::u_generator(t, s, u),
            MeasureId::Family(f, t) => generators::family_generator(f, t, s, u),
        }
    }

    /// `M(a, b)`. The identifier must be valid (see [`MeasureId::validate`]).
    pub fn eval(self, pair: PositivePair) -> f64 {
        match self {
            // Means are evaluated from their direct two-argument formulas.
            MeasureId::Mean(k) => means::mean(k, pair),
            _ => {
                let (s, u) = pair.su();
                pair.b * self.generator(s, u)
            }
        }
    }

    /// `f(x)` at a ratio `x > 0`.
    pub fn generator_at(self, x: f64) -> f64 {
        let (s, u) = su_of_ratio(x);
        self.generator(s, u)
    }

    /// Analytic `f″(x)` by forward-mode differentiation of the generator.
    pub fn second_derivative(self, x: f64) -> f64 {
        let (s, u) = su_jet(x);
        self.generator(s, u).dd
    }

    /// `(f(x), f′(x), f″(x))`.
    pub fn jet(self, x: f64) -> (f64, f64, f64) {
        let (s, u) = su_jet(x);
        let j = self.generator(s, u);
        (j.v, j.d, j.dd)
    }

    /// Whether the generator vanishes at `x = 1` (true for every divergence,
    /// false for the means themselves).
    pub fn is_divergence(self) -> bool {
        !matches!(self, MeasureId::Mean(_))
    }

    /// One-line description used by the listing: definition and normalization.
    pub fn describe(self) -> String {
        match self {
            MeasureId::Mean(k) => format!("{} mean, generator {}", mean_name(k), mean_formula(k)),
            MeasureId::MeanDiff(u, l) => format!("{} − {}, nonnegative mean difference", u.symbol(), l.symbol()),
            MeasureId::Base(b) => base_description(b).to_string(),
            MeasureId::Lt(t) => format!("(a−b)²(a+b)^t/(2^t (ab)^((t+1)/2)) at t = {t}"),
            MeasureId::W(i) => w_description(i).to_string(),
            MeasureId::D(k) => {
                let (up, lo) = cascade::pyramid_index(k).expect("validated");
                format!("W{up} − W{lo}")
            }
            MeasureId::V(t) => format!("residual V{t}{}", residual_note(ResidualKind::V, t)),
            MeasureId::U(t) => format!("residual U{t}{}", residual_note(ResidualKind::U, t)),
            MeasureId::Family(f, t) => format!("member t = {t} of the {} generating family", f.name()),
        }
    }

    /// Every measure with a fixed index, in listing order (families and `L_t`
    /// are listed for `t = 0..=4` and `t = −1..=3` respectively).
    pub fn catalog() -> Vec<MeasureId> {
        let mut out = Vec::new();
        out.extend(MeanKind::ALL.map(MeasureId::Mean));
        out.extend(means::all_difference_pairs().into_iter().map(|(u, l)| MeasureId::MeanDiff(u, l)));
        out.extend(BaseMeasureId::ALL.map(MeasureId::Base));
        out.extend((-1..=3).map(MeasureId::Lt));
        out.extend((1..=9).map(MeasureId::W));
        out.extend((1..=cascade::PYRAMID_LEN).map(MeasureId::D));
        out.extend((1..=14).map(MeasureId::V));
        out.extend((1..=15).map(MeasureId::U));
        for f in FamilyId::ALL {
            out.extend((0..=4).map(|t| MeasureId::Family(f, t)));
        }
        out
    }
}

fn mean_name(k: MeanKind) -> &'static str {
    match k {
        MeanKind::Harmonic => "harmonic",
        MeanKind::Geometric => "geometric",
        MeanKind::Heronian => "Heronian",
        MeanKind::Arithmetic => "arithmetic",
        MeanKind::Centroidal => "centroidal",
        MeanKind::RootMeanSquare => "root-mean-square",
        MeanKind::ContraHarmonic => "contra-harmonic",
    }
}

fn mean_formula(k: MeanKind) -> &'static str {
    match k {
        MeanKind::Harmonic => "2x/(x+1)",
        MeanKind::Geometric => "√x",
        MeanKind::Heronian => "(x+√x+1)/3",
        MeanKind::Arithmetic => "(x+1)/2",
        MeanKind::Centroidal => "2(x²+x+1)/(3(x+1))",
        MeanKind::RootMeanSquare => "√((x²+1)/2)",
        MeanKind::ContraHarmonic => "(x²+1)/(x+1)",
    }
}

fn base_description(b: BaseMeasureId) -> &'static str {
    match b {
        BaseMeasureId::Triangular => "triangular discrimination (a−b)²/(a+b)",
        BaseMeasureId::Hellinger => "Hellinger discrimination ½(√a−√b)²",
        BaseMeasureId::JainSrivastava => "(a−b)²/√(ab)",
        BaseMeasureId::SymmetricChiSquare => "symmetric chi-square (a−b)²(a+b)/(ab)",
        BaseMeasureId::KumarJohnson => "(a²−b²)²/(2(ab)^(3/2))",
        BaseMeasureId::NewL => "(a−b)²(a+b)³/(ab)²",
    }
}

fn w_description(i: u8) -> &'static str {
    match i {
        1 => "W1 = 2·delta, position 1 of the W scale",
        2 => "W2 = (24/7)·D_CN, position 2 of the W scale",
        3 => "W3 = (8/3)·D_CG, position 3 of the W scale",
        4 => "W4 = (24/5)·D_RG, position 4 of the W scale",
        5 => "W5 = 8h, position 5 of the W scale",
        6 => "W6 = K, position 6 of the W scale",
        7 => "W7 = (1/2)Psi, position 7 of the W scale",
        8 => "W8 = (1/2)F, position 8 of the W scale, generator (x²−1)²/(4x^(3/2))",
        9 => "W9 = (1/8)L, position 9 of the W scale",
        _ => "invalid",
    }
}

fn residual_note(kind: ResidualKind, t: u8) -> &'static str {
    match (kind, t) {
        (ResidualKind::V, 9) => ", normalized as L + 16K − 16·delta − 8F",
        (ResidualKind::V, 14) => ", normalized as L + 4Psi − 8F",
        (ResidualKind::U, 1) => ", same expression as V2",
        (ResidualKind::U, 9) => ", same expression as V12",
        _ => "",
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MeasureId::Mean(k) => write!(f, "{}", k.symbol()),
            MeasureId::MeanDiff(u, l) => write!(f, "D_{}{}", u.symbol(), l.symbol()),
            MeasureId::Base(b) => write!(f, "{}", b.name()),
            MeasureId::Lt(t) => write!(f, "L({t})"),
            MeasureId::W(i) => write!(f, "W{i}"),
            MeasureId::D(k) => write!(f, "D{k}"),
            MeasureId::V(t) => write!(f, "V{t}"),
            MeasureId::U(t) => write!(f, "U{t}"),
            MeasureId::Family(fam, t) => write!(f, "{}({t})", fam.name()),
        }
    }
}

fn parse_paren(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    Some((&s[..open], inner))
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(raw: &str) -> Result<Self> {
        let s = raw.trim();
        let unknown = || Error::UnknownMeasure(raw.to_string());
        let id = if let Some((head, inner)) = parse_paren(s) {
            if head == "L" {
                MeasureId::Lt(inner.trim().parse().map_err(|_| unknown())?)
            } else {
                let fam = FamilyId::from_name(head).ok_or_else(unknown)?;
                MeasureId::Family(fam, inner.trim().parse().map_err(|_| unknown())?)
            }
        } else if let Some(pair) = s.strip_prefix("D_") {
            let mut cs = pair.chars();
            match (cs.next(), cs.next(), cs.next()) {
                (Some(u), Some(l), None) => MeasureId::MeanDiff(
                    MeanKind::from_symbol(u).ok_or_else(unknown)?,
                    MeanKind::from_symbol(l).ok_or_else(unknown)?,
                ),
                _ => return Err(unknown()),
            }
        } else if s.len() == 1 && s != "h" && s != "K" && s != "F" && s != "L" {
            MeasureId::Mean(MeanKind::from_symbol(s.chars().next().unwrap_or(' ')).ok_or_else(unknown)?)
        } else {
            let lower = s.to_ascii_lowercase();
            match (s, lower.as_str()) {
                (_, "delta") | ("Δ", _) => MeasureId::Base(BaseMeasureId::Triangular),
                ("h", _) => MeasureId::Base(BaseMeasureId::Hellinger),
                ("K", _) => MeasureId::Base(BaseMeasureId::JainSrivastava),
                (_, "psi") | ("Ψ", _) => MeasureId::Base(BaseMeasureId::SymmetricChiSquare),
                ("F", _) => MeasureId::Base(BaseMeasureId::KumarJohnson),
                ("L", _) => MeasureId::Base(BaseMeasureId::NewL),
                _ => {
                    let (head, num) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
                    let n: u8 = num.parse().map_err(|_| unknown())?;
                    match head {
                        "W" => MeasureId::W(n),
                        "D" => MeasureId::D(n),
                        "V" => MeasureId::V(n),
                        "U" => MeasureId::U(n),
                        _ => return Err(unknown()),
                    }
                }
            }
        };
        id.validate().map_err(|_| unknown())
    }
}

impl Serialize for MeasureId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasureId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_names() {
        for id in MeasureId::catalog() {
            let back: MeasureId = id.to_string().parse().unwrap();
            assert_eq!(back, id, "{id}");
        }
    }

    #[test]
    fn aliases_and_errors() {
        assert_eq!("Delta".parse::<MeasureId>().unwrap(), MeasureId::Base(BaseMeasureId::Triangular));
        assert_eq!("psi".parse::<MeasureId>().unwrap(), MeasureId::Base(BaseMeasureId::SymmetricChiSquare));
        assert_eq!("hgen(2)".parse::<MeasureId>().unwrap(), MeasureId::Family(FamilyId::Hgen, 2));
        for bad in ["W10", "D37", "V0", "U16", "D_HC", "L(9)", "Mnew(65)", "X1", "", "Q"] {
            assert!(matches!(bad.parse::<MeasureId>(), Err(Error::UnknownMeasure(_))), "{bad}");
        }
    }

    #[test]
    fn eval_spot_values() {
        let p = PositivePair::new(4.0, 1.0).unwrap();
        let v1: MeasureId = "V1".parse().unwrap();
        assert!((v1.eval(p) - 0.1).abs() < 1e-17);
        let lt: MeasureId = "L(3)".parse().unwrap();
        assert!((lt.eval(p) - 8.7890625).abs() < 1e-14);
    }

    #[test]
    fn catalog_size() {
        // 7 means, 21 differences, 6 base, 5 L_t, 9 W, 36 D, 14 V, 15 U, 30 family members.
        assert_eq!(MeasureId::catalog().len(), 7 + 21 + 6 + 5 + 9 + 36 + 14 + 15 + 30);
    }
}
