//! Declarative inequality chains.
//!
//! A [`ChainSpec`] lists scaled terms `c_i·M_i` and the pairs of terms that
//! are claimed to be ordered (`c_i·M_i ≤ c_j·M_j`). When no explicit links
//! are given, consecutive terms are linked. Chains can be loaded from TOML or
//! JSON documents, so new claims can be audited without code changes:
//!
//! ```toml
//! [[chain]]
//! id = "hellinger-vs-triangular"
//! description = "a quarter of delta is below h"
//! terms = ["1/4 delta", "h"]
//! ```

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::registry::MeasureId;

/// Exact rational coefficient.
pub type Rational = Ratio<i64>;

/// Build a rational `n/d`.
pub fn q(n: i64, d: i64) -> Rational {
    Ratio::new(n, d)
}

/// Convert a rational to the nearest double.
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// One scaled term `coef·measure` of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainTerm {
    pub coef: Rational,
    pub measure: MeasureId,
}

impl ChainTerm {
    pub fn new(coef: Rational, measure: MeasureId) -> Self {
        ChainTerm { coef, measure }
    }
}

impl fmt::Display for ChainTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.coef.denom() == 1 && *self.coef.numer() == 1 {
            write!(f, "{}", self.measure)
        } else {
            write!(f, "{} {}", self.coef, self.measure)
        }
    }
}

impl FromStr for ChainTerm {
    type Err = Error;

    /// `"1/4 delta"`, `"3 W2"` or just `"W2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(char::is_whitespace) {
            Some((c, m)) => {
                let coef: Rational =
                    c.parse().map_err(|_| Error::Config(format!("bad coefficient {c:?} in term {s:?}")))?;
                if *coef.numer() <= 0 {
                    return Err(Error::Config(format!("coefficient must be positive in term {s:?}")));
                }
                Ok(ChainTerm { coef, measure: m.trim().parse()? })
            }
            None => Ok(ChainTerm { coef: q(1, 1), measure: s.parse()? }),
        }
    }
}

impl Serialize for ChainTerm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ChainTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A claimed pointwise inequality chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub terms: Vec<ChainTerm>,
    /// Claimed orderings `terms[i] ≤ terms[j]`; consecutive terms when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<Vec<(usize, usize)>>,
}

impl ChainSpec {
    /// A chain over consecutive terms.
    pub fn linear(id: &str, description: &str, terms: Vec<ChainTerm>) -> Self {
        ChainSpec { id: id.to_string(), description: description.to_string(), terms, links: None }
    }

    /// The ordered pairs `(i, j)` asserting `terms[i] ≤ terms[j]`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match &self.links {
            Some(l) => l.clone(),
            None => (1..self.terms.len()).map(|j| (j - 1, j)).collect(),
        }
    }

    /// Check structural invariants: at least two terms, positive
    /// coefficients, links in range.
    pub fn validate(&self) -> Result<()> {
        if self.terms.len() < 2 {
            return Err(Error::Config(format!("chain {:?} needs at least two terms", self.id)));
        }
        for t in &self.terms {
            if *t.coef.numer() <= 0 {
                return Err(Error::Config(format!("chain {:?}: coefficients must be positive", self.id)));
            }
            t.measure
                .validate()
                .map_err(|_| Error::Config(format!("chain {:?}: bad measure {}", self.id, t.measure)))?;
        }
        for (i, j) in self.edges() {
            if i >= self.terms.len() || j >= self.terms.len() || i == j {
                return Err(Error::Config(format!("chain {:?}: link ({i}, {j}) out of range", self.id)));
            }
        }
        Ok(())
    }

    /// Human-readable rendering, e.g. `1/4 delta ≤ h ≤ 1/8 K`.
    pub fn render(&self) -> String {
        if self.links.is_none() {
            self.terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ≤ ")
        } else {
            self.edges()
                .iter()
                .map(|&(i, j)| format!("{} ≤ {}", self.terms[i], self.terms[j]))
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

/// Document format for chain configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainDocument {
    #[serde(rename = "chain")]
    pub chains: Vec<ChainSpec>,
}

/// Parse a TOML chain document (`[[chain]]` tables).
pub fn chains_from_toml(text: &str) -> Result<Vec<ChainSpec>> {
    let doc: ChainDocument = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    for c in &doc.chains {
        c.validate()?;
    }
    Ok(doc.chains)
}

/// Parse a JSON chain document (`{"chain": [...]}` or a bare array).
pub fn chains_from_json(text: &str) -> Result<Vec<ChainSpec>> {
    let chains: Vec<ChainSpec> = match serde_json::from_str::<ChainDocument>(text) {
        Ok(doc) => doc.chains,
        Err(_) => serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?,
    };
    for c in &chains {
        c.validate()?;
    }
    Ok(chains)
}

fn m(name: &str) -> MeasureId {
    name.parse().expect("catalog measure names are valid")
}

fn terms(list: &[(i64, i64, &str)]) -> Vec<ChainTerm> {
    list.iter().map(|&(n, d, name)| ChainTerm::new(q(n, d), m(name))).collect()
}

/// Pyramid differences in the order of the refined chain, with the cumulative
/// scale factors that make every consecutive step an inequality.
const PYRAMID_MAIN: [(i64, i64, &str); 26] = [
    (1, 1, "D1"),
    (1, 14, "D15"),
    (1, 13, "D14"),
    (3, 35, "D13"),
    (5, 49, "D12"),
    (1, 7, "D11"),
    (1, 28, "D21"),
    (1, 27, "D20"),
    (3, 77, "D19"),
    (5, 119, "D18"),
    (1, 21, "D17"),
    (1, 14, "D16"),
    (1, 42, "D28"),
    (1, 41, "D27"),
    (3, 119, "D26"),
    (5, 189, "D25"),
    (1, 35, "D24"),
    (1, 28, "D23"),
    (1, 56, "D36"),
    (1, 55, "D35"),
    (3, 161, "D34"),
    (5, 259, "D33"),
    (1, 49, "D32"),
    (1, 42, "D31"),
    (1, 28, "D30"),
    (1, 14, "D29"),
];

fn pyramid_chain() -> ChainSpec {
    let mut t = terms(&PYRAMID_MAIN);
    // Side branch: (1/28)D23 ≤ (1/14)D22 ≤ (1/42)D31.
    t.push(ChainTerm::new(q(1, 14), m("D22")));
    let branch = t.len() - 1;
    let d23 = PYRAMID_MAIN.iter().position(|e| e.2 == "D23").expect("D23 present");
    let d31 = PYRAMID_MAIN.iter().position(|e| e.2 == "D31").expect("D31 present");
    let mut links: Vec<(usize, usize)> = (1..PYRAMID_MAIN.len()).map(|j| (j - 1, j)).collect();
    links.push((d23, branch));
    links.push((branch, d31));
    ChainSpec {
        id: "pyramid".into(),
        description: "refined chain over the 27 independent pyramid differences".into(),
        terms: t,
        links: Some(links),
    }
}

/// The unscaled chain as originally published: from the fourth term on, the
/// differences are compared without the scale factors the sharp constants
/// require. Used as a negative control.
pub fn pyramid_as_printed() -> ChainSpec {
    let names = [
        "D1", "D15", "D14", "D13", "D12", "D11", "D21", "D20", "D19", "D18", "D17", "D16", "D28", "D27", "D26", "D25",
        "D24", "D23", "D22", "D36", "D35", "D34", "D33", "D32", "D31", "D30", "D29",
    ];
    let mut t: Vec<ChainTerm> = names.iter().map(|n| ChainTerm::new(q(1, 1), m(n))).collect();
    t[1].coef = q(1, 14);
    t[2].coef = q(1, 13);
    // D23 ≤ {D22, D36} ≤ D35, everything else consecutive.
    let mut links: Vec<(usize, usize)> = (1..18).map(|j| (j - 1, j)).collect();
    links.extend([(17, 18), (17, 19), (18, 20), (19, 20)]);
    links.extend((21..names.len()).map(|j| (j - 1, j)));
    ChainSpec {
        id: "pyramid-as-printed".into(),
        description: "pyramid chain without scale factors beyond the third term".into(),
        terms: t,
        links: Some(links),
    }
}

fn reverse_chain(id: &str, rising: std::ops::RangeInclusive<u8>, tail: &[(i64, i64, u8)]) -> ChainSpec {
    let mut t: Vec<ChainTerm> = rising.map(|k| ChainTerm::new(q(1, 1), MeasureId::D(k))).collect();
    t.extend(tail.iter().map(|&(n, d, k)| ChainTerm::new(q(n, d), MeasureId::D(k))));
    ChainSpec::linear(id, "reverse inequalities along one pyramid row", t)
}

/// Every chain audited by default, in report order.
pub fn catalog() -> Vec<ChainSpec> {
    vec![
        ChainSpec::linear(
            "means",
            "the seven means in increasing order",
            terms(&[(1, 1, "H"), (1, 1, "G"), (1, 1, "N"), (1, 1, "A"), (1, 1, "R"), (1, 1, "S"), (1, 1, "C")]),
        ),
        ChainSpec::linear(
            "base",
            "scaled base measures",
            terms(&[(1, 4, "delta"), (1, 1, "h"), (1, 8, "K"), (1, 16, "Psi"), (1, 16, "F"), (1, 64, "L")]),
        ),
        ChainSpec::linear(
            "w-definitions",
            "the W scale written through its defining measures",
            terms(&[
                (2, 1, "delta"),
                (24, 7, "D_CN"),
                (8, 3, "D_CG"),
                (24, 5, "D_RG"),
                (8, 1, "h"),
                (1, 1, "K"),
                (1, 2, "Psi"),
                (1, 2, "F"),
                (1, 8, "L"),
            ]),
        ),
        ChainSpec::linear(
            "w-scale",
            "W1 through W9",
            (1..=9).map(|i| ChainTerm::new(q(1, 1), MeasureId::W(i))).collect(),
        ),
        pyramid_chain(),
        ChainSpec::linear(
            "v-main",
            "main chain of V residuals",
            terms(&[
                (1, 1, "V1"),
                (1, 8, "V3"),
                (1, 2, "V4"),
                (1, 16, "V7"),
                (1, 8, "V8"),
                (1, 72, "V11"),
                (1, 48, "V13"),
                (1, 16, "V14"),
            ]),
        ),
        ChainSpec::linear(
            "v-side",
            "side chain of V residuals",
            terms(&[(1, 8, "V3"), (1, 36, "V6"), (1, 128, "V10"), (1, 72, "V11")]),
        ),
        ChainSpec::linear("v-link", "link between the V chains", terms(&[(1, 36, "V6"), (1, 16, "V7")])),
        ChainSpec::linear(
            "v-even",
            "chain of eighth-order V residuals",
            terms(&[(1, 1, "V2"), (1, 4, "V5"), (1, 16, "V9"), (1, 8, "V12")]),
        ),
        ChainSpec::linear(
            "u-main",
            "main chain of eighth-order U residuals",
            terms(&[
                (1, 1, "U1"),
                (1, 10, "U6"),
                (1, 11, "U3"),
                (1, 2, "U2"),
                (1, 20, "U8"),
                (1, 8, "U9"),
                (1, 2, "U7"),
            ]),
        ),
        ChainSpec::linear(
            "u-side",
            "side chain of eighth-order U residuals",
            terms(&[(1, 11, "U3"), (1, 56, "U5"), (1, 20, "U8")]),
        ),
        ChainSpec::linear(
            "u-tail",
            "chain of tenth-order U residuals",
            terms(&[(1, 1, "U10"), (1, 12, "U14"), (1, 4, "U11"), (1, 2, "U13"), (1, 20, "U12")]),
        ),
        reverse_chain("reverse-1", 11..=15, &[(14, 13, 14), (6, 5, 13), (10, 7, 12), (2, 1, 11)]),
        reverse_chain("reverse-2", 16..=21, &[(28, 27, 20), (12, 11, 19), (20, 17, 18), (4, 3, 17), (2, 1, 16)]),
        reverse_chain(
            "reverse-3",
            22..=28,
            &[(42, 41, 27), (18, 17, 26), (10, 9, 25), (6, 5, 24), (3, 2, 23), (3, 1, 22)],
        ),
        reverse_chain(
            "reverse-4",
            29..=36,
            &[(56, 55, 35), (24, 23, 34), (40, 37, 33), (8, 7, 32), (4, 3, 31), (2, 1, 30), (4, 1, 29)],
        ),
    ]
}

/// Look up a catalog chain (or a negative control) by id.
pub fn find(id: &str) -> Option<ChainSpec> {
    if id == "pyramid-as-printed" {
        return Some(pyramid_as_printed());
    }
    if id == "w-scale-reversed" {
        return Some(w_scale_reversed());
    }
    catalog().into_iter().find(|c| c.id == id)
}

/// `W2 ≤ W1`: false everywhere off the diagonal. Used as a negative control.
pub fn w_scale_reversed() -> ChainSpec {
    ChainSpec::linear("w-scale-reversed", "deliberately reversed W1/W2 step", terms(&[(1, 1, "W2"), (1, 1, "W1")]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_valid() {
        let cat = catalog();
        assert_eq!(cat.len(), 16);
        for c in &cat {
            c.validate().unwrap();
        }
        let pyr = find("pyramid").unwrap();
        assert_eq!(pyr.terms.len(), 27);
        let mut seen: Vec<MeasureId> = pyr.terms.iter().map(|t| t.measure).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 27);
        pyramid_as_printed().validate().unwrap();
    }

    #[test]
    fn pyramid_coefficients_are_cumulative_betas() {
        let betas = [
            q(1, 14),
            q(14, 13),
            q(39, 35),
            q(25, 21),
            q(7, 5),
            q(1, 4),
            q(28, 27),
            q(81, 77),
            q(55, 51),
            q(17, 15),
            q(3, 2),
            q(1, 3),
            q(42, 41),
            q(123, 119),
            q(85, 81),
            q(27, 25),
            q(5, 4),
            q(1, 2),
            q(56, 55),
            q(165, 161),
            q(115, 111),
            q(37, 35),
            q(7, 6),
            q(3, 2),
            q(2, 1),
        ];
        let mut c = q(1, 1);
        for (i, b) in betas.iter().enumerate() {
            // step i+1 of the main chain skips the D22 branch (β = 2 is the D23→D22 step)
            c *= *b;
            assert_eq!(q(PYRAMID_MAIN[i + 1].0, PYRAMID_MAIN[i + 1].1), c, "term {}", i + 1);
        }
    }

    #[test]
    fn term_parsing() {
        let t: ChainTerm = "1/4 delta".parse().unwrap();
        assert_eq!(t.coef, q(1, 4));
        assert_eq!(t.to_string(), "1/4 delta");
        let t: ChainTerm = "W3".parse().unwrap();
        assert_eq!(t.coef, q(1, 1));
        assert!("-1 W3".parse::<ChainTerm>().is_err());
        assert!("x W3".parse::<ChainTerm>().is_err());
        assert!("1/2 W99".parse::<ChainTerm>().is_err());
    }

    #[test]
    fn toml_and_json_documents() {
        let toml = r#"
            [[chain]]
            id = "t"
            terms = ["1/4 delta", "h"]
        "#;
        let c = chains_from_toml(toml).unwrap();
        assert_eq!(c[0].terms.len(), 2);
        let json = r#"[{"id": "j", "terms": ["W1", "W2"], "links": [[0, 1]]}]"#;
        let c = chains_from_json(json).unwrap();
        assert_eq!(c[0].edges(), vec![(0, 1)]);
        assert!(chains_from_toml("[[chain]]\nid = \"x\"\nterms = [\"W1\"]").is_err());
        assert!(chains_from_json(r#"[{"id": "j", "terms": ["W1", "W2"], "links": [[0, 5]]}]"#).is_err());
    }
}
