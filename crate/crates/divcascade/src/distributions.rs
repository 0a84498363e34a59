//! Finite probability distributions and the distribution form of every
//! measure, `M(P‖Q) = Σᵢ qᵢ·f(pᵢ/qᵢ) = Σᵢ M(pᵢ, qᵢ)`.
//!
//! Because every measure in the catalog is 1-homogeneous, all pointwise
//! identities and inequality chains carry over to distributions term by term.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::PositivePair;
use crate::registry::MeasureId;

/// Default tolerance on `|Σ pᵢ − 1|` accepted by [`ProbVector::validate`].
pub const DEFAULT_SUM_EPS: f64 = 1e-9;

/// A point of the open simplex: at least two strictly positive entries
/// summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbVector {
    entries: Vec<f64>,
}

impl ProbVector {
    /// Validate with the default sum tolerance.
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        Self::validate(raw, DEFAULT_SUM_EPS)
    }

    /// Reject non-positive (or non-finite) entries and sums farther than
    /// `eps` from one; on success divide by the exact sum.
    pub fn validate(raw: Vec<f64>, eps: f64) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::TooShort(raw.len()));
        }
        if let Some(i) = raw.iter().position(|&p| !(p > 0.0) || !p.is_finite()) {
            return Err(Error::NonPositiveEntry(i));
        }
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > eps {
            return Err(Error::SumOutOfTolerance(sum));
        }
        Ok(ProbVector { entries: raw.into_iter().map(|p| p / sum).collect() })
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false: a valid vector has at least two entries.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Component pairs `(pᵢ, qᵢ)`.
    pub fn pairs<'a>(&'a self, other: &'a ProbVector) -> Result<impl Iterator<Item = PositivePair> + 'a> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(&p, &q)| PositivePair { a: p, b: q }))
    }
}

impl<'de> Deserialize<'de> for ProbVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(d)?;
        ProbVector::new(raw).map_err(serde::de::Error::custom)
    }
}

/// `M(P‖Q) = Σᵢ M(pᵢ, qᵢ)`.
pub fn divergence(measure: MeasureId, p: &ProbVector, q: &ProbVector) -> Result<f64> {
    let measure = measure.validate()?;
    Ok(p.pairs(q)?.map(|pair| measure.eval(pair)).sum())
}

/// Input format of a distribution file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guess from a file extension (`.json` → JSON, anything else → CSV).
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Parse CSV text: one line of comma-separated numbers, or one number per
/// line. No header; `.` decimal separator.
pub fn parse_csv(text: &str) -> Result<Vec<f64>> {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).collect();
    if lines.len() > 1 && lines.iter().any(|(_, l)| l.contains(',')) {
        return Err(Error::Parse("CSV must be a single line or a single column".into()));
    }
    let mut out = Vec::new();
    for (line, l) in lines {
        for (field, cell) in l.split(',').enumerate() {
            let cell = cell.trim();
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::Parse(format!("line {line}, field {}: not a number: {cell:?}", field + 1)))?;
            out.push(v);
        }
    }
    Ok(out)
}

/// Parse JSON text: a flat array of numbers.
pub fn parse_json(text: &str) -> Result<Vec<f64>> {
    serde_json::from_str::<Vec<f64>>(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

/// Read and validate a distribution file.
pub fn load_distribution(path: &Path, format: Format) -> Result<ProbVector> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let raw = match format {
        Format::Csv => parse_csv(&text)?,
        Format::Json => parse_json(&text)?,
    };
    ProbVector::new(raw)
}

/// Smallest entry accepted by [`sample_dirichlet`].
pub const DIRICHLET_FLOOR: f64 = 1e-9;

/// Draw from the symmetric Dirichlet(1) distribution on the `n`-simplex by
/// normalizing i.i.d. exponentials, redrawing whenever an entry falls below
/// [`DIRICHLET_FLOOR`].
pub fn sample_dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbVector {
    assert!(n >= 2, "simplex dimension must be at least 2");
    loop {
        let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let sum: f64 = e.iter().sum();
        let p: Vec<f64> = e.iter().map(|v| v / sum).collect();
        if p.iter().all(|&v| v >= DIRICHLET_FLOOR) {
            return ProbVector { entries: p };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ProbVector::new(vec![0.25, 0.75]).is_ok());
        assert!(
            matches!(ProbVector::validate(vec![0.5, 0.5000001], 1e-9), Err(Error::SumOutOfTolerance(s)) if (s - 1.0000001).abs() < 1e-15)
        );
        assert_eq!(ProbVector::new(vec![0.5, 0.0, 0.5]), Err(Error::NonPositiveEntry(1)));
        assert_eq!(ProbVector::new(vec![1.0]), Err(Error::TooShort(1)));
        assert_eq!(ProbVector::new(vec![0.5, f64::NAN]), Err(Error::NonPositiveEntry(1)));
    }

    #[test]
    fn hand_values() {
        let p = pv(&[0.5, 0.5]);
        let q = pv(&[0.25, 0.75]);
        let delta: MeasureId = "delta".parse().unwrap();
        assert!((divergence(delta, &p, &q).unwrap() - 2.0 / 15.0).abs() < 1e-15);
        assert_eq!(divergence(delta, &p, &p).unwrap(), 0.0);
        let h: MeasureId = "h".parse().unwrap();
        let expect = 0.5 * ((0.5f64.sqrt() - 0.5).powi(2) + (0.5f64.sqrt() - 0.75f64.sqrt()).powi(2));
        assert!((divergence(h, &p, &q).unwrap() - expect).abs() < 1e-15);
        assert_eq!(divergence(h, &p, &pv(&[0.2, 0.3, 0.5])), Err(Error::LengthMismatch(2, 3)));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_csv("0.25,0.75\n").unwrap(), vec![0.25, 0.75]);
        assert_eq!(parse_csv("0.25\n0.75\n").unwrap(), vec![0.25, 0.75]);
        assert!(matches!(parse_csv("0.25,x"), Err(Error::Parse(m)) if m.contains("field 2")));
        assert!(parse_csv("0.1,0.2\n0.7").is_err());
        assert_eq!(parse_json("[0.2,0.3,0.5]").unwrap().len(), 3);
        assert!(parse_json("{\"a\": 1}").is_err());
        assert_eq!(ProbVector::new(parse_csv("0.25,-0.1,0.85").unwrap()), Err(Error::NonPositiveEntry(1)));
    }

    #[test]
    fn dirichlet_samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=16 {
            let p = sample_dirichlet(&mut rng, n);
            assert_eq!(p.len(), n);
            assert!((p.entries().iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.entries().iter().all(|&v| v >= DIRICHLET_FLOOR));
        }
    }
}
