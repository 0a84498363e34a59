//! Base discrimination measures and the generalized triangular family `L_t`.
//!
//! | Measure | Symbol | `M(a,b)` |
//! |---------|--------|----------|
//! | Triangular | Δ | `(a−b)²/(a+b)` |
//! | Hellinger | h | `½(√a−√b)²` |
//! | Jain–Srivastava | K | `(a−b)²/√(ab)` |
//! | Symmetric χ² | Ψ | `(a−b)²(a+b)/(ab)` |
//! | Kumar–Johnson | F | `(a²−b²)²/(2(ab)^{3/2})` |
//! | New measure | L | `(a−b)²(a+b)³/(ab)²` |
//!
//! The family `L_t(a,b) = (a−b)²(a+b)^t / (2^t (√(ab))^{t+1})` interpolates
//! them: `L_{-1} = 2Δ`, `L_0 = K`, `L_1 = ½Ψ`, `L_2 = ½F`, `L_3 = ⅛L`, and is
//! nondecreasing in `t` because `L_{t+1}/L_t = (a+b)/(2√(ab)) ≥ 1`.

use serde::{Deserialize, Serialize};

use crate::distributions::ProbVector;
use crate::error::{Error, Result};
use crate::num::{PositivePair, Scalar};

/// The six base measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BaseMeasureId {
    Triangular,
    Hellinger,
    JainSrivastava,
    SymmetricChiSquare,
    KumarJohnson,
    NewL,
}

impl BaseMeasureId {
    /// All six, in the order of the `¼Δ ≤ h ≤ ⅛K ≤ …` chain.
    pub const ALL: [BaseMeasureId; 6] = [
        BaseMeasureId::Triangular,
        BaseMeasureId::Hellinger,
        BaseMeasureId::JainSrivastava,
        BaseMeasureId::SymmetricChiSquare,
        BaseMeasureId::KumarJohnson,
        BaseMeasureId::NewL,
    ];

    /// Registry name.
    pub fn name(self) -> &'static str {
        match self {
            BaseMeasureId::Triangular => "delta",
            BaseMeasureId::Hellinger => "h",
            BaseMeasureId::JainSrivastava => "K",
            BaseMeasureId::SymmetricChiSquare => "Psi",
            BaseMeasureId::KumarJohnson => "F",
            BaseMeasureId::NewL => "L",
        }
    }
}

/// Smallest supported `t` for [`l_t`].
pub const LT_MIN: i32 = -8;
/// Largest supported `t` for [`l_t`].
pub const LT_MAX: i32 = 8;

/// Generator of a base measure in `(s, u)` coordinates.
pub fn base_generator<T: Scalar>(id: BaseMeasureId, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    // w = x − 1, formed without cancellation.
    let w = u * (s + one);
    let w2 = w * w;
    match id {
        BaseMeasureId::Triangular => w2 / (x + one),
        BaseMeasureId::Hellinger => u * u / T::cst(2.0),
        BaseMeasureId::JainSrivastava => w2 / s,
        BaseMeasureId::SymmetricChiSquare => w2 * (x + one) / x,
        BaseMeasureId::KumarJohnson => w2 * (x + one) * (x + one) / (T::cst(2.0) * s * x),
        BaseMeasureId::NewL => w2 * (x + one).powi(3) / (x * x),
    }
}

/// Value of a base measure at `pair`.
pub fn base(id: BaseMeasureId, pair: PositivePair) -> f64 {
    let (s, u) = pair.su();
    pair.b * base_generator(id, s, u)
}

/// Generator of `L_t` in `(s, u)` coordinates.
pub fn lt_generator<T: Scalar>(t: i32, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    let w = u * (s + one);
    w * w * ((x + one) / T::cst(2.0)).powi(t) / s.powi(t + 1)
}

fn check_lt_range(t: i32) -> Result<()> {
    if !(LT_MIN..=LT_MAX).contains(&t) {
        return Err(Error::Range(format!("L_t requires t in [{LT_MIN}, {LT_MAX}], got {t}")));
    }
    Ok(())
}

/// `L_t(a, b)` for integer `t ∈ [−8, 8]`.
pub fn l_t(t: i32, pair: PositivePair) -> Result<f64> {
    check_lt_range(t)?;
    let (s, u) = pair.su();
    Ok(pair.b * lt_generator(t, s, u))
}

/// The convexity polynomial of `L_t`:
/// `(t+1)(t+3)(x⁴+1) + 4x(x²+1)(2−t)(t+1) + 2x²(3t−5)(t−1)`.
///
/// The second derivative of the generator factors as
/// `f″(x) = (x+1)^{t−2} / (2^{t+2} x² x^{(t+1)/2}) · A7(x, t)`, so the sign of
/// `A7` decides convexity.
pub fn a7(x: f64, t: i32) -> f64 {
    let t = f64::from(t);
    (t + 1.0) * (t + 3.0) * (x.powi(4) + 1.0)
        + 4.0 * x * (x * x + 1.0) * (2.0 - t) * (t + 1.0)
        + 2.0 * x * x * (3.0 * t - 5.0) * (t - 1.0)
}

/// `f″` of the `L_t` generator reconstructed from [`a7`].
pub fn lt_second_derivative_from_a7(x: f64, t: i32) -> f64 {
    let s = x.sqrt();
    (x + 1.0).powi(t - 2) / (2f64.powi(t + 2) * x * x * s.powi(t + 1)) * a7(x, t)
}

/// Topsoe's alternative family `Σ (pᵢ−qᵢ)^{2t} / (pᵢ+qᵢ)^{2t−1}`, `t ≥ 1`.
pub fn topsoe_delta(t: u32, p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if t < 1 {
        return Err(Error::Range(format!("Topsoe family requires t >= 1, got {t}")));
    }
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let e = i32::try_from(2 * t).map_err(|_| Error::Range(format!("t = {t} too large")))?;
    Ok(p.entries().iter().zip(q.entries()).map(|(&pi, &qi)| (pi - qi).powi(e) / (pi + qi).powi(e - 1)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use BaseMeasureId::*;

    fn p(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    #[test]
    fn spot_values() {
        let q = p(4.0, 1.0);
        assert!((base(Triangular, q) - 1.8).abs() < 1e-15);
        assert!((base(Hellinger, q) - 0.5).abs() < 1e-15);
        assert!((base(SymmetricChiSquare, q) - 11.25).abs() < 1e-14);
        assert!((base(JainSrivastava, q) - 4.5).abs() < 1e-15);
        assert!((base(KumarJohnson, q) - 14.0625).abs() < 1e-14);
        assert!((base(NewL, q) - 70.3125).abs() < 1e-13);
        assert_eq!(base(JainSrivastava, p(3.0, 3.0)), 0.0);
    }

    #[test]
    fn lt_anchors() {
        let q = p(4.0, 1.0);
        assert!((l_t(-1, q).unwrap() - 3.6).abs() < 1e-15);
        assert!((l_t(0, q).unwrap() - 4.5).abs() < 1e-15);
        assert!((l_t(3, q).unwrap() - 8.7890625).abs() < 1e-14);
        assert!(l_t(9, q).is_err());
        assert!(l_t(-9, q).is_err());
    }

    #[test]
    fn a7_at_one_is_constant() {
        for t in -8..=8 {
            assert_eq!(a7(1.0, t), 32.0);
        }
    }

    #[test]
    fn a7_factorization_matches_jet() {
        for &x in &[0.01, 0.5, 2.0, 37.0] {
            for t in -3..=5 {
                let (s, u) = crate::num::su_jet(x);
                let jet = lt_generator(t, s, u);
                let rec = lt_second_derivative_from_a7(x, t);
                assert!(((jet.dd - rec) / rec).abs() < 1e-12, "x={x} t={t}");
            }
        }
    }

    #[test]
    fn topsoe_hand_sums() {
        let a = ProbVector::new(vec![0.5, 0.5]).unwrap();
        let b = ProbVector::new(vec![0.25, 0.75]).unwrap();
        assert!((topsoe_delta(1, &a, &b).unwrap() - 2.0 / 15.0).abs() < 1e-16);
        // (1/4)^4/(3/4)^3 + (1/4)^4/(5/4)^3
        let want = 0.25f64.powi(4) / 0.75f64.powi(3) + 0.25f64.powi(4) / 1.25f64.powi(3);
        assert!((topsoe_delta(2, &a, &b).unwrap() - want).abs() < 1e-17);
        assert_eq!(topsoe_delta(1, &a, &a).unwrap(), 0.0);
        assert!(topsoe_delta(0, &a, &b).is_err());
    }
}
