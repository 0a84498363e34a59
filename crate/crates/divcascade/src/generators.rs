//! Parametric generating families and their exponential series.
//!
//! Each family `M_t`, `t = 0, 1, 2, …`, has a constant step ratio
//! `r = M_{t+1}/M_t` independent of `t`, so the weighted series
//! `Σ_t M_t / t!` sums to `M_0·exp(r)`.
//!
//! | Family | `f_t(x)` | step ratio `r(x)` |
//! |--------|----------|-------------------|
//! | Δ¹ | `(x−1)²(√x−1)^{2t} / ((x+1) x^{t/2})` | `(√x−1)²/√x` |
//! | Δ² | `(x−1)^{2(t+1)} / ((x+1) x^t)` | `(x−1)²/x` |
//! | K¹ | `(x−1)²(√x−1)^{2t} / x^{(t+1)/2}` | `(√x−1)²/√x` |
//! | K² | `(x−1)^{2(t+1)} / x^{(2t+1)/2}` | `(x−1)²/x` |
//! | h  | `(√x−1)^{2(t+1)} / x^{t/2}` | `(√x−1)²/√x` |
//! | M  | `(√x−1)^{2(t+2)} / ((x+1) x^{t/2})` | `(√x−1)²/√x` |
//!
//! Second derivatives factor as a positive prefactor times a witness
//! polynomial `A(x, t)` with nonnegative coefficients, which certifies
//! convexity for every `t ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{PositivePair, Scalar};

/// The six generating families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyId {
    Delta1,
    Delta2,
    K1,
    K2,
    Hgen,
    Mnew,
}

impl FamilyId {
    /// All six families.
    pub const ALL: [FamilyId; 6] =
        [FamilyId::Delta1, FamilyId::Delta2, FamilyId::K1, FamilyId::K2, FamilyId::Hgen, FamilyId::Mnew];

    /// Registry name.
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Delta1 => "Delta1",
            FamilyId::Delta2 => "Delta2",
            FamilyId::K1 => "K1",
            FamilyId::K2 => "K2",
            FamilyId::Hgen => "Hgen",
            FamilyId::Mnew => "Mnew",
        }
    }

    /// Parse a registry name (case-insensitive).
    pub fn from_name(s: &str) -> Option<FamilyId> {
        FamilyId::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }
}

/// Largest supported family parameter.
pub const T_MAX: u32 = 64;

fn check_t(t: u32) -> Result<()> {
    if t > T_MAX {
        return Err(Error::Range(format!("family parameter must be in 0..={T_MAX}, got {t}")));
    }
    Ok(())
}

/// Step ratio `r = f_{t+1}/f_t` in `(s, u)` coordinates.
pub fn step_ratio_generator<T: Scalar>(id: FamilyId, s: T, u: T) -> T {
    match id {
        FamilyId::Delta2 | FamilyId::K2 => {
            let w = u * (s + T::cst(1.0));
            w * w / (s * s)
        }
        _ => u * u / s,
    }
}

/// Leading member `f_0` in `(s, u)` coordinates.
pub fn leading_generator<T: Scalar>(id: FamilyId, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    let w = u * (s + one);
    match id {
        FamilyId::Delta1 | FamilyId::Delta2 => w * w / (x + one),
        FamilyId::K1 | FamilyId::K2 => w * w / s,
        FamilyId::Hgen => u * u,
        FamilyId::Mnew => u.powi(4) / (x + one),
    }
}

/// Generator of family member `t` in `(s, u)` coordinates.
pub fn family_generator<T: Scalar>(id: FamilyId, t: u32, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    let w = u * (s + one);
    let ti = t as i32;
    match id {
        FamilyId::Delta1 => w * w * u.powi(2 * ti) / ((x + one) * s.powi(ti)),
        FamilyId::Delta2 => w.powi(2 * ti + 2) / ((x + one) * x.powi(ti)),
        FamilyId::K1 => w * w * u.powi(2 * ti) / s.powi(ti + 1),
        FamilyId::K2 => w.powi(2 * ti + 2) / s.powi(2 * ti + 1),
        FamilyId::Hgen => u.powi(2 * ti + 2) / s.powi(ti),
        FamilyId::Mnew => u.powi(2 * ti + 4) / ((x + one) * s.powi(ti)),
    }
}

/// Family member `t ∈ 0..=64` at `pair`. Values that exceed the double
/// range (possible only for large `t` and extreme ratios) are `+∞`.
pub fn family(id: FamilyId, t: u32, pair: PositivePair) -> Result<f64> {
    check_t(t)?;
    let (s, u) = pair.su();
    Ok(pair.b * family_generator(id, t, s, u))
}

/// Convexity witness polynomial `A(x, t)` of a family.
pub fn convexity_witness(id: FamilyId, x: f64, t: u32) -> f64 {
    let t = f64::from(t);
    let s = x.sqrt();
    let x2 = x * x;
    match id {
        FamilyId::Delta1 => {
            t * (t + 2.0) * (x2 * x2 + 1.0)
                + 2.0 * t * (2.0 * t + 1.0) * s * (x2 * x + 1.0)
                + 4.0 * t * (2.0 * t + 3.0) * x * (x2 + 1.0)
                + 2.0 * (7.0 * t * t + 10.0 * t + 16.0) * x2
                + 2.0 * t * (6.0 * t + 11.0) * s * x * (x + 1.0)
        }
        FamilyId::Delta2 => {
            t * (t + 1.0) * (x2 * x2 + 1.0)
                + 2.0 * t * (2.0 * t + 3.0) * x * (x2 + 1.0)
                + 2.0 * (3.0 * t * t + 5.0 * t + 4.0) * x2
        }
        FamilyId::K1 => {
            (t + 1.0) * (t + 3.0) * (x2 + 1.0)
                + 2.0 * t * (2.0 * t + 3.0) * s * (x + 1.0)
                + 2.0 * (3.0 * t * t + 2.0 * t + 1.0) * x
        }
        FamilyId::K2 => (2.0 * t + 1.0) * (2.0 * t * x2 + 3.0 * x2 + 2.0 * (2.0 * t + 1.0) * x + 2.0 * t + 3.0),
        FamilyId::Hgen => t * (t + 2.0) * s * (x + 1.0) + 2.0 * (t * t + t + 1.0) * x,
        FamilyId::Mnew => {
            2.0 * (t * t + 3.0 * t + 2.0) * x * (x2 + 1.0)
                + 4.0 * (t * t + 3.0 * t + 6.0) * x2
                + t * (t + 2.0) * s * (x2 * x + 1.0)
                + (3.0 * t * t + 14.0 * t + 8.0) * s * x * (x + 1.0)
        }
    }
}

/// Positive prefactor with `f″_t(x) = prefactor(x, t)·A(x, t)`.
pub fn witness_prefactor(id: FamilyId, x: f64, t: u32) -> f64 {
    let ti = t as i32;
    let s = x.sqrt();
    let u = crate::num::sqrt_minus_one(x);
    let w = u * (s + 1.0);
    let x2 = x * x;
    match id {
        FamilyId::Delta1 => u.powi(2 * ti) / (4.0 * x2 * (x + 1.0).powi(3) * s.powi(ti)),
        FamilyId::Delta2 => w.powi(2 * ti) / ((x + 1.0).powi(3) * x.powi(ti + 2)),
        FamilyId::K1 => u.powi(2 * ti) / (4.0 * x2 * s.powi(ti + 1)),
        FamilyId::K2 => w.powi(2 * ti) / (4.0 * x2 * s.powi(2 * ti + 1)),
        FamilyId::Hgen => u.powi(2 * ti) / (4.0 * s.powi(ti + 5)),
        FamilyId::Mnew => u.powi(2 * ti + 2) / (4.0 * (x + 1.0).powi(3) * s.powi(ti + 5)),
    }
}

/// `f″_t(x)` reconstructed from the witness factorization.
pub fn second_derivative_from_witness(id: FamilyId, x: f64, t: u32) -> f64 {
    witness_prefactor(id, x, t) * convexity_witness(id, x, t)
}

/// The published witness for `Δ¹`, whose `x²` coefficient is `4(7t²+10t+16)`.
pub fn delta1_witness_as_printed(x: f64, t: u32) -> f64 {
    let t = f64::from(t);
    convexity_witness(FamilyId::Delta1, x, t as u32) + 2.0 * (7.0 * t * t + 10.0 * t + 16.0) * x * x
}

/// The published prefactor for `M`, with `(x−1)^{2t+2}` in place of `(√x−1)^{2t+2}`.
pub fn mnew_prefactor_as_printed(x: f64, t: u32) -> f64 {
    let ti = t as i32;
    let s = x.sqrt();
    (x - 1.0).powi(2 * ti + 2) / (4.0 * (x + 1.0).powi(3) * s.powi(ti + 5))
}

/// `Σ_{t=0}^{n} f_t(a,b)/t!`, accumulated term by term as
/// `term_{t+1} = term_t · r/(t+1)`.
pub fn exp_series_partial(id: FamilyId, pair: PositivePair, n: u32) -> f64 {
    let (s, u) = pair.su();
    let r = step_ratio_generator(id, s, u);
    let mut term = pair.b * leading_generator(id, s, u);
    let mut sum = term;
    for t in 1..=n {
        term *= r / f64::from(t);
        sum += term;
    }
    sum
}

/// Closed form of the full series, `f_0·exp(r)`.
pub fn exp_representation(id: FamilyId, pair: PositivePair) -> f64 {
    let (s, u) = pair.su();
    pair.b * leading_generator(id, s, u) * step_ratio_generator(id, s, u).exp()
}

/// The exponential display published for each family, as a function of `(a, b)`.
pub fn exp_representation_as_printed(id: FamilyId, pair: PositivePair) -> f64 {
    let (a, b) = (pair.a, pair.b);
    let g = a.sqrt() * b.sqrt();
    let d2 = (a - b) * (a - b);
    let hs = (a.sqrt() - b.sqrt()).powi(2);
    match id {
        FamilyId::Delta1 => d2 / (a + b) * (d2 / g).exp(),
        FamilyId::Delta2 => d2 / (a + b) * (d2 / (a * b)).exp(),
        FamilyId::K1 => hs / g * (d2 / g).exp(),
        FamilyId::K2 => d2 / g * (d2 / (a * b)).exp(),
        FamilyId::Hgen => hs * (hs / g).exp(),
        FamilyId::Mnew => d2 * d2 / (a + b) * (hs / g).exp(),
    }
}

/// The published exponential form for the `L_t` family:
/// `2(a−b)²/(a+b)·exp((a+b)/(2√(ab)))`.
pub fn exp_l_representation(pair: PositivePair) -> f64 {
    let (a, b) = (pair.a, pair.b);
    let (s, u) = pair.su();
    let w = u * (s + 1.0);
    2.0 * b * w * w / (s * s + 1.0) * ((a + b) / (2.0 * a.sqrt() * b.sqrt())).exp()
}

/// `Σ_{j=0}^{n} L_{j+offset}(a,b)/j!` for the `L_t` family, accumulated with
/// the constant step ratio `(a+b)/(2√(ab))`. `offset = −1` starts from `2Δ`,
/// `offset = 0` from `K`.
pub fn exp_l_series_partial(pair: PositivePair, offset: i32, n: u32) -> Result<f64> {
    let mut term = crate::discriminations::l_t(offset, pair)?;
    let (s, _) = pair.su();
    let r = (s * s + 1.0) / (2.0 * s);
    let mut sum = term;
    for j in 1..=n {
        term *= r / f64::from(j);
        sum += term;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use FamilyId::*;

    fn p(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    #[test]
    fn spot_values() {
        let q = p(4.0, 1.0);
        assert!((family(Delta1, 0, q).unwrap() - 1.8).abs() < 1e-15);
        assert!((family(Mnew, 0, q).unwrap() - 0.2).abs() < 1e-16);
        assert!((family(Hgen, 1, q).unwrap() - 0.5).abs() < 1e-16);
        assert_eq!(family(K1, 0, p(2.0, 2.0)).unwrap(), 0.0);
        assert!(family(K1, 65, q).is_err());
    }

    #[test]
    fn witnesses() {
        assert_eq!(convexity_witness(K2, 1.0, 0), 8.0);
        for &x in &[0.01, 1.0, 3.0, 400.0] {
            assert!((convexity_witness(Hgen, x, 0) - 2.0 * x).abs() < 1e-12 * x);
        }
    }

    #[test]
    fn witness_factorization_matches_jet() {
        for id in FamilyId::ALL {
            for t in 0..=4 {
                for &x in &[0.02, 0.7, 1.3, 45.0] {
                    let (s, u) = crate::num::su_jet(x);
                    let jet = family_generator(id, t, s, u).dd;
                    let rec = second_derivative_from_witness(id, x, t);
                    assert!(((jet - rec) / rec).abs() < 1e-11, "{id:?} t={t} x={x}: {jet} vs {rec}");
                }
            }
        }
    }

    #[test]
    fn series_spot_values() {
        let q = p(4.0, 1.0);
        assert!((exp_series_partial(Delta1, q, 0) - 1.8).abs() < 1e-15);
        let want = 1.8 * 0.5f64.exp();
        assert!((exp_series_partial(Delta1, q, 30) - want).abs() < 1e-14);
        assert!((exp_representation(Delta1, q) - want).abs() < 1e-14);
        assert!((want - 2.96769).abs() < 1e-5);
        assert_eq!(exp_representation(Hgen, p(5.0, 5.0)), 0.0);
        assert!((exp_l_representation(q) - 3.6 * 1.25f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn l_series_offset() {
        let q = p(4.0, 1.0);
        let minus_one = exp_l_series_partial(q, -1, 40).unwrap();
        assert!(((minus_one - exp_l_representation(q)) / minus_one).abs() < 1e-14);
        let zero = exp_l_series_partial(q, 0, 40).unwrap();
        assert!(((zero - 4.5 * 1.25f64.exp()) / zero).abs() < 1e-14);
    }
}
