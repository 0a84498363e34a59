//! The nine-measure scale `W₁ ≤ … ≤ W₉`, the 36 differences between its
//! members, and the residual measures `V₁…V₁₄`, `U₁…U₁₅` that certify each
//! step of the refined inequality chains.
//!
//! | Index | Measure | Generator `f(x)` |
//! |-------|---------|------------------|
//! | W₁ | 2Δ | `2(x−1)²/(x+1)` |
//! | W₂ | (24/7)·D_CN | `8(√x−1)²(2x+3√x+2)/(7(x+1))` |
//! | W₃ | (8/3)·D_CG | `8(√x−1)²(x+√x+1)/(3(x+1))` |
//! | W₄ | (24/5)·D_RG | `8(√x−1)²(2x+√x+2)/(5(x+1))` |
//! | W₅ | 8h | `4(√x−1)²` |
//! | W₆ | K | `(x−1)²/√x` |
//! | W₇ | ½Ψ | `(x−1)²(x+1)/(2x)` |
//! | W₈ | ½F | `(x²−1)²/(4x^{3/2})` |
//! | W₉ | ⅛L | `(x−1)²(x+1)³/(8x²)` |
//!
//! Every difference `D^k = W_i − W_j` (`i > j`) vanishes to fourth order on
//! the diagonal and is stored in factored form `u⁴·P(s)/Q(s)`; every residual
//! measure carries its explicit `u^{2m}` factor. This keeps the relative
//! accuracy of all values at a few ulps arbitrarily close to `a = b`.

pub mod chains;
pub mod equivalent;
pub mod parts;
pub mod printed;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{poly, rel_residual, PositivePair, Scalar};

/// Generator of `W_i`, `i ∈ 1..=9`, in `(s, u)` coordinates.
pub fn w_generator<T: Scalar>(i: u8, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let c = T::cst;
    let x = s * s;
    let u2 = u * u;
    let sp2 = (s + one) * (s + one);
    match i {
        1 => c(2.0) * u2 * sp2 / (x + one),
        2 => c(8.0) * u2 * (c(2.0) * x + c(3.0) * s + c(2.0)) / (c(7.0) * (x + one)),
        3 => c(8.0) * u2 * (x + s + one) / (c(3.0) * (x + one)),
        4 => c(8.0) * u2 * (c(2.0) * x + s + c(2.0)) / (c(5.0) * (x + one)),
        5 => c(4.0) * u2,
        6 => u2 * sp2 / s,
        7 => u2 * sp2 * (x + one) / (c(2.0) * x),
        8 => u2 * sp2 * (x + one) * (x + one) / (c(4.0) * x * s),
        9 => u2 * sp2 * (x + one).powi(3) / (c(8.0) * x * x),
        _ => panic!("W index {i} outside 1..=9"),
    }
}

fn check_w(i: u8) -> Result<()> {
    if !(1..=9).contains(&i) {
        return Err(Error::Range(format!("W index must be in 1..=9, got {i}")));
    }
    Ok(())
}

/// `W_i(a, b)`.
pub fn w(i: u8, pair: PositivePair) -> Result<f64> {
    check_w(i)?;
    let (s, u) = pair.su();
    Ok(pair.b * w_generator(i, s, u))
}

/// Analytic `f″` of the `W_i` generator, in closed form.
///
/// `W₈` uses `(15x⁴+2x²+15)/(16x^{7/2})`, the second derivative of
/// `(x²−1)²/(4x^{3/2})`.
pub fn w_second_derivative(i: u8, x: f64) -> Result<f64> {
    check_w(i)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    let s = x.sqrt();
    let s3 = s * x;
    let xp1 = x + 1.0;
    let xp3 = xp1.powi(3);
    Ok(match i {
        1 => 16.0 / xp3,
        2 => 2.0 * (xp3 + 48.0 * s3) / (7.0 * s3 * xp3),
        3 => 2.0 * (xp3 + 16.0 * s3) / (3.0 * s3 * xp3),
        4 => 2.0 * (3.0 * xp3 + 16.0 * s3) / (5.0 * s3 * xp3),
        5 => 2.0 / s3,
        6 => (3.0 * x * x + 2.0 * x + 3.0) / (4.0 * s3 * x),
        7 => (x.powi(3) + 1.0) / x.powi(3),
        8 => (15.0 * x.powi(4) + 2.0 * x * x + 15.0) / (16.0 * s3 * x * x),
        9 => xp1 * (2.0 * (x.powi(4) + 1.0) + (x * x + 1.0) * (x - 1.0).powi(2)) / (4.0 * x.powi(4)),
        _ => unreachable!(),
    })
}

/// Factored pyramid entry: `D^k = W_upper − W_lower = u⁴·P(s)/Q(s)`.
struct PyramidEntry {
    upper: u8,
    lower: u8,
    p: &'static [f64],
    q: &'static [f64],
}

macro_rules! pyr {
    ($up:expr, $lo:expr, [$($p:expr),*], [$($q:expr),*]) => {
        PyramidEntry { upper: $up, lower: $lo, p: &[$($p as f64),*], q: &[$($q as f64),*] }
    };
}

/// Rows of the pyramid: for each upper index 2..=9, the lower index runs
/// downward from `upper − 1` to 1.
static PYRAMID: [PyramidEntry; 36] = [
    pyr!(2, 1, [2], [7, 0, 7]),
    pyr!(3, 2, [8], [21, 0, 21]),
    pyr!(3, 1, [2], [3, 0, 3]),
    pyr!(4, 3, [8], [15, 0, 15]),
    pyr!(4, 2, [32], [35, 0, 35]),
    pyr!(4, 1, [6], [5, 0, 5]),
    pyr!(5, 4, [4], [5, 0, 5]),
    pyr!(5, 3, [4], [3, 0, 3]),
    pyr!(5, 2, [12], [7, 0, 7]),
    pyr!(5, 1, [2], [1, 0, 1]),
    pyr!(6, 5, [1], [0, 1]),
    pyr!(6, 4, [5, 4, 5], [0, 5, 0, 5]),
    pyr!(6, 3, [3, 4, 3], [0, 3, 0, 3]),
    pyr!(6, 2, [7, 12, 7], [0, 7, 0, 7]),
    pyr!(6, 1, [1, 2, 1], [0, 1, 0, 1]),
    pyr!(7, 6, [1, 2, 1], [0, 0, 2]),
    pyr!(7, 5, [1, 4, 1], [0, 0, 2]),
    pyr!(7, 4, [5, 20, 18, 20, 5], [0, 0, 10, 0, 10]),
    pyr!(7, 3, [3, 12, 14, 12, 3], [0, 0, 6, 0, 6]),
    pyr!(7, 2, [7, 28, 38, 28, 7], [0, 0, 14, 0, 14]),
    pyr!(7, 1, [1, 4, 6, 4, 1], [0, 0, 2, 0, 2]),
    pyr!(8, 7, [1, 2, 2, 2, 1], [0, 0, 0, 4]),
    pyr!(8, 6, [1, 4, 6, 4, 1], [0, 0, 0, 4]),
    pyr!(8, 5, [1, 4, 10, 4, 1], [0, 0, 0, 4]),
    pyr!(8, 4, [5, 20, 55, 56, 55, 20, 5], [0, 0, 0, 20, 0, 20]),
    pyr!(8, 3, [3, 12, 33, 40, 33, 12, 3], [0, 0, 0, 12, 0, 12]),
    pyr!(8, 2, [7, 28, 77, 104, 77, 28, 7], [0, 0, 0, 28, 0, 28]),
    pyr!(8, 1, [1, 4, 11, 16, 11, 4, 1], [0, 0, 0, 4, 0, 4]),
    pyr!(9, 8, [1, 2, 3, 4, 3, 2, 1], [0, 0, 0, 0, 8]),
    pyr!(9, 7, [1, 4, 7, 8, 7, 4, 1], [0, 0, 0, 0, 8]),
    pyr!(9, 6, [1, 4, 11, 16, 11, 4, 1], [0, 0, 0, 0, 8]),
    pyr!(9, 5, [1, 4, 11, 24, 11, 4, 1], [0, 0, 0, 0, 8]),
    pyr!(9, 4, [5, 20, 60, 140, 142, 140, 60, 20, 5], [0, 0, 0, 0, 40, 0, 40]),
    pyr!(9, 3, [3, 12, 36, 84, 98, 84, 36, 12, 3], [0, 0, 0, 0, 24, 0, 24]),
    pyr!(9, 2, [7, 28, 84, 196, 250, 196, 84, 28, 7], [0, 0, 0, 0, 56, 0, 56]),
    pyr!(9, 1, [1, 4, 12, 28, 38, 28, 12, 4, 1], [0, 0, 0, 0, 8, 0, 8]),
];

/// Number of pyramid differences.
pub const PYRAMID_LEN: u8 = 36;

fn check_k(k: u8) -> Result<()> {
    if !(1..=PYRAMID_LEN).contains(&k) {
        return Err(Error::Range(format!("pyramid index must be in 1..=36, got {k}")));
    }
    Ok(())
}

/// `(upper, lower)` W indices of pyramid entry `k`.
pub fn pyramid_index(k: u8) -> Result<(u8, u8)> {
    check_k(k)?;
    let e = &PYRAMID[usize::from(k - 1)];
    Ok((e.upper, e.lower))
}

/// The pyramid index `k` with `D^k = W_upper − W_lower`.
pub fn pyramid_lookup(upper: u8, lower: u8) -> Option<u8> {
    PYRAMID.iter().position(|e| e.upper == upper && e.lower == lower).map(|i| i as u8 + 1)
}

/// Generator of `D^k` in `(s, u)` coordinates.
pub fn pyramid_generator<T: Scalar>(k: u8, s: T, u: T) -> T {
    let e = &PYRAMID[usize::from(k - 1)];
    u.powi(4) * poly(e.p, s) / poly(e.q, s)
}

/// `D^k(a, b) = W_upper(a,b) − W_lower(a,b) ≥ 0`.
pub fn pyramid_diff(k: u8, pair: PositivePair) -> Result<f64> {
    check_k(k)?;
    let (s, u) = pair.su();
    Ok(pair.b * pyramid_generator(k, s, u))
}

/// Scale factors `c_k` for which `c_k·D^k = (√a−√b)⁴/(a+b)`, `k = 1..=10`.
pub const SCALED_DIFFERENCES: [(u8, f64); 10] = [
    (1, 7.0 / 2.0),
    (2, 21.0 / 8.0),
    (3, 3.0 / 2.0),
    (4, 15.0 / 8.0),
    (5, 35.0 / 32.0),
    (6, 5.0 / 6.0),
    (7, 5.0 / 4.0),
    (8, 3.0 / 4.0),
    (9, 7.0 / 12.0),
    (10, 1.0 / 2.0),
];

/// Result of [`pyramid_equalities`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PyramidEqualities {
    /// `(√a−√b)⁴/(a+b)`.
    pub common: f64,
    /// `(k, c_k·D^k, relative residual)` for the ten scaled differences.
    pub residuals: Vec<(u8, f64, f64)>,
    pub pass: bool,
}

/// The ten scaled differences among `W₁…W₅`, all equal to `(√a−√b)⁴/(a+b)`.
pub fn pyramid_equalities(pair: PositivePair, tol: f64) -> PyramidEqualities {
    let (s, u) = pair.su();
    let x = s * s;
    let common = pair.b * u.powi(4) / (x + 1.0);
    let residuals: Vec<(u8, f64, f64)> = SCALED_DIFFERENCES
        .iter()
        .map(|&(k, c)| {
            let v = c * pair.b * pyramid_generator(k, s, u);
            (k, v, rel_residual(v, common, 0.0))
        })
        .collect();
    let pass = residuals.iter().all(|r| r.2 <= tol);
    PyramidEqualities { common, residuals, pass }
}

/// Kind of residual measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ResidualKind {
    V,
    U,
}

/// Largest index of each residual kind.
pub fn residual_count(kind: ResidualKind) -> u8 {
    match kind {
        ResidualKind::V => 14,
        ResidualKind::U => 15,
    }
}

fn check_residual(kind: ResidualKind, t: u8) -> Result<()> {
    let n = residual_count(kind);
    if !(1..=n).contains(&t) {
        return Err(Error::Range(format!("{kind:?} index must be in 1..={n}, got {t}")));
    }
    Ok(())
}

/// Generator of `V_t`, `t ∈ 1..=14`.
///
/// `V₉` and `V₁₄` are normalized so that `V₉ = L + 16K − 16Δ − 8F` and
/// `V₁₄ = L + 4Ψ − 8F`; these are the normalizations under which the
/// residual identities and chains they enter hold.
pub fn v_generator<T: Scalar>(t: u8, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    let xp1 = x + one;
    let sp2 = (s + one) * (s + one);
    let s3 = s * x;
    let x2 = x * x;
    let u6 = u.powi(6);
    let u8 = u.powi(8);
    // x + 6√x + 1 and x² + 6x^{3/2} + 22x + 6√x + 1
    let q3 = poly(&[1.0, 6.0, 1.0], s);
    let q6 = poly(&[1.0, 6.0, 22.0, 6.0, 1.0], s);
    match t {
        1 => u6 / (s * xp1),
        2 => u8 / (x * xp1),
        3 => q3 * u6 / (x * xp1),
        4 => u6 / x,
        5 => sp2 * u8 / (s3 * xp1),
        6 => q6 * u6 / (s3 * xp1),
        7 => q3 * u6 / s3,
        8 => sp2 * u6 / s3,
        9 => sp2 * sp2 * u8 / (x2 * xp1),
        10 => poly(&[1.0, 6.0, 23.0, 68.0, 23.0, 6.0, 1.0], s) * u6 / (x2 * xp1),
        11 => q6 * u6 / x2,
        12 => sp2 * u8 / x2,
        13 => sp2 * poly(&[1.0, 4.0, 1.0], s) * u6 / x2,
        14 => xp1 * sp2 * u6 / x2,
        _ => panic!("V index {t} outside 1..=14"),
    }
}

/// Generator of `U_t`, `t ∈ 1..=15`.
pub fn u_generator<T: Scalar>(t: u8, s: T, u: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    let xp1 = x + one;
    let sp2 = (s + one) * (s + one);
    let s3 = s * x;
    let x2 = x * x;
    let u8 = u.powi(8);
    let u10 = u.powi(10);
    match t {
        1 => u8 / (x * xp1),
        2 => u8 / s3,
        3 => u8 * poly(&[2.0, 7.0, 2.0], s) / (s3 * xp1),
        4 => u8 * poly(&[9.0, 40.0, 86.0, 40.0, 9.0], s) / (x2 * xp1),
        5 => u8 * poly(&[1.0, 8.0, 38.0, 8.0, 1.0], s) / (x2 * xp1),
        6 => u8 * poly(&[1.0, 8.0, 1.0], s) / (s3 * xp1),
        7 => u8 * poly(&[1.0, -1.0, 1.0], s) / x2,
        8 => u8 * poly(&[1.0, 8.0, 1.0], s) / x2,
        9 => u8 * sp2 / x2,
        10 => u10 / (s3 * xp1),
        11 => sp2 * u10 / (x2 * xp1),
        12 => u10 * poly(&[11.0, -2.0, 11.0], s) / (x2 * xp1),
        13 => u10 / x2,
        14 => u10 * poly(&[1.0, 10.0, 1.0], s) / (x2 * xp1),
        15 => u.powi(12) / (x2 * xp1),
        _ => panic!("U index {t} outside 1..=15"),
    }
}

/// Generator of a residual measure.
pub fn residual_generator<T: Scalar>(kind: ResidualKind, t: u8, s: T, u: T) -> T {
    match kind {
        ResidualKind::V => v_generator(t, s, u),
        ResidualKind::U => u_generator(t, s, u),
    }
}

/// `V_t(a, b)`.
pub fn v(t: u8, pair: PositivePair) -> Result<f64> {
    check_residual(ResidualKind::V, t)?;
    let (s, u) = pair.su();
    Ok(pair.b * v_generator(t, s, u))
}

/// `U_t(a, b)`.
pub fn u(t: u8, pair: PositivePair) -> Result<f64> {
    check_residual(ResidualKind::U, t)?;
    let (s, uu) = pair.su();
    Ok(pair.b * u_generator(t, s, uu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discriminations::{base, BaseMeasureId::*};
    use crate::means::{mean_difference, MeanKind::*};

    fn p(a: f64, b: f64) -> PositivePair {
        PositivePair::new(a, b).unwrap()
    }

    #[test]
    fn w_spot_values() {
        let q = p(4.0, 1.0);
        assert!((w(1, q).unwrap() - 3.6).abs() < 1e-15);
        assert!((w(2, q).unwrap() - 384.0 / 105.0).abs() < 1e-15);
        assert!((w(5, q).unwrap() - 4.0).abs() < 1e-15);
        assert!((w(8, q).unwrap() - 7.03125).abs() < 1e-14);
        assert_eq!(w(9, p(2.0, 2.0)).unwrap(), 0.0);
        assert!(w(0, q).is_err() && w(10, q).is_err());
    }

    #[test]
    fn w_matches_its_defining_measures() {
        for &(a, b) in &[(4.0, 1.0), (0.2, 3.0), (50.0, 7.0)] {
            let q = p(a, b);
            let want = [
                2.0 * base(Triangular, q),
                24.0 / 7.0 * mean_difference(ContraHarmonic, Heronian, q).unwrap(),
                8.0 / 3.0 * mean_difference(ContraHarmonic, Geometric, q).unwrap(),
                24.0 / 5.0 * mean_difference(Centroidal, Geometric, q).unwrap(),
                8.0 * base(Hellinger, q),
                base(JainSrivastava, q),
                0.5 * base(SymmetricChiSquare, q),
                0.5 * base(KumarJohnson, q),
                0.125 * base(NewL, q),
            ];
            for (i, wv) in want.iter().enumerate() {
                let got = w(i as u8 + 1, q).unwrap();
                assert!(rel_residual(got, *wv, 0.0) < 1e-14, "W{} at ({a},{b})", i + 1);
            }
        }
    }

    #[test]
    fn w_second_derivatives_at_one() {
        for i in [1, 5, 8] {
            assert!((w_second_derivative(i, 1.0).unwrap() - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn pyramid_factored_matches_direct_subtraction() {
        for &(a, b) in &[(4.0, 1.0), (0.05, 3.0), (900.0, 2.0)] {
            let q = p(a, b);
            for k in 1..=36 {
                let (up, lo) = pyramid_index(k).unwrap();
                let direct = w(up, q).unwrap() - w(lo, q).unwrap();
                let scale = w(up, q).unwrap();
                let fact = pyramid_diff(k, q).unwrap();
                assert!(rel_residual(fact, direct, scale) < 1e-14, "D{k} at ({a},{b})");
            }
        }
    }

    #[test]
    fn pyramid_spot_values() {
        let q = p(4.0, 1.0);
        assert!((pyramid_diff(1, q).unwrap() - 4.0 / 70.0).abs() < 1e-16);
        assert!((pyramid_diff(10, q).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(pyramid_diff(36, p(3.0, 3.0)).unwrap(), 0.0);
        assert_eq!(pyramid_index(1).unwrap(), (2, 1));
        assert_eq!(pyramid_index(36).unwrap(), (9, 1));
        assert_eq!(pyramid_lookup(8, 6), Some(23));
        let eq = pyramid_equalities(q, 1e-15);
        assert!(eq.pass);
        assert!((eq.common - 0.2).abs() < 1e-16);
    }

    #[test]
    fn residual_spot_values() {
        let q = p(4.0, 1.0);
        assert!((v(1, q).unwrap() - 0.1).abs() < 1e-17);
        assert!((v(4, q).unwrap() - 0.25).abs() < 1e-17);
        assert!((u(1, q).unwrap() - 0.05).abs() < 1e-17);
        assert!((u(15, q).unwrap() - 0.0125).abs() < 1e-17);
        assert_eq!(v(9, p(2.0, 2.0)).unwrap(), 0.0);
        assert_eq!(u(13, p(2.0, 2.0)).unwrap(), 0.0);
        assert!(v(15, q).is_err() && u(16, q).is_err() && u(0, q).is_err());
    }

    #[test]
    fn v9_v14_normalization() {
        for &(a, b) in &[(4.0, 1.0), (0.3, 2.0)] {
            let q = p(a, b);
            let (l, k, d, f, psi) = (
                base(NewL, q),
                base(JainSrivastava, q),
                base(Triangular, q),
                base(KumarJohnson, q),
                base(SymmetricChiSquare, q),
            );
            assert!(rel_residual(v(9, q).unwrap(), l + 16.0 * k - 16.0 * d - 8.0 * f, l) < 1e-12);
            assert!(rel_residual(v(14, q).unwrap(), l + 4.0 * psi - 8.0 * f, l) < 1e-12);
        }
    }
}
