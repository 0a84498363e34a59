//! Numeric plumbing shared by every measure.
//!
//! Every generator in the catalog is a rational function of `x = a/b` that
//! vanishes to even order at `x = 1`. Evaluating such functions as written
//! (e.g. `(x-1)^2/(x+1)`) throws away all significant digits near the
//! diagonal. Instead each generator is written in the two variables
//!
//! - `s = √x`, and
//! - `u = s − 1`, computed without cancellation as `(x−1)/(√x+1)`,
//!
//! with the vanishing factor `u^k` kept explicit. The [`Scalar`] trait lets
//! the same formula be evaluated either on plain `f64` or on a [`Jet`]
//! (second-order forward-mode automatic differentiation), which is how
//! analytic second derivatives `f″(x)` are obtained for every registered
//! generator.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Arithmetic needed by generator formulas.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// Lift a constant.
    fn cst(v: f64) -> Self;
    /// The primal value.
    fn value(self) -> f64;
    fn sqrt(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn exp(self) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn cst(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
}

/// Truncated Taylor jet `(f, f′, f″)` with respect to a single variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl Jet {
    /// The independent variable at `x`.
    pub fn var(x: f64) -> Self {
        Jet { v: x, d: 1.0, dd: 0.0 }
    }

    /// Apply a scalar function given its value and first two derivatives at `self.v`.
    #[inline]
    fn chain(self, g: f64, g1: f64, g2: f64) -> Self {
        Jet { v: g, d: g1 * self.d, dd: g2 * self.d * self.d + g1 * self.dd }
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: self.d + o.d, dd: self.dd + o.dd }
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d: self.d - o.d, dd: self.dd - o.dd }
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, o: Jet) -> Jet {
        Jet { v: self.v * o.v, d: self.d * o.v + self.v * o.d, dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, o: Jet) -> Jet {
        let q = self.v / o.v;
        let qd = (self.d - q * o.d) / o.v;
        let qdd = (self.dd - 2.0 * qd * o.d - q * o.dd) / o.v;
        Jet { v: q, d: qd, dd: qdd }
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: -self.d, dd: -self.dd }
    }
}

impl Scalar for Jet {
    #[inline]
    fn cst(v: f64) -> Self {
        Jet { v, d: 0.0, dd: 0.0 }
    }
    #[inline]
    fn value(self) -> f64 {
        self.v
    }
    fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }
    fn powi(self, n: i32) -> Self {
        match n {
            0 => Jet::cst(1.0),
            1 => self,
            _ => {
                let v = self.v;
                let nf = f64::from(n);
                self.chain(v.powi(n), nf * v.powi(n - 1), nf * (nf - 1.0) * v.powi(n - 2))
            }
        }
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
}

/// Double-double arithmetic (about 32 significant digits), used by the
/// finite-difference oracle so that the second difference of a nearly
/// linear generator keeps its digits.
/// Double-double number (about 32 significant digits) used to evaluate
/// generators where plain `f64` rounding would swamp a finite difference.
///
/// Wraps [`twofloat::TwoFloat`] and refines every quotient with one
/// correction step `q + (a − b·q)/b`, because the underlying division is only
/// accurate to roughly `f64` precision.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DoubleDouble(pub twofloat::TwoFloat);

impl DoubleDouble {
    /// The exact sum `a + b` of two doubles.
    pub fn sum(a: f64, b: f64) -> Self {
        DoubleDouble(twofloat::TwoFloat::new_add(a, b))
    }
}

impl From<DoubleDouble> for f64 {
    fn from(v: DoubleDouble) -> f64 {
        v.0.into()
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        DoubleDouble(self.0 + o.0)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        DoubleDouble(self.0 - o.0)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        DoubleDouble(self.0 * o.0)
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let q = self.0 / o.0;
        let r = self.0 - o.0 * q;
        DoubleDouble(q + r.hi() / o.0.hi())
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble(-self.0)
    }
}

impl Scalar for DoubleDouble {
    #[inline]
    fn cst(v: f64) -> Self {
        DoubleDouble(twofloat::TwoFloat::from(v))
    }
    #[inline]
    fn value(self) -> f64 {
        self.0.into()
    }
    fn sqrt(self) -> Self {
        // One Newton step on top of the library square root.
        let r = DoubleDouble(self.0.sqrt());
        if r.0.hi() == 0.0 {
            return r;
        }
        (r + self / r) * Self::cst(0.5)
    }
    fn powi(self, n: i32) -> Self {
        let mut acc = Self::cst(1.0);
        let mut base = self;
        let mut k = n.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        if n < 0 {
            Self::cst(1.0) / acc
        } else {
            acc
        }
    }
    fn exp(self) -> Self {
        DoubleDouble(self.0.exp())
    }
}

/// Double-double `(s, u)` coordinates of `x = x0 + dx`, formed exactly from
/// the two `f64` parts.
pub fn su_of_offset(x0: f64, dx: f64) -> (DoubleDouble, DoubleDouble) {
    let x = DoubleDouble::sum(x0, dx);
    let s = x.sqrt();
    let u = (DoubleDouble::sum(x0, -1.0) + DoubleDouble::cst(dx)) / (s + DoubleDouble::cst(1.0));
    (s, u)
}

/// `√x − 1` without cancellation, for `x > 0`.
#[inline]
pub fn sqrt_minus_one(x: f64) -> f64 {
    (x - 1.0) / (x.sqrt() + 1.0)
}

/// The `(s, u)` coordinates of a ratio `x`, with `u = √x − 1` accurate near 1.
/// `s` is taken from the square root itself rather than `1 + u`, which would
/// lose relative accuracy when `x` is small.
#[inline]
pub fn su_of_ratio(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    (s, (x - 1.0) / (s + 1.0))
}

/// The `(s, u)` coordinates of the ratio `a/b`. `u` is formed from `a − b`,
/// which is exact when `a` and `b` are within a factor of two, so no digits
/// are lost to the rounding of `a/b` on the diagonal.
#[inline]
pub fn su_of_pair(a: f64, b: f64) -> (f64, f64) {
    let s = (a / b).sqrt();
    let u = ((a - b) / b) / (s + 1.0);
    (s, u)
}

/// Jet coordinates `(s, u)` seeded at `x`, for second derivatives in `x`.
#[inline]
pub fn su_jet(x: f64) -> (Jet, Jet) {
    let s = Jet::var(x).sqrt();
    let u = Jet { v: sqrt_minus_one(x), ..s };
    (s, u)
}

/// Evaluate a polynomial `c[0] + c[1] s + c[2] s² + …` by Horner's rule.
#[inline]
pub fn poly<T: Scalar>(c: &[f64], s: T) -> T {
    let mut acc = T::cst(0.0);
    for &ci in c.iter().rev() {
        acc = acc * s + T::cst(ci);
    }
    acc
}

/// A pair of strictly positive reals `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PositivePair {
    pub a: f64,
    pub b: f64,
}

impl PositivePair {
    /// Validate and build a pair.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("a must be a positive finite real, got {a}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!("b must be a positive finite real, got {b}")));
        }
        Ok(PositivePair { a, b })
    }

    /// The swapped pair `(b, a)`.
    pub fn swap(self) -> Self {
        PositivePair { a: self.b, b: self.a }
    }

    /// Scale both components by `λ > 0`.
    pub fn scale(self, lambda: f64) -> Self {
        PositivePair { a: self.a * lambda, b: self.b * lambda }
    }

    /// The ratio `a/b`.
    pub fn ratio(self) -> f64 {
        self.a / self.b
    }

    /// The accurate `(s, u)` coordinates of `a/b`.
    pub fn su(self) -> (f64, f64) {
        su_of_pair(self.a, self.b)
    }
}

/// Relative residual `|lhs − rhs| / max(scale, |lhs|, |rhs|, 1e-300)`.
///
/// `scale` is the magnitude of the largest term that entered `lhs` or `rhs`
/// before any cancellation (pass 0 for a plain two-sided comparison).
pub fn rel_residual(lhs: f64, rhs: f64, scale: f64) -> f64 {
    let d = scale.abs().max(lhs.abs()).max(rhs.abs()).max(1e-300);
    (lhs - rhs).abs() / d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_matches_hand_derivatives() {
        // f(x) = x^3 / (1 + x) at x = 2: f = 8/3, f' = (3x^2(1+x) - x^3)/(1+x)^2 = 28/9.
        let x = Jet::var(2.0);
        let f = x.powi(3) / (Jet::cst(1.0) + x);
        assert!((f.v - 8.0 / 3.0).abs() < 1e-15);
        assert!((f.d - 28.0 / 9.0).abs() < 1e-14);
        // f'' = 2(x^3 + 3x^2 + 3x)/(1+x)^3 = 2·26/27
        assert!((f.dd - 52.0 / 27.0).abs() < 1e-14);
    }

    #[test]
    fn jet_sqrt_second_derivative() {
        let r = Jet::var(4.0).sqrt();
        assert_eq!(r.v, 2.0);
        assert!((r.d - 0.25).abs() < 1e-16);
        assert!((r.dd + 1.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn u_is_accurate_near_one() {
        let x = 1.0 + 1e-12;
        let u = sqrt_minus_one(x);
        // √(1+e) − 1 = e/2 − e²/8 + …, with e the exact offset stored in x.
        let e = x - 1.0;
        assert!(((u - (e / 2.0 - e * e / 8.0)) / u).abs() < 1e-15);
        let (s, u2) = su_of_pair(1.0 + 1e-12, 1.0);
        assert_eq!(u2, u);
        assert_eq!(s, 1.0 + u);
    }

    #[test]
    fn poly_horner() {
        assert_eq!(poly(&[1.0, 2.0, 3.0], 2.0), 17.0);
    }

    #[test]
    fn pair_validation() {
        assert!(PositivePair::new(0.0, 1.0).is_err());
        assert!(PositivePair::new(1.0, -1.0).is_err());
        assert!(PositivePair::new(f64::NAN, 1.0).is_err());
        assert!(PositivePair::new(1.0, f64::INFINITY).is_err());
        assert!(PositivePair::new(1.0, 2.0).is_ok());
    }

    #[test]
    fn residual_floor() {
        assert_eq!(rel_residual(0.0, 0.0, 0.0), 0.0);
        assert!((rel_residual(1.0, 1.1, 0.0) - 0.1 / 1.1).abs() < 1e-15);
    }
}
