//! The seven classical means of two positive numbers, their generating
//! functions, and the 21 nonnegative differences between them.
//!
//! | Mean | Symbol | `M(a,b)` | generator `f_M(x)` |
//! |------|--------|----------|--------------------|
//! | Harmonic | H | `2ab/(a+b)` | `2x/(x+1)` |
//! | Geometric | G | `√(ab)` | `√x` |
//! | Heronian | N | `(a+√(ab)+b)/3` | `(x+√x+1)/3` |
//! | Arithmetic | A | `(a+b)/2` | `(x+1)/2` |
//! | Centroidal | R | `2(a²+ab+b²)/(3(a+b))` | `2(x²+x+1)/(3(x+1))` |
//! | Root-mean-square | S | `√((a²+b²)/2)` | `√((x²+1)/2)` |
//! | Contra-harmonic | C | `(a²+b²)/(a+b)` | `(x²+1)/(x+1)` |
//!
//! with `M(a,b) = b·f_M(a/b)` and the ordering `H ≤ G ≤ N ≤ A ≤ R ≤ S ≤ C`.
//!
//! The differences `D_UV = U − V` vanish quadratically on the diagonal, so
//! they are evaluated in factored form `u²·P(s)/Q(s)` (see [`crate::num`]);
//! differences involving `S` are rationalized as `(S² − M²)/(S + M)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{poly, rel_residual, PositivePair, Scalar};

/// One of the seven means, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MeanKind {
    Harmonic,
    Geometric,
    Heronian,
    Arithmetic,
    Centroidal,
    RootMeanSquare,
    ContraHarmonic,
}

impl MeanKind {
    /// All seven means in increasing order.
    pub const ALL: [MeanKind; 7] = [
        MeanKind::Harmonic,
        MeanKind::Geometric,
        MeanKind::Heronian,
        MeanKind::Arithmetic,
        MeanKind::Centroidal,
        MeanKind::RootMeanSquare,
        MeanKind::ContraHarmonic,
    ];

    /// Single-letter symbol.
    pub fn symbol(self) -> char {
        match self {
            MeanKind::Harmonic => 'H',
            MeanKind::Geometric => 'G',
            MeanKind::Heronian => 'N',
            MeanKind::Arithmetic => 'A',
            MeanKind::Centroidal => 'R',
            MeanKind::RootMeanSquare => 'S',
            MeanKind::ContraHarmonic => 'C',
        }
    }

    /// Parse a single-letter symbol.
    pub fn from_symbol(c: char) -> Option<MeanKind> {
        MeanKind::ALL.into_iter().find(|k| k.symbol() == c)
    }

    /// Position in the ordering `H < G < N < A < R < S < C`.
    pub fn rank(self) -> usize {
        self as usize
    }
}

/// `M(a, b)` for the given mean.
pub fn mean(kind: MeanKind, pair: PositivePair) -> f64 {
    let (a, b) = (pair.a, pair.b);
    match kind {
        MeanKind::Harmonic => 2.0 * a * b / (a + b),
        MeanKind::Geometric => a.sqrt() * b.sqrt(),
        MeanKind::Heronian => (a + a.sqrt() * b.sqrt() + b) / 3.0,
        MeanKind::Arithmetic => 0.5 * (a + b),
        MeanKind::Centroidal => 2.0 * (a * a + a * b + b * b) / (3.0 * (a + b)),
        MeanKind::RootMeanSquare => a.hypot(b) * std::f64::consts::FRAC_1_SQRT_2,
        MeanKind::ContraHarmonic => (a * a + b * b) / (a + b),
    }
}

/// Generating function in the `s = √x` coordinate.
pub fn generator_s<T: Scalar>(kind: MeanKind, s: T) -> T {
    let one = T::cst(1.0);
    let x = s * s;
    match kind {
        MeanKind::Harmonic => T::cst(2.0) * x / (x + one),
        MeanKind::Geometric => s,
        MeanKind::Heronian => (x + s + one) / T::cst(3.0),
        MeanKind::Arithmetic => (x + one) / T::cst(2.0),
        MeanKind::Centroidal => T::cst(2.0) * (x * x + x + one) / (T::cst(3.0) * (x + one)),
        MeanKind::RootMeanSquare => ((x * x + one) / T::cst(2.0)).sqrt(),
        MeanKind::ContraHarmonic => (x * x + one) / (x + one),
    }
}

/// `f_M(x)`, with `M(a,b) = b·f_M(a/b)` and `f_M(1) = 1`.
pub fn mean_generator(kind: MeanKind, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("generator argument must be positive, got {x}")));
    }
    Ok(generator_s(kind, x.sqrt()))
}

/// Factored pieces `(P, Q)` with `D_UV = u²·P(s)/Q(s)`; for pairs involving
/// `S` the pieces give `S² − M²` (or `C² − S²`) instead.
fn diff_table(upper: MeanKind, lower: MeanKind) -> (&'static [f64], &'static [f64]) {
    use MeanKind::*;
    match (upper, lower) {
        (Geometric, Harmonic) => (&[0.0, 1.0], &[1.0, 0.0, 1.0]),
        (Heronian, Harmonic) => (&[1.0, 3.0, 1.0], &[3.0, 0.0, 3.0]),
        (Heronian, Geometric) => (&[1.0], &[3.0]),
        (Arithmetic, Harmonic) => (&[1.0, 2.0, 1.0], &[2.0, 0.0, 2.0]),
        (Arithmetic, Geometric) => (&[1.0], &[2.0]),
        (Arithmetic, Heronian) => (&[1.0], &[6.0]),
        (Centroidal, Harmonic) => (&[2.0, 4.0, 2.0], &[3.0, 0.0, 3.0]),
        (Centroidal, Geometric) => (&[2.0, 1.0, 2.0], &[3.0, 0.0, 3.0]),
        (Centroidal, Heronian) => (&[1.0, 1.0, 1.0], &[3.0, 0.0, 3.0]),
        (Centroidal, Arithmetic) => (&[1.0, 2.0, 1.0], &[6.0, 0.0, 6.0]),
        (RootMeanSquare, Harmonic) => (&[1.0, 2.0, 5.0, 8.0, 5.0, 2.0, 1.0], &[2.0, 0.0, 4.0, 0.0, 2.0]),
        (RootMeanSquare, Geometric) => (&[1.0, 2.0, 1.0], &[2.0]),
        (RootMeanSquare, Heronian) => (&[7.0, 10.0, 7.0], &[18.0]),
        (RootMeanSquare, Arithmetic) => (&[1.0, 2.0, 1.0], &[4.0]),
        (RootMeanSquare, Centroidal) => (&[1.0, 2.0, 5.0, 8.0, 5.0, 2.0, 1.0], &[18.0, 0.0, 36.0, 0.0, 18.0]),
        (ContraHarmonic, Harmonic) => (&[1.0, 2.0, 1.0], &[1.0, 0.0, 1.0]),
        (ContraHarmonic, Geometric) => (&[1.0, 1.0, 1.0], &[1.0, 0.0, 1.0]),
        (ContraHarmonic, Heronian) => (&[2.0, 3.0, 2.0], &[3.0, 0.0, 3.0]),
        (ContraHarmonic, Arithmetic) => (&[1.0, 2.0, 1.0], &[2.0, 0.0, 2.0]),
        (ContraHarmonic, Centroidal) => (&[1.0, 2.0, 1.0], &[3.0, 0.0, 3.0]),
        (ContraHarmonic, RootMeanSquare) => (&[1.0, 2.0, 1.0, 0.0, 1.0, 2.0, 1.0], &[2.0, 0.0, 4.0, 0.0, 2.0]),
        _ => unreachable!("diff_table called with a non-ordered pair"),
    }
}

/// Generator of `D_UV` in `(s, u)` coordinates. Requires `upper > lower`.
pub fn difference_generator<T: Scalar>(upper: MeanKind, lower: MeanKind, s: T, u: T) -> T {
    debug_assert!(upper > lower);
    let (p, q) = diff_table(upper, lower);
    let core = u * u * poly(p, s) / poly(q, s);
    let rms = MeanKind::RootMeanSquare;
    if upper == rms || lower == rms {
        core / (generator_s(upper, s) + generator_s(lower, s))
    } else {
        core
    }
}

fn check_order(upper: MeanKind, lower: MeanKind) -> Result<()> {
    if upper <= lower {
        return Err(Error::Precondition(format!(
            "D_{}{} requires {} > {} in the ordering H<G<N<A<R<S<C",
            upper.symbol(),
            lower.symbol(),
            upper.symbol(),
            lower.symbol()
        )));
    }
    Ok(())
}

/// `D_UV(a, b) = U(a,b) − V(a,b) ≥ 0`; rejects `upper ≤ lower`.
pub fn mean_difference(upper: MeanKind, lower: MeanKind, pair: PositivePair) -> Result<f64> {
    check_order(upper, lower)?;
    let (s, u) = pair.su();
    Ok(pair.b * difference_generator(upper, lower, s, u))
}

/// All 21 ordered pairs `(upper, lower)`, grouped by upper mean.
pub fn all_difference_pairs() -> Vec<(MeanKind, MeanKind)> {
    let mut out = Vec::with_capacity(21);
    for (i, &up) in MeanKind::ALL.iter().enumerate() {
        for &lo in &MeanKind::ALL[..i] {
            out.push((up, lo));
        }
    }
    out
}

/// Outcome of one exact identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResult {
    pub id: String,
    pub residual: f64,
    pub pass: bool,
}

/// Weighted sum of mean values, with the magnitude of the largest term.
fn weighted(pair: PositivePair, terms: &[(f64, MeanKind)]) -> (f64, f64) {
    let mut sum = 0.0;
    let mut scale: f64 = 0.0;
    for &(c, k) in terms {
        let t = c * mean(k, pair);
        sum += t;
        scale = scale.max(t.abs());
    }
    (sum, scale)
}

/// A linear relation `Σ cᵢ·Mᵢ = Σ dⱼ·Mⱼ` among means, with its id.
pub type MeanRelation = (&'static str, Vec<(f64, MeanKind)>, Vec<(f64, MeanKind)>);

/// The linear relations among the seven means, `(id, lhs, rhs)`.
pub fn proportionality_relations() -> Vec<MeanRelation> {
    use MeanKind::{
        Arithmetic as A, Centroidal as R, ContraHarmonic as C, Geometric as G, Harmonic as H, Heronian as N,
    };
    vec![
        ("proportion.1a", vec![(4.0, A)], vec![(2.0, C), (2.0, H)]),
        ("proportion.1b", vec![(4.0, A)], vec![(3.0, R), (1.0, H)]),
        ("proportion.2a", vec![(3.0, R)], vec![(1.0, C), (2.0, A)]),
        ("proportion.2b", vec![(3.0, R)], vec![(2.0, C), (1.0, H)]),
        ("proportion.3", vec![(3.0, N)], vec![(2.0, A), (1.0, G)]),
        ("proportion.4", vec![(3.0, C), (2.0, H)], vec![(3.0, R), (2.0, A)]),
        ("proportion.5", vec![(1.0, C), (6.0, A)], vec![(1.0, H), (6.0, R)]),
        ("proportion.6", vec![(1.0, C), (3.0, N)], vec![(1.0, G), (3.0, R)]),
        ("proportion.7", vec![(3.0, N), (2.0, A)], vec![(2.0, C), (2.0, H), (1.0, G)]),
        ("proportion.8", vec![(27.0, R), (2.0, G)], vec![(14.0, A), (9.0, C), (6.0, N)]),
        ("proportion.9", vec![(3.0, N), (9.0, R)], vec![(8.0, A), (3.0, C), (1.0, G)]),
        ("proportion.10", vec![(3.0, G), (8.0, H), (9.0, C)], vec![(3.0, R), (8.0, A), (9.0, N)]),
        ("proportion.11", vec![(4.0, G), (14.0, H), (17.0, C)], vec![(9.0, R), (14.0, A), (12.0, N)]),
        ("proportion.12", vec![(5.0, G), (24.0, H), (31.0, C)], vec![(21.0, R), (24.0, A), (15.0, N)]),
    ]
}

/// Right-hand side of a difference equality.
#[derive(Debug, Clone, Copy)]
enum DiffTarget {
    Triangular,
    Hellinger,
    ThreeRn,
}

/// The equalities among mean differences: each entry is `(id, coefficient,
/// upper, lower, target)` asserting `coefficient·D_UV = target`, where the
/// target is triangular discrimination Δ, Hellinger h, or `3·D_RN`.
fn difference_equalities() -> Vec<(&'static str, f64, MeanKind, MeanKind, DiffTarget)> {
    use DiffTarget::*;
    use MeanKind::{
        Arithmetic as A, Centroidal as R, ContraHarmonic as C, Geometric as G, Harmonic as H, Heronian as N,
    };
    vec![
        ("difference.delta.CR", 3.0, C, R, Triangular),
        ("difference.delta.AH", 2.0, A, H, Triangular),
        ("difference.delta.CA", 2.0, C, A, Triangular),
        ("difference.delta.CH", 1.0, C, H, Triangular),
        ("difference.delta.RA", 6.0, R, A, Triangular),
        ("difference.delta.RH", 1.5, R, H, Triangular),
        ("difference.hellinger.AN", 3.0, A, N, Hellinger),
        ("difference.hellinger.AG", 1.0, A, G, Hellinger),
        ("difference.hellinger.NG", 1.5, N, G, Hellinger),
        ("difference.CG", 1.0, C, G, ThreeRn),
    ]
}

/// Evaluate every difference equality and mean proportionality relation at
/// `pair`. Residuals are relative: `|lhs − rhs| / max(largest term, 1e-300)`.
pub fn verify_mean_identities(pair: PositivePair, tol: f64) -> Vec<IdentityResult> {
    let mut out = Vec::new();
    let (s, u) = pair.su();
    let b = pair.b;
    let delta = b * crate::discriminations::base_generator(crate::discriminations::BaseMeasureId::Triangular, s, u);
    let hell = b * crate::discriminations::base_generator(crate::discriminations::BaseMeasureId::Hellinger, s, u);
    let three_rn = 3.0 * b * difference_generator(MeanKind::Centroidal, MeanKind::Heronian, s, u);
    for (id, c, up, lo, target) in difference_equalities() {
        let lhs = c * b * difference_generator(up, lo, s, u);
        let rhs = match target {
            DiffTarget::Triangular => delta,
            DiffTarget::Hellinger => hell,
            DiffTarget::ThreeRn => three_rn,
        };
        let residual = rel_residual(lhs, rhs, 0.0);
        out.push(IdentityResult { id: id.to_string(), residual, pass: residual <= tol });
    }
    for (id, lhs, rhs) in proportionality_relations() {
        let (l, ls) = weighted(pair, &lhs);
        let (r, rs) = weighted(pair, &rhs);
        let residual = rel_residual(l, r, ls.max(rs));
        out.push(IdentityResult { id: id.to_string(), residual, pass: residual <= tol });
    }
    out
}
