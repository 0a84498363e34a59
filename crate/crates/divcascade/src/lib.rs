//! Mean-difference and triangular-discrimination divergence measures.
//!
//! The crate implements the seven classical means of two positive numbers,
//! the divergences built from their differences, the `W₁ … W₉` measure scale
//! with its 36 pairwise differences and the `V`/`U` residual measures that
//! certify each inequality step, six parametric generating families with
//! their exponential series, and an audit engine that checks every claimed
//! equality, inequality chain, convexity certificate and sharp constant
//! numerically.
//!
//! Every measure `M` is 1-homogeneous, `M(a, b) = b·f(a/b)`, and is evaluated
//! through its generator `f` in the coordinates `s = √x`, `u = √x − 1`, which
//! keeps the high-order zeros at `x = 1` free of cancellation.
//!
//! ```
//! use divcascade::{MeasureId, PositivePair};
//!
//! let pair = PositivePair::new(4.0, 1.0).unwrap();
//! let v1: MeasureId = "V1".parse().unwrap();
//! assert!((v1.eval(pair) - 0.1).abs() < 1e-15);
//! ```

// `!(x > 0.0)` is used throughout on purpose: unlike `x <= 0.0` it also
// rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod audit;
pub mod cascade;
pub mod discriminations;
pub mod distributions;
pub mod error;
pub mod generators;
pub mod means;
pub mod num;
pub mod registry;

pub use analysis::{CheckResult, Counterexample, Grid, SamplerConfig, Verdict};
pub use audit::{run_audit, AuditConfig, AuditReport, ChainSelection, Erratum};
pub use cascade::chains::ChainSpec;
pub use distributions::ProbVector;
pub use error::{Error, Result};
pub use generators::FamilyId;
pub use means::MeanKind;
pub use num::PositivePair;
pub use registry::MeasureId;
