//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three parameter-explorable curves are exposed:
//!
//! * the `L_t` generator and the sign of its convexity polynomial `A₇(x, t)`,
//! * the second-derivative ratio `g(x) = f″_small(x)/f″_big(x)` behind each
//!   sharp constant β of the inequality cascade,
//! * the partial sums of the exponential series of a generating family
//!   against its closed form.
//!
//! Every curve is computed by a plain Rust function (tested natively) and
//! returned to JavaScript as a flat `Float64Array`.

use divcascade::analysis::{limit_at_one, second_derivative_ratio};
use divcascade::cascade::chains::to_f64;
use divcascade::cascade::parts::{all_parts, ProofPart};
use divcascade::discriminations::{a7, l_t};
use divcascade::generators::{exp_representation, exp_series_partial, T_MAX};
use divcascade::{FamilyId, Grid, PositivePair};
use wasm_bindgen::prelude::*;

/// Largest number of plotted points per curve.
pub const MAX_POINTS: usize = 4096;

/// `n` log-spaced abscissae on `[lo, hi]`.
fn log_axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(format!("need 0 < x_min < x_max, got [{lo}, {hi}]"));
    }
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("point count must lie in 2..={MAX_POINTS}, got {n}"));
    }
    Grid::log_spaced(lo, hi, n).map(|g| g.points().to_vec()).map_err(|e| e.to_string())
}

fn find_part(id: &str) -> Result<ProofPart, String> {
    all_parts().into_iter().find(|p| p.id() == id).ok_or_else(|| format!("unknown proof part {id:?}"))
}

/// Triples `(x, L_t(x, 1), A₇(x, t))` on a log axis.
pub fn lt_curve_values(t: i32, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let xs = log_axis(x_min, x_max, n)?;
    let mut out = Vec::with_capacity(3 * n);
    for x in xs {
        let pair = PositivePair::new(x, 1.0).map_err(|e| e.to_string())?;
        out.extend([x, l_t(t, pair).map_err(|e| e.to_string())?, a7(x, t)]);
    }
    Ok(out)
}

/// Pairs `(x, g(x))` of the second-derivative ratio of a proof part; the
/// removable point `x = 1` takes the limit value.
pub fn beta_curve_values(part: &str, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let p = find_part(part)?;
    let xs = log_axis(x_min, x_max, n)?;
    let g = |x: f64| second_derivative_ratio(p.small, p.big, x);
    let limit = limit_at_one(g);
    let mut out = Vec::with_capacity(2 * n);
    for x in xs {
        out.extend([x, if (x - 1.0).abs() < 1e-12 { limit } else { g(x) }]);
    }
    Ok(out)
}

/// `[β, lim_{x→1} g(x)]` for a proof part.
pub fn beta_summary(part: &str) -> Result<Vec<f64>, String> {
    let p = find_part(part)?;
    Ok(vec![to_f64(p.beta), limit_at_one(|x| second_derivative_ratio(p.small, p.big, x))])
}

/// Partial sums for `n = 0..=n_max` followed by the closed form.
pub fn series_values(family: &str, a: f64, b: f64, n_max: u32) -> Result<Vec<f64>, String> {
    let id = FamilyId::from_name(family).ok_or_else(|| format!("unknown family {family:?}"))?;
    if n_max > T_MAX {
        return Err(format!("at most {T_MAX} terms"));
    }
    let pair = PositivePair::new(a, b).map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = (0..=n_max).map(|n| exp_series_partial(id, pair, n)).collect();
    out.push(exp_representation(id, pair));
    Ok(out)
}

/// Proof-part ids, one per line, in table order.
pub fn part_list() -> String {
    all_parts().iter().map(|p| format!("{}\t{}", p.id(), p.statement())).collect::<Vec<_>>().join("\n")
}

/// Family names, one per line.
pub fn family_list() -> String {
    FamilyId::ALL.map(FamilyId::name).join("\n")
}

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lt_curve(t: i32, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    js(lt_curve_values(t, x_min, x_max, n))
}

#[wasm_bindgen]
pub fn beta_curve(part: &str, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    js(beta_curve_values(part, x_min, x_max, n))
}

#[wasm_bindgen]
pub fn beta_info(part: &str) -> Result<Vec<f64>, JsValue> {
    js(beta_summary(part))
}

#[wasm_bindgen]
pub fn series_partial_sums(family: &str, a: f64, b: f64, n_max: u32) -> Result<Vec<f64>, JsValue> {
    js(series_values(family, a, b, n_max))
}

#[wasm_bindgen]
pub fn parts() -> String {
    part_list()
}

#[wasm_bindgen]
pub fn families() -> String {
    family_list()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_hits_its_ends() {
        let xs = log_axis(0.01, 100.0, 5).unwrap();
        assert_eq!(xs.len(), 5);
        assert_eq!((xs[0], xs[4]), (0.01, 100.0));
        assert!((xs[2] - 1.0).abs() < 1e-15);
        assert!(log_axis(0.0, 1.0, 5).is_err());
        assert!(log_axis(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn lt_curve_vanishes_at_one() {
        let v = lt_curve_values(1, 0.1, 10.0, 3).unwrap();
        assert_eq!(v.len(), 9);
        assert!((v[3] - 1.0).abs() < 1e-15);
        assert!(v[4].abs() < 1e-25);
        assert!(v[5] > 0.0);
    }

    #[test]
    fn beta_curve_peaks_at_beta() {
        let first = all_parts()[0].id();
        let info = beta_summary(&first).unwrap();
        assert!((info[0] - info[1]).abs() < 1e-9);
        let v = beta_curve_values(&first, 0.01, 100.0, 201).unwrap();
        let sup = v.chunks(2).map(|c| c[1]).fold(f64::NEG_INFINITY, f64::max);
        assert!(sup <= info[0] + 1e-9);
        assert!(beta_curve_values("no.such", 0.5, 2.0, 3).is_err());
    }

    #[test]
    fn series_converge_to_closed_form() {
        for name in family_list().lines() {
            let v = series_values(name, 2.0, 1.0, 40).unwrap();
            let closed = v[v.len() - 1];
            assert!((v[v.len() - 2] - closed).abs() <= 1e-12 * closed.abs(), "{name}");
        }
        assert!(series_values("nope", 2.0, 1.0, 3).is_err());
    }
}
