//! Property-based checks of the invariants every measure and claim must
//! satisfy, on random pairs drawn log-uniformly and near the diagonal.

use divcascade::analysis::{chain_violation, sample_distribution_pairs};
use divcascade::audit::{
    alias_identities, anchor_identities, decomposition_identity, difference_identities, lt_monotone_chain,
    proportion_identities, pyramid_identities,
};
use divcascade::cascade::chains;
use divcascade::cascade::parts::all_parts;
use divcascade::distributions::divergence;
use divcascade::generators::{family, step_ratio_generator};
use divcascade::means::verify_mean_identities;
use divcascade::{FamilyId, MeasureId, PositivePair};
use proptest::prelude::*;

fn pair_from(la: f64, lb: f64) -> PositivePair {
    PositivePair::new(10f64.powf(la), 10f64.powf(lb)).unwrap()
}

/// Log-uniform on `[1e-6, 1e6]²`, or a pair within `1e-3` relative of the
/// diagonal.
fn pairs() -> impl Strategy<Value = PositivePair> {
    prop_oneof![
        4 => (-6.0..6.0f64, -6.0..6.0f64).prop_map(|(la, lb)| pair_from(la, lb)),
        1 => (-6.0..6.0f64, -1e-3..1e-3f64).prop_map(|(lb, d)| {
            let b = 10f64.powf(lb);
            PositivePair::new(b * (1.0 + d), b).unwrap()
        }),
    ]
}

fn rel(l: f64, r: f64) -> f64 {
    (l - r).abs() / l.abs().max(r.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn catalog_is_symmetric(p in pairs()) {
        for m in MeasureId::catalog() {
            let (ab, ba) = (m.eval(p), m.eval(p.swap()));
            prop_assert!(rel(ab, ba) <= 1e-12, "{m}: {ab} vs {ba}");
        }
    }

    #[test]
    fn catalog_is_one_homogeneous(la in -5.0..5.0f64, lx in 0.01..3.0f64, sign in prop::bool::ANY, ll in -3.0..3.0f64) {
        // The ratio a/b is kept exact so that only the scale changes.
        let x = 10f64.powf(if sign { lx } else { -lx });
        let b = 10f64.powf(la);
        let lambda = 10f64.powf(ll);
        let p = PositivePair::new(x * b, b).unwrap();
        let scaled = PositivePair::new(x * (b * lambda), b * lambda).unwrap();
        for m in MeasureId::catalog() {
            let (v, w) = (m.eval(p), m.eval(scaled));
            prop_assert!(rel(lambda * v, w) <= 1e-12, "{m}: {v}·{lambda} vs {w}");
        }
    }

    #[test]
    fn divergences_are_nonnegative_and_vanish_on_the_diagonal(p in pairs()) {
        for m in MeasureId::catalog().into_iter().filter(|m| m.is_divergence()) {
            prop_assert!(m.eval(p) >= 0.0, "{m} negative at {p:?}");
            prop_assert_eq!(m.eval(PositivePair::new(p.a, p.a).unwrap()), 0.0);
        }
    }

    #[test]
    fn catalog_chains_hold(p in pairs()) {
        let mut all = chains::catalog();
        all.push(lt_monotone_chain());
        for c in &all {
            let (v, link) = chain_violation(c, p);
            prop_assert!(v <= 1e-12, "chain {} link {link}: {v} at {p:?}", c.id);
        }
    }

    #[test]
    fn printed_pyramid_and_reversed_scale_are_refuted_somewhere(la in -1.0..1.0f64) {
        // Away from the diagonal both wrong claims fail at every pair tried.
        let p = pair_from(la + 1.5, la);
        prop_assert!(chain_violation(&chains::w_scale_reversed(), p).0 > 1e-6);
        prop_assert!(chain_violation(&chains::pyramid_as_printed(), p).0 > 1e-6);
    }

    #[test]
    fn mean_identities_hold(p in pairs()) {
        for r in verify_mean_identities(p, 1e-12) {
            prop_assert!(r.pass, "{} residual {}", r.id, r.residual);
        }
    }

    #[test]
    fn linear_identities_hold(p in pairs()) {
        let groups = [
            difference_identities(),
            proportion_identities(),
            pyramid_identities(),
            anchor_identities(),
            alias_identities(),
            all_parts().iter().map(decomposition_identity).collect(),
        ];
        for id in groups.iter().flatten() {
            let r = id.residual(p);
            prop_assert!(r <= 1e-11, "{}: residual {r} at {p:?}", id.id);
        }
    }

    #[test]
    fn family_step_ratio_is_constant_in_t(lx in -1.0..1.0f64, b in 0.01..100.0f64) {
        let p = PositivePair::new(10f64.powf(lx) * b, b).unwrap();
        prop_assume!((p.a / p.b - 1.0).abs() > 1e-3);
        let (s, u) = p.su();
        for id in FamilyId::ALL {
            let r = step_ratio_generator(id, s, u);
            for t in 0..8 {
                let (f0, f1) = (family(id, t, p).unwrap(), family(id, t + 1, p).unwrap());
                prop_assert!(rel(f1 / f0, r) <= 1e-12, "{id:?} t={t}: {} vs {r}", f1 / f0);
            }
        }
    }

    #[test]
    fn distribution_form_is_symmetric(seed in any::<u64>()) {
        let (p, q) = sample_distribution_pairs(1, seed).pop().unwrap();
        for m in MeasureId::catalog().into_iter().filter(|m| m.is_divergence()) {
            let (pq, qp) = (divergence(m, &p, &q).unwrap(), divergence(m, &q, &p).unwrap());
            prop_assert!(rel(pq, qp) <= 1e-12, "{m}: {pq} vs {qp}");
            prop_assert!(pq >= 0.0);
            prop_assert_eq!(divergence(m, &p, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn distribution_chains_hold(seed in any::<u64>()) {
        let (p, q) = sample_distribution_pairs(1, seed).pop().unwrap();
        for c in chains::catalog() {
            let (v, link) = divcascade::analysis::chain_violation_with(&c, |m| divergence(m, &p, &q).unwrap());
            prop_assert!(v <= 1e-12, "chain {} link {link}: {v}", c.id);
        }
    }
}
