//! Randomized algebraic invariants of affine maps and planar form
//! detection.

mod common;

use common::map2;
use ifslab::classify::{planar_classify, ASquareForm};
use ifslab::AffineMap;
use proptest::prelude::*;

/// Entries bounded away from the degenerate extremes so determinants and
/// fixed points stay well-conditioned.
fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![(-1.0f64..1.0), (-0.3f64..0.3)]
}

fn translation() -> impl Strategy<Value = f64> {
    -5.0f64..5.0
}

/// A random planar affine map, rescaled so its operator norm is at most
/// `0.9` (hence a contraction) and its determinant is nonzero.
fn contraction() -> impl Strategy<Value = AffineMap> {
    (
        entry(),
        entry(),
        entry(),
        entry(),
        translation(),
        translation(),
    )
        .prop_filter_map("degenerate linear part", |(a, b, c, d, tx, ty)| {
            let det = a * d - b * c;
            if det.abs() < 1e-3 {
                return None;
            }
            let raw = map2([a, b, c, d], [tx, ty]);
            let norm = raw.operator_norm();
            if !(norm.is_finite() && norm > 1e-6) {
                return None;
            }
            let s = 0.9 / norm.max(0.9);
            Some(map2([a * s, b * s, c * s, d * s], [tx, ty]))
        })
}

fn probe_points() -> [[f64; 2]; 3] {
    [[0.0, 0.0], [1.0, -2.0], [-3.5, 0.25]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative(f in contraction(), g in contraction(), h in contraction()) {
        let fg_h = AffineMap::compose(&AffineMap::compose(&f, &g).unwrap(), &h).unwrap();
        let f_gh = AffineMap::compose(&f, &AffineMap::compose(&g, &h).unwrap()).unwrap();
        for p in probe_points() {
            let a = fg_h.apply(&p);
            let b = f_gh.apply(&p);
            prop_assert!((a[0] - b[0]).abs() <= 1e-12 && (a[1] - b[1]).abs() <= 1e-12,
                "associativity drift at {p:?}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn composition_agrees_with_pointwise_application(f in contraction(), g in contraction()) {
        let fg = AffineMap::compose(&f, &g).unwrap();
        for p in probe_points() {
            let direct = f.apply(&g.apply(&p));
            let composed = fg.apply(&p);
            prop_assert!((direct[0] - composed[0]).abs() <= 1e-12
                && (direct[1] - composed[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn fixed_point_is_actually_fixed(f in contraction()) {
        let z = f.fixed_point().unwrap();
        let fz = f.apply(&z);
        let scale = 1.0 + z.iter().map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(
            ((fz[0] - z[0]).powi(2) + (fz[1] - z[1]).powi(2)).sqrt() <= 1e-9 * scale,
            "f(z) = {fz:?} but z = {z:?}"
        );
    }

    #[test]
    fn singular_values_multiply_to_the_determinant(f in contraction()) {
        let sv = f.singular_values();
        prop_assert_eq!(sv.len(), 2);
        prop_assert!(sv[0] >= sv[1], "descending order");
        let prod = sv[0] * sv[1];
        let det = f.det().abs();
        prop_assert!((prod - det).abs() <= 1e-10 * (1.0 + det),
            "sigma product {prod} vs |det| {det}");
    }

    #[test]
    fn operator_norm_dominates_image_stretch(f in contraction(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        // ||A v|| <= sigma_max ||v|| for the linear part.
        let origin = f.apply(&[0.0, 0.0]);
        let moved = f.apply(&[x, y]);
        let stretch = ((moved[0] - origin[0]).powi(2) + (moved[1] - origin[1]).powi(2)).sqrt();
        let vlen = (x * x + y * y).sqrt();
        prop_assert!(stretch <= f.operator_norm() * vlen + 1e-10);
    }

    #[test]
    fn negating_the_linear_part_preserves_the_square_form(f in contraction()) {
        // (−A)² = A², so the square-form classification must agree.
        let lin = f.linear();
        let neg = map2(
            [-lin.get(0, 0), -lin.get(0, 1), -lin.get(1, 0), -lin.get(1, 1)],
            [0.0, 0.0],
        );
        let partner = map2([0.5, 0.0, 0.0, 0.5], [1.0, 0.0]);
        let p_a = planar_classify(&f, &partner, 1e-9).unwrap();
        let p_n = planar_classify(&neg, &partner, 1e-9).unwrap();
        prop_assert_eq!(p_a.a_square_form, p_n.a_square_form);
        prop_assert!((p_a.c - p_n.c).abs() <= 1e-12);
        if p_a.a_square_form != ASquareForm::Neither {
            prop_assert!(p_a.c > 0.0);
        }
    }

    #[test]
    fn scaled_rotations_always_pass_the_similarity_test(
        theta in 0.0f64..std::f64::consts::TAU,
        r in 0.05f64..0.95,
        reflect in proptest::bool::ANY,
    ) {
        let (s, c) = theta.sin_cos();
        let entries = if reflect {
            [r * c, r * s, r * s, -r * c]
        } else {
            [r * c, -r * s, r * s, r * c]
        };
        let f = map2(entries, [0.3, -0.7]);
        let t = f.similarity_test(1e-9);
        prop_assert!(t.is_similarity, "rotation by {theta} scaled {r}");
        prop_assert!((t.ratio - r).abs() <= 1e-9 * (1.0 + r));
        prop_assert!(f.is_similarity_contraction());
    }

    #[test]
    fn squashed_maps_always_fail_the_similarity_test(
        theta in 0.0f64..std::f64::consts::TAU,
        r in 0.1f64..0.9,
        squash in 1.5f64..4.0,
    ) {
        // Distinct singular values r·squash and r/squash.
        let (s, c) = theta.sin_cos();
        let f = map2(
            [r * squash * c, -r / squash * s, r * squash * s, r / squash * c],
            [0.0, 0.0],
        );
        prop_assert!(!f.similarity_test(1e-9).is_similarity);
    }

    #[test]
    fn iterates_agree_with_repeated_composition(f in contraction(), n in 1usize..5) {
        let it = f.iterate(n).unwrap();
        let mut manual = f.clone();
        for _ in 1..n {
            manual = AffineMap::compose(&f, &manual).unwrap();
        }
        for p in probe_points() {
            let a = it.apply(&p);
            let b = manual.apply(&p);
            prop_assert!((a[0] - b[0]).abs() <= 1e-10 && (a[1] - b[1]).abs() <= 1e-10);
        }
    }
}
