use std::f64::consts::PI;

use cat0kit::comparison::{
    alexandrov_angle_estimate, alexandrov_lemma_signs, alexandrov_lemma_values,
    build_comparison_triangle, comparison_angle, default_scales,
};
use cat0kit::spaces::{make_space, SpaceSpec};
use cat0kit::{Curve, Interval, Point};
use proptest::prelude::*;

/// Three side lengths of a planar triangle with well-separated vertices.
fn sides() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.5..5.0f64, 0.5..5.0f64, 0.3..2.8f64).prop_map(|(a, b, theta)| {
        let c = (a * a + b * b - 2.0 * a * b * theta.cos()).sqrt();
        (a, b, c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn comparison_triangle_reproduces_sides((a, b, c) in sides()) {
        let t = build_comparison_triangle(a, b, c).unwrap();
        let got = [t.x().dist(t.y()), t.x().dist(t.z()), t.y().dist(t.z())];
        for (g, want) in got.iter().zip([a, b, c]) {
            prop_assert!((g - want).abs() <= 1e-12 * want, "{g} vs {want}");
        }
        prop_assert!(t.z().y >= 0.0);
    }

    #[test]
    fn law_of_cosines_round_trip((a, b, c) in sides()) {
        let theta = comparison_angle(a, b, c).unwrap();
        prop_assert!((0.0..=PI).contains(&theta));
        let back = (a * a + b * b - 2.0 * a * b * theta.cos()).sqrt();
        prop_assert!((back - c).abs() <= 1e-12 * (a + b));
    }

    #[test]
    fn alexandrov_lemma_signs_agree(
        dxz in 0.2..3.0f64,
        dzy in 0.2..3.0f64,
        dpz in 0.2..3.0f64,
        ux in 0.0..1.0f64,
        uy in 0.0..1.0f64,
    ) {
        // d(p, x) and d(p, y) anywhere their triangles with z allow.
        let dpx = (dxz - dpz).abs() + ux * (dxz + dpz - (dxz - dpz).abs());
        let dpy = (dzy - dpz).abs() + uy * (dzy + dpz - (dzy - dpz).abs());
        prop_assume!(dpx > 1e-3 && dpy > 1e-3);
        prop_assume!(dpx + dpy >= dxz + dzy);
        let (f, g) = alexandrov_lemma_values(dpx, dpy, dpz, dxz, dzy).unwrap();
        let (sf, sg) = alexandrov_lemma_signs(dpx, dpy, dpz, dxz, dzy).unwrap();
        // Right at the threshold the two rounded signs may straddle it.
        prop_assert!(sf == sg || f.abs() < 1e-6 || g.abs() < 1e-6, "{f} {g}");
        prop_assert!(f * g >= -1e-12);
    }

    #[test]
    fn angle_estimates_stay_in_range(a in 0.0..(2.0 * PI), b in 0.0..(2.0 * PI)) {
        let e2 = make_space(&SpaceSpec::euclidean(2)).unwrap();
        let ray = |phi: f64| Curve::from_fn(Interval::UNIT, move |t| Point::xy(t * phi.cos(), t * phi.sin()));
        let est = alexandrov_angle_estimate(&e2, &ray(a), &ray(b), &default_scales()).unwrap();
        prop_assert!((0.0..=PI).contains(&est.value));
        // Constant across scales up to the roundoff of a degenerate angle.
        let first = est.per_scale_sup[0];
        prop_assert!(est.per_scale_sup.iter().all(|s| (s - first).abs() < 1e-6));
    }
}

#[test]
fn tree_angles_are_constant_at_pi() {
    let space = make_space(&SpaceSpec::tripod()).unwrap();
    let leg =
        |e: usize| Curve::from_fn(Interval::UNIT, move |t| Point::Tree { edge: e, offset: t });
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let est = alexandrov_angle_estimate(&space, &leg(i), &leg(j), &default_scales()).unwrap();
        assert!(est.per_scale_sup.iter().all(|s| *s == PI));
    }
}
