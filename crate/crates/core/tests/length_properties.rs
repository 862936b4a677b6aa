use cat0kit::length::{curve_length, length_metric_estimate, polygonal_length, Extended};
use cat0kit::spaces::{make_space, SpaceSpec};
use cat0kit::{Curve, Interval, Partition, Point};
use proptest::prelude::*;

fn wiggle(a: f64, b: f64, c: f64) -> Curve {
    Curve::from_fn(Interval::UNIT, move |t| {
        Point::xy(a * t + (b * t).sin(), c * t * t - (3.0 * t).cos())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_never_shortens(a in -3.0..3.0f64, b in -5.0..5.0f64, c in -3.0..3.0f64, depth in 0u32..8) {
        let e2 = make_space(&SpaceSpec::euclidean(2)).unwrap();
        let curve = wiggle(a, b, c);
        let coarse = Partition::dyadic(Interval::UNIT, depth);
        let fine = coarse.refined();
        let lc = polygonal_length(&e2, &curve, &coarse).unwrap();
        let lf = polygonal_length(&e2, &curve, &fine).unwrap();
        prop_assert!(lf >= lc * (1.0 - 1e-12));
    }

    #[test]
    fn length_bounds_and_reversal(a in -3.0..3.0f64, b in -5.0..5.0f64, c in -3.0..3.0f64) {
        let e2 = make_space(&SpaceSpec::euclidean(2)).unwrap();
        let curve = wiggle(a, b, c);
        let est = curve_length(&e2, &curve, 1e-9, 24).unwrap();
        let coarse = polygonal_length(&e2, &curve, &Partition::dyadic(Interval::UNIT, 3)).unwrap();
        prop_assert!(coarse <= est.lower_bound * (1.0 + 1e-12));
        let (p, q) = curve.endpoints().unwrap();
        prop_assert!(est.lower_bound >= e2.distance(&p, &q).unwrap() * (1.0 - 1e-12));
        let rev = curve_length(&e2, &curve.reversed(), 1e-9, 24).unwrap();
        prop_assert!((rev.lower_bound - est.lower_bound).abs() <= 1e-8 * est.lower_bound.max(1.0));
    }

    #[test]
    fn geodesics_have_length_equal_to_distance(seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for spec in [SpaceSpec::euclidean(3), SpaceSpec::tripod(), SpaceSpec::product_with_line(SpaceSpec::tripod(), 2.0)] {
            let space = make_space(&spec).unwrap();
            let (x, y) = (space.sample(&mut rng).unwrap(), space.sample(&mut rng).unwrap());
            let est = curve_length(&space, &space.geodesic(&x, &y).unwrap(), 1e-9, 24).unwrap();
            let d = space.distance(&x, &y).unwrap();
            prop_assert!((est.lower_bound - d).abs() <= 1e-8 * d.max(1.0), "{spec:?}");
        }
    }

    #[test]
    fn length_metric_is_subadditive_under_concatenation(
        x in (-1.0..1.0f64, 0.1..1.0f64),
        y in (-1.0..1.0f64, -1.0..-0.1f64),
        z in (-1.0..1.0f64, 0.1..1.0f64),
    ) {
        let plane = make_space(&SpaceSpec::punctured_plane()).unwrap();
        let (x, y, z) = (Point::xy(x.0, x.1), Point::xy(y.0, y.1), Point::xy(z.0, z.1));
        let xy = plane.candidate_curves(&x, &y).unwrap();
        let yz = plane.candidate_curves(&y, &z).unwrap();
        let mut xz = plane.candidate_curves(&x, &z).unwrap();
        for a in &xy {
            for b in &yz {
                let b = b.affine_onto(Interval::new(1.0, 2.0).unwrap()).unwrap();
                xz.push(a.concat(&b, &plane, 1e-12).unwrap());
            }
        }
        let sum = match (
            length_metric_estimate(&plane, &x, &y, &xy, 1e-9).unwrap(),
            length_metric_estimate(&plane, &y, &z, &yz, 1e-9).unwrap(),
        ) {
            (Extended::Finite(a), Extended::Finite(b)) => a + b,
            other => panic!("{other:?}"),
        };
        let direct = length_metric_estimate(&plane, &x, &z, &xz, 1e-9).unwrap().finite().unwrap();
        prop_assert!(direct <= sum * (1.0 + 1e-9));
    }
}
