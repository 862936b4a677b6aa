//! End-to-end acceptance criteria. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use cat0kit::cat0::{
    approx_midpoint_bound, approx_midpoint_closeness_check, approx_midpoint_delta,
    cat0_triangle_check, convexity_check, equivalent_condition_check, flatness_detect,
    four_point_scan, project_to_convex, Characterization, FlatnessInput, GeodesicSegment,
};
use cat0kit::comparison::{
    alexandrov_lemma_signs, build_comparison_triangle, comparison_point, default_scales,
    GeodesicTriangle, Side,
};
use cat0kit::geodesic::{dyadic_geodesic, midpoint_limit};
use cat0kit::length::{is_length_space_sample, length_metric_estimate, CandidatePair};
use cat0kit::rng::stream_rng;
use cat0kit::spaces::{punctured_detour, random_tree_edges, CircleMetric, TreeEdge};
use cat0kit::{make_space, Curve, Error, Interval, Point, SpaceHandle, SpaceSpec, Status};
use cat0kit_cli::{emit_report, run_suite, OutputFormat, Suite, SuiteConfig};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn space(spec: SpaceSpec) -> SpaceHandle {
    make_space(&spec).expect("fixture spec is valid")
}

fn arc_circle() -> SpaceHandle {
    space(SpaceSpec::circle(CircleMetric::Arc, 2.0 * PI))
}

fn leaf(edge: usize) -> Point {
    Point::Tree { edge, offset: 1.0 }
}

fn model_space_equality() -> Outcome {
    let e2 = space(SpaceSpec::euclidean(2));
    let grid = 9;
    let mut rng = stream_rng(1, 0);
    let mut worst = 0.0f64;
    let mut elapsed = Duration::ZERO;
    for _ in 0..200 {
        let v: Vec<Point> = (0..3).map(|_| e2.sample(&mut rng).unwrap()).collect();
        let tri = GeodesicTriangle::from_vertices(&e2, v[0].clone(), v[1].clone(), v[2].clone())
            .map_err(err)?;
        let started = Instant::now();
        let verdict = cat0_triangle_check(&e2, &tri, grid, 1e-9).map_err(err)?;
        elapsed += started.elapsed();
        ensure(verdict.passed(), || {
            format!("triangle {v:?} failed: {verdict:?}")
        })?;
        // Both directions of the inequality, pair by pair.
        let [a, b, c] = tri.side_lengths(&e2).map_err(err)?;
        let cmp = build_comparison_triangle(a, b, c).map_err(err)?;
        let mut pts = Vec::new();
        for (side, curve) in tri.sides.iter().enumerate() {
            for k in 0..grid {
                let f = k as f64 / (grid - 1) as f64;
                let bar = match side {
                    0 => comparison_point(&cmp, Side::XY, f * a),
                    1 => comparison_point(&cmp, Side::YZ, f * c),
                    _ => comparison_point(&cmp, Side::XZ, (1.0 - f) * b),
                }
                .map_err(err)?;
                pts.push((curve.eval_fraction(f).map_err(err)?, bar));
            }
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let gap = e2.distance(&pts[i].0, &pts[j].0).map_err(err)? - pts[i].1.dist(pts[j].1);
                worst = worst.max(gap.abs());
            }
        }
    }
    ensure(worst <= 1e-9, || format!("|slack| reached {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "max |slack| {worst:.1e} over 200 triangles in {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn circle_refutation() -> Outcome {
    let circle = arc_circle();
    let v = |k: f64| Point::Angle(2.0 * PI * k / 3.0);
    let tri = GeodesicTriangle::from_vertices(&circle, v(0.0), v(1.0), v(2.0)).map_err(err)?;
    let verdict = cat0_triangle_check(&circle, &tri, 3, 1e-9).map_err(err)?;
    ensure(verdict.failed(), || "equilateral triangle passed".into())?;
    // Midpoints of sides 0 and 1 are 2π/3 apart; their comparison points π/3.
    let midpair = verdict
        .witnesses
        .iter()
        .find(|w| w.params == [0.0, 0.5, 1.0, 0.5])
        .ok_or("no witness for the midpoint pair")?;
    let gap = 2.0 * PI / 3.0 - PI / 3.0;
    ensure(midpair.magnitude >= gap - 1e-6, || {
        format!("midpoint violation {}", midpair.magnitude)
    })?;
    let scan = four_point_scan(&circle, 2, 500, 1e-9).map_err(err)?;
    ensure(!scan.witnesses.is_empty(), || {
        "four-point scan found nothing".into()
    })?;
    Ok(format!(
        "midpoint violation {:.9} >= pi/3 - 1e-6; four-point scan: {} witnesses, worst {:.3}",
        midpair.magnitude,
        scan.witnesses.len(),
        scan.worst_slack
    ))
}

/// Half of the circle as a `2^14`-segment polygon through angles `kπ/2^14`.
fn half_circle_polygon() -> Curve {
    let n = 1usize << 14;
    let samples = (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            (t, Point::Angle(PI * t))
        })
        .collect();
    Curve::polyline(samples).expect("increasing parameters")
}

fn chord_versus_arc() -> Outcome {
    let pair = || CandidatePair {
        x: Point::Angle(0.0),
        y: Point::Angle(PI),
        curves: vec![half_circle_polygon()],
    };
    let chord = space(SpaceSpec::circle(CircleMetric::Chord, 2.0 * PI));
    let v = is_length_space_sample(&chord, &[pair()], 1e-9, 20).map_err(err)?;
    ensure(v.failed(), || format!("chord circle did not fail: {v:?}"))?;
    let gap = v.witnesses[0].magnitude;
    ensure((gap - (PI - 2.0)).abs() <= 1e-3, || {
        format!("gap {gap}, expected pi - 2")
    })?;
    let arc = is_length_space_sample(&arc_circle(), &[pair()], 1e-9, 20).map_err(err)?;
    ensure(arc.passed(), || format!("arc circle did not pass: {arc:?}"))?;
    Ok(format!(
        "chord gap {gap:.9} (pi - 2 = {:.9}); arc PASS",
        PI - 2.0
    ))
}

fn punctured_plane() -> Outcome {
    let plane = space(SpaceSpec::punctured_plane());
    let (x, y) = (Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0));
    let mut prev = f64::INFINITY;
    let mut last = f64::NAN;
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let c = punctured_detour(&x, &y, eps).map_err(err)?;
        let l = length_metric_estimate(&plane, &x, &y, &[c], 1e-9)
            .map_err(err)?
            .finite()
            .ok_or("infinite")?;
        ensure(l >= 2.0 - 1e-12 && l <= prev + 1e-12, || {
            format!("estimate {l} after {prev}")
        })?;
        prev = l;
        last = l;
    }
    ensure((last - 2.0).abs() <= 1e-3, || format!("estimate {last}"))?;
    let built_in = plane.candidate_curves(&x, &y).map_err(err)?;
    let best = length_metric_estimate(&plane, &x, &y, &built_in, 1e-9)
        .map_err(err)?
        .finite()
        .ok_or("infinite")?;
    ensure((best - 2.0).abs() <= 1e-3, || {
        format!("built-in detours give {best}")
    })?;
    let schedule: Vec<f64> = (1..=60).map(|j| 0.5f64.powi(j)).collect();
    match midpoint_limit(&plane, &x, &y, &schedule, 1e-3, 4000, 5) {
        Err(Error::Incomplete { .. }) => {}
        other => return Err(format!("midpoint limit returned {other:?}")),
    }
    Ok(format!(
        "length estimate {last:.9}, built-in detours {best:.9}; midpoint limit incomplete"
    ))
}

fn dyadic_lipschitz() -> Outcome {
    let fixtures = [
        (
            space(SpaceSpec::euclidean(2)),
            vec![
                (Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)),
                (Point::xy(-0.7, 0.2), Point::xy(0.9, -0.4)),
            ],
        ),
        (
            space(SpaceSpec::tripod()),
            vec![
                (leaf(0), leaf(1)),
                (
                    Point::Tree {
                        edge: 2,
                        offset: 0.3,
                    },
                    leaf(0),
                ),
            ],
        ),
    ];
    let mut curves = 0;
    for (s, pairs) in &fixtures {
        for (x, y) in pairs {
            let d = s.distance(x, y).map_err(err)?;
            for eps in [1e-2, 1e-4] {
                for depth in 1..=8u32 {
                    let sigma = dyadic_geodesic(s, x, y, depth, eps, 200, 3).map_err(err)?;
                    let n = 1usize << depth;
                    let pts: Vec<Point> = (0..=n)
                        .map(|k| sigma.eval(k as f64 / n as f64))
                        .collect::<Result<_, _>>()
                        .map_err(err)?;
                    for i in 0..=n {
                        for j in i + 1..=n {
                            let lhs = s.distance(&pts[i], &pts[j]).map_err(err)?;
                            let rhs = (d + eps) * (j - i) as f64 / n as f64 + 1e-9;
                            ensure(lhs <= rhs, || {
                                format!(
                                    "{}: depth {depth}, pair ({i},{j}): {lhs} > {rhs}",
                                    s.kind()
                                )
                            })?;
                        }
                    }
                    curves += 1;
                }
            }
        }
    }
    Ok(format!(
        "{curves} dyadic curves, every grid pair within the bound"
    ))
}

fn approximate_midpoints() -> Outcome {
    let e2 = space(SpaceSpec::euclidean(2));
    let (x, y, m) = (
        Point::xy(0.0, 0.0),
        Point::xy(2.0, 0.0),
        Point::xy(1.0, 0.0),
    );
    let bound = 1.25f64.sqrt();
    ensure(
        (approx_midpoint_bound(0.5, 2.0) - bound).abs() < 1e-15,
        || "bound formula".into(),
    )?;
    // Uniform draws from the lens of 0.5-midpoints, measured directly.
    let mut rng = stream_rng(6, 0);
    let (mut drawn, mut far) = (0, 0.0f64);
    while drawn < 10_000 {
        let z = Point::xy(rng.gen_range(0.0..2.0), rng.gen_range(-1.5..1.5));
        let reach = e2
            .distance(&x, &z)
            .unwrap()
            .max(e2.distance(&y, &z).unwrap());
        if reach <= 1.5 {
            drawn += 1;
            far = far.max(e2.distance(&m, &z).unwrap());
        }
    }
    ensure(far <= bound + 1e-9, || format!("lens sample at {far}"))?;
    // Boundary search for tightness.
    let v = approx_midpoint_closeness_check(&e2, &x, &y, 0.5, 10_000, 6, 1e-9).map_err(err)?;
    ensure(v.passed() && v.checks == 10_000, || format!("{v:?}"))?;
    let reached = bound + v.worst_slack;
    ensure(reached > bound - 1e-2, || {
        format!("sampled maximum only {reached}")
    })?;
    let delta = approx_midpoint_delta(1.0, 2.0).map_err(err)?;
    ensure((delta - (2f64.sqrt() - 1.0)).abs() <= 1e-12, || {
        format!("delta(1, 2) = {delta}")
    })?;
    Ok(format!(
        "lens max {far:.6}, boundary max {reached:.6} <= {bound:.6}; delta(1,2) = {delta:.15}"
    ))
}

fn alexandrov_lemma() -> Outcome {
    let mut rng = stream_rng(7, 0);
    let started = Instant::now();
    let mut done = 0;
    while done < 10_000 {
        let dxz: f64 = rng.gen_range(0.2..3.0);
        let dzy: f64 = rng.gen_range(0.2..3.0);
        let dpz = rng.gen_range(0.2..3.0);
        let dpx = rng.gen_range((dxz - dpz).abs()..=dxz + dpz);
        let dpy = rng.gen_range((dzy - dpz).abs()..=dzy + dpz);
        // Distinct points, and p, x, y must also span a triangle.
        if dpx < 1e-3 || dpy < 1e-3 || dpx + dpy < dxz + dzy {
            continue;
        }
        let (a, b) = alexandrov_lemma_signs(dpx, dpy, dpz, dxz, dzy).map_err(err)?;
        ensure(a == b, || {
            format!("signs {a:?} vs {b:?} at {:?}", (dpx, dpy, dpz, dxz, dzy))
        })?;
        done += 1;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(10), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "10000 configurations agree in {:.2} s",
        elapsed.as_secs_f64()
    ))
}

fn tree_positivity() -> Outcome {
    let mut trees = vec![space(SpaceSpec::tripod())];
    for k in 0..50u64 {
        let mut rng = stream_rng(8, k);
        let edges = rng.gen_range(1..=64);
        trees.push(space(SpaceSpec::MetricTree {
            edges: random_tree_edges(&mut rng, edges),
        }));
    }
    let mut quadruples = 0;
    for (k, tree) in trees.iter().enumerate() {
        let scan = four_point_scan(tree, 100 + k as u64, 1000, 1e-9).map_err(err)?;
        ensure(scan.passed() && scan.checks == 3000, || {
            format!("tree {k}: {scan:?}")
        })?;
        quadruples += 1000;
        let mut rng = stream_rng(9, k as u64);
        for _ in 0..100 {
            let e: Vec<Point> = (0..4).map(|_| tree.sample(&mut rng).unwrap()).collect();
            let g1 = tree.geodesic(&e[0], &e[1]).map_err(err)?;
            let g2 = tree.geodesic(&e[2], &e[3]).map_err(err)?;
            let v = convexity_check(tree, &g1, &g2, 17, 1e-9).map_err(err)?;
            ensure(v.passed(), || format!("tree {k}: convexity {v:?}"))?;
        }
    }
    Ok(format!(
        "{} trees, {quadruples} quadruples and {} geodesic pairs, no failures",
        trees.len(),
        100 * trees.len()
    ))
}

fn projection_contract() -> Outcome {
    let e2 = space(SpaceSpec::euclidean(2));
    let seg = GeodesicSegment {
        p: Point::xy(-1.0, 0.0),
        q: Point::xy(1.0, 0.0),
    };
    let r = project_to_convex(&e2, &seg, &Point::xy(0.0, 1.0), 1e-9, 100, 0).map_err(err)?;
    ensure(r.point == Point::xy(0.0, 0.0) && r.distance == 1.0, || {
        format!("{r:?}")
    })?;
    let a1 = r.angle_check.ok_or("no angle in E2")?;
    ensure(a1 >= PI / 2.0 - 1e-6, || format!("E2 angle {a1}"))?;

    let tripod = space(SpaceSpec::tripod());
    let path = GeodesicSegment {
        p: leaf(1),
        q: leaf(2),
    };
    let r = project_to_convex(&tripod, &path, &leaf(0), 1e-9, 100, 0).map_err(err)?;
    let o = Point::Tree {
        edge: 0,
        offset: 0.0,
    };
    ensure(
        tripod.distance(&r.point, &o).map_err(err)? == 0.0 && r.distance == 1.0,
        || format!("{r:?}"),
    )?;
    let a2 = r.angle_check.ok_or("no angle in the tripod")?;
    ensure(a2 >= PI / 2.0 - 1e-6, || format!("tripod angle {a2}"))?;

    let mut worst = 0.0f64;
    for s in [&e2, &tripod] {
        let mut rng = stream_rng(10, 0);
        for k in 0..100u64 {
            let seg = GeodesicSegment {
                p: s.sample(&mut rng).unwrap(),
                q: s.sample(&mut rng).unwrap(),
            };
            let x = s.sample(&mut rng).unwrap();
            let r = project_to_convex(s, &seg, &x, 1e-9, 200, k).map_err(err)?;
            let again = project_to_convex(s, &seg, &r.point, 1e-9, 200, k).map_err(err)?;
            worst = worst.max(s.distance(&again.point, &r.point).map_err(err)?);
        }
    }
    ensure(worst <= 1e-9, || format!("reprojection moved {worst:e}"))?;
    Ok(format!(
        "angles {a1:.9} (E2) and {a2:.9} (tripod); reprojection moved at most {worst:.1e}"
    ))
}

fn flat_strips() -> Outcome {
    let product = space(SpaceSpec::product_with_line(SpaceSpec::tripod(), 4.0));
    let on = |edge: usize, offset: f64| Point::Tree { edge, offset };
    // Base pairs with their tree distance worked out by hand.
    let pairs = [
        (on(0, 0.5), on(1, 0.25), 0.75),
        (on(0, 1.0), on(2, 1.0), 2.0),
        (on(1, 0.2), on(1, 0.9), 0.7),
        (on(2, 0.0), on(0, 0.6), 0.6),
    ];
    let domain = Interval::new(-4.0, 4.0).map_err(err)?;
    let mut worst = 0.0f64;
    for (b1, b2, want) in pairs {
        let (p, q) = (b1.clone(), b2.clone());
        let g1 = Curve::from_fn(domain, move |t| Point::product(p.clone(), t));
        let g2 = Curve::from_fn(domain, move |t| Point::product(q.clone(), t));
        let input = FlatnessInput::Strip {
            gamma1: &g1,
            gamma2: &g2,
            window: 4.0,
            bound: 10.0,
        };
        let r = flatness_detect(&product, input, 33, &[], 1e-9).map_err(err)?;
        let width = r.strip_width.ok_or("no width")?;
        ensure(r.detected, || format!("{b1} / {b2}: not detected, {r:?}"))?;
        ensure((width - want).abs() <= 1e-9, || {
            format!("width {width}, expected {want}")
        })?;
        ensure(r.isometry_defect <= 1e-9, || {
            format!("defect {}", r.isometry_defect)
        })?;
        worst = worst.max(r.isometry_defect);
    }
    Ok(format!(
        "4 strips detected, widths exact, max defect {worst:.1e}"
    ))
}

fn characterization_agreement() -> Outcome {
    let random_tree = |seed: u64| {
        space(SpaceSpec::MetricTree {
            edges: random_tree_edges(&mut stream_rng(seed, 0), 12),
        })
    };
    let fixtures = [
        space(SpaceSpec::euclidean(2)),
        space(SpaceSpec::euclidean(3)),
        space(SpaceSpec::tripod()),
        random_tree(11),
        random_tree(12),
        space(SpaceSpec::product_with_line(SpaceSpec::tripod(), 1.0)),
        space(SpaceSpec::MetricTree {
            edges: vec![
                TreeEdge::new("o", "a", 1.0),
                TreeEdge::new("o", "b", 2.0),
                TreeEdge::new("b", "c", 0.5),
            ],
        }),
        arc_circle(),
    ];
    let scales = default_scales();
    let (mut agreed, mut failing) = (0, 0);
    for (f, s) in fixtures.iter().enumerate() {
        let mut rng = stream_rng(11, f as u64);
        let mut triangles = Vec::new();
        if s.kind() == "circle(arc)" {
            let v = |k: f64| Point::Angle(2.0 * PI * k / 3.0);
            triangles.push([v(0.0), v(1.0), v(2.0)]);
        }
        while triangles.len() < 40 {
            let v = [
                s.sample(&mut rng).unwrap(),
                s.sample(&mut rng).unwrap(),
                s.sample(&mut rng).unwrap(),
            ];
            // Angle modes need distinct vertices.
            if (0..3).all(|i| s.distance(&v[i], &v[(i + 1) % 3]).unwrap() >= 1e-3) {
                triangles.push(v);
            }
        }
        for v in triangles {
            let tri = GeodesicTriangle::from_vertices(s, v[0].clone(), v[1].clone(), v[2].clone())
                .map_err(err)?;
            let mut statuses = Vec::new();
            for mode in Characterization::ALL {
                let tol = match mode {
                    Characterization::Cat0Inequality | Characterization::VertexDistance => 1e-9,
                    _ => 1e-6,
                };
                statuses.push(
                    equivalent_condition_check(s, &tri, mode, 5, &scales, tol)
                        .map_err(err)?
                        .status,
                );
            }
            ensure(statuses.iter().all(|st| *st == statuses[0]), || {
                format!("{}: modes disagree on {v:?}: {statuses:?}", s.kind())
            })?;
            agreed += 1;
            failing += usize::from(statuses[0] == Status::Fail);
        }
    }
    ensure(failing > 0, || {
        "no fixture produced a failing triangle".into()
    })?;
    Ok(format!(
        "{agreed} triangles on {} fixtures, all four modes agree ({failing} fail together)",
        fixtures.len()
    ))
}

fn determinism() -> Outcome {
    let mut config = SuiteConfig::new(
        SpaceSpec::product_with_line(SpaceSpec::tripod(), 2.0),
        Suite::ALL.to_vec(),
    );
    config.samples = 60;
    config.seed = 12;
    let circle = SuiteConfig {
        space: SpaceSpec::circle(CircleMetric::Arc, 2.0 * PI),
        ..config.clone()
    };
    let mut checked = 0;
    for c in [config, circle] {
        let json = |parallel: bool| -> Result<String, String> {
            let c = SuiteConfig {
                parallel,
                ..c.clone()
            };
            Ok(emit_report(
                &run_suite(&c).map_err(|e| e.to_string())?,
                OutputFormat::Json,
            ))
        };
        let (a, b, serial) = (json(true)?, json(true)?, json(false)?);
        ensure(a == b, || "two parallel runs differ".into())?;
        ensure(a == serial, || "serial and parallel runs differ".into())?;
        checked += a.len();
    }
    Ok(format!(
        "byte-identical reports ({checked} bytes) across runs and thread counts"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("model-space equality", model_space_equality),
        ("circle refutation", circle_refutation),
        ("chord vs arc", chord_versus_arc),
        ("punctured plane", punctured_plane),
        ("dyadic Lipschitz bound", dyadic_lipschitz),
        ("approximate-midpoint bound", approximate_midpoints),
        ("Alexandrov's lemma", alexandrov_lemma),
        ("tree positivity", tree_positivity),
        ("projection contract", projection_contract),
        ("flat strip on products", flat_strips),
        ("characterization agreement", characterization_agreement),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!(
                "acceptance {:>2} PASS {name}: {detail} [{secs:.2} s]",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "acceptance {:>2} FAIL {name}: {detail} [{secs:.2} s]",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
