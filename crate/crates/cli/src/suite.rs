//! Check suites and the runner that turns a configuration into a report.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::PathBuf;

use cat0kit::cat0::{
    cat0_triangle_check, convexity_check, flatness_detect, four_point_scan, project_to_convex,
    FlatnessInput, GeodesicSegment,
};
use cat0kit::comparison::{GeodesicTriangle, STABILITY_TOL};
use cat0kit::geodesic::{is_geodesic, GeodesicMode};
use cat0kit::length::{is_length_space_sample, CandidatePair};
use cat0kit::rng::{split_seed, stream_rng};
use cat0kit::verdict::VerdictBuilder;
use cat0kit::{make_space, CheckVerdict, Curve, Interval, Point, SpaceHandle, SpaceSpec, Witness};
use rand::rngs::StdRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{Report, SuiteReport};
use crate::CliError;

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    PartialOrd,
    Ord,
    Hash,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LengthSpace,
    Geodesic,
    FourPoint,
    Cat0Triangles,
    Convexity,
    Projection,
    Flatness,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::LengthSpace,
        Suite::Geodesic,
        Suite::FourPoint,
        Suite::Cat0Triangles,
        Suite::Convexity,
        Suite::Projection,
        Suite::Flatness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LengthSpace => "length-space",
            Suite::Geodesic => "geodesic",
            Suite::FourPoint => "four-point",
            Suite::Cat0Triangles => "cat0-triangles",
            Suite::Convexity => "convexity",
            Suite::Projection => "projection",
            Suite::Flatness => "flatness",
        }
    }

    /// Random stream of this suite under the config seed. Fixed per suite,
    /// so adding or reordering suites leaves the others unchanged.
    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Grid points per triangle side.
pub const TRIANGLE_GRID: usize = 9;
/// Grid points per geodesic in the geodesic and convexity suites.
pub const CURVE_GRID: usize = 17;
/// Grid points per axis of a strip.
pub const STRIP_GRID: usize = 9;
/// Deepest dyadic refinement in the length-space suite.
pub const LENGTH_DEPTH: u32 = 16;
/// Evaluation budget for a projection search.
pub const PROJECTION_BUDGET: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub space: SpaceSpec,
    pub suites: Vec<Suite>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub parallel: bool,
}

impl SuiteConfig {
    pub fn new(space: SpaceSpec, suites: Vec<Suite>) -> Self {
        SuiteConfig {
            space,
            suites,
            samples: 100,
            seed: 0,
            tol: 1e-9,
            out: None,
            parallel: true,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.suites.is_empty() {
            return Err(CliError::Config("at least one suite is required".into()));
        }
        if self.samples == 0 {
            return Err(CliError::Config("samples must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Config(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// What one suite produced before it is wrapped into the report.
pub enum Outcome {
    Verdict(CheckVerdict),
    Skipped(String),
}

/// Per-suite inputs.
pub struct SuiteContext<'a> {
    pub space: &'a SpaceHandle,
    pub spec: &'a SpaceSpec,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

/// Runs every requested suite and writes the JSON report to `config.out`
/// when set. Serial runs use a one-thread pool; the result is the same.
pub fn run_suite(config: &SuiteConfig) -> Result<Report, CliError> {
    config.validate()?;
    let space = make_space(&config.space)?;
    let mut suites: Vec<Suite> = Vec::with_capacity(config.suites.len());
    for s in &config.suites {
        if !suites.contains(s) {
            suites.push(*s);
        }
    }
    let run = || -> Vec<SuiteReport> {
        suites
            .iter()
            .map(|&suite| {
                let ctx = SuiteContext {
                    space: &space,
                    spec: &config.space,
                    samples: config.samples,
                    seed: split_seed(config.seed, suite.stream()),
                    tol: config.tol,
                };
                SuiteReport::from_outcome(suite, run_one(suite, &ctx))
            })
            .collect()
    };
    let results = if config.parallel {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))?
            .install(run)
    };
    let report = Report::new(config.clone(), results);
    if let Some(path) = &config.out {
        crate::report::write_report(&report, path)?;
    }
    Ok(report)
}

/// Errors inside a suite make it inconclusive rather than aborting the run.
pub fn run_one(suite: Suite, ctx: &SuiteContext<'_>) -> Result<Outcome, cat0kit::Error> {
    let caps = ctx.space.capabilities();
    let need = |geodesic: bool| -> Option<String> {
        if !caps.sampler {
            Some(format!("{} has no sampler", ctx.space.kind()))
        } else if geodesic && !caps.geodesic {
            Some(format!("{} has no geodesic oracle", ctx.space.kind()))
        } else {
            None
        }
    };
    let geodesic_needed = !matches!(suite, Suite::LengthSpace | Suite::FourPoint);
    if let Some(reason) = need(geodesic_needed) {
        return Ok(Outcome::Skipped(reason));
    }
    match suite {
        Suite::LengthSpace => length_space(ctx),
        Suite::Geodesic => geodesic(ctx).map(Outcome::Verdict),
        Suite::FourPoint => {
            four_point_scan(ctx.space, ctx.seed, ctx.samples, ctx.tol).map(Outcome::Verdict)
        }
        Suite::Cat0Triangles => triangles(ctx).map(Outcome::Verdict),
        Suite::Convexity => convexity(ctx).map(Outcome::Verdict),
        Suite::Projection => projection(ctx).map(Outcome::Verdict),
        Suite::Flatness => flatness(ctx),
    }
}

/// Runs `check` on every sample with its own random stream and folds the
/// verdicts in sample order.
fn per_sample<F>(ctx: &SuiteContext<'_>, tol: f64, check: F) -> Result<CheckVerdict, cat0kit::Error>
where
    F: Fn(&mut StdRng) -> Result<CheckVerdict, cat0kit::Error> + Sync,
{
    let verdicts = (0..ctx.samples)
        .into_par_iter()
        .map(|k| check(&mut stream_rng(ctx.seed, k as u64)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut total = VerdictBuilder::new(tol);
    for v in verdicts {
        total.absorb(v);
    }
    Ok(total.finish())
}

/// Puts `context` in front of each witness's points.
fn prefixed(mut v: CheckVerdict, context: &[Point]) -> CheckVerdict {
    for w in &mut v.witnesses {
        let mut points = context.to_vec();
        points.append(&mut w.points);
        w.points = points;
    }
    v
}

/// Relative tolerance of the length comparison; finer ones need more
/// refinement than a sampled run can afford.
pub fn length_tolerance(tol: f64) -> f64 {
    tol.max(1e-6)
}

fn length_space(ctx: &SuiteContext<'_>) -> Result<Outcome, cat0kit::Error> {
    let rel_tol = length_tolerance(ctx.tol);
    let results = (0..ctx.samples)
        .into_par_iter()
        .map(|k| -> Result<Option<CheckVerdict>, cat0kit::Error> {
            let mut rng = stream_rng(ctx.seed, k as u64);
            let x = ctx.space.sample(&mut rng)?;
            let y = ctx.space.sample(&mut rng)?;
            let curves = ctx.space.candidate_curves(&x, &y)?;
            if curves.is_empty() {
                return Ok(None);
            }
            let pair = CandidatePair { x, y, curves };
            is_length_space_sample(ctx.space, &[pair], rel_tol, LENGTH_DEPTH).map(Some)
        })
        .collect::<Result<Vec<_>, _>>()?;
    if results.iter().all(Option::is_none) {
        return Ok(Outcome::Skipped(format!(
            "{} offers no candidate curves",
            ctx.space.kind()
        )));
    }
    let mut total = VerdictBuilder::new(0.0);
    for r in results {
        match r {
            Some(v) => total.absorb(v),
            None => total.mark_inconclusive(),
        }
    }
    Ok(Outcome::Verdict(total.finish()))
}

/// The geodesic oracle has constant speed `d(x, y)` on `[0, 1]`, and the
/// midpoint oracle, when present, sits at half the distance from both ends.
fn geodesic(ctx: &SuiteContext<'_>) -> Result<CheckVerdict, cat0kit::Error> {
    let space = ctx.space;
    per_sample(ctx, ctx.tol, |rng| {
        let x = space.sample(rng)?;
        let y = space.sample(rng)?;
        let mut b = VerdictBuilder::new(ctx.tol);
        let g = space.geodesic(&x, &y)?;
        let w = is_geodesic(space, &g, CURVE_GRID, ctx.tol, GeodesicMode::Global)?;
        let (s, t) = w.worst_pair.unwrap_or((0.0, 0.0));
        b.record(w.max_deviation, || {
            Witness::new(
                "d(g(s),g(t)) = d(x,y)|s-t|",
                vec![x.clone(), y.clone()],
                vec![s, t],
                0.0,
            )
        });
        if space.capabilities().midpoint {
            let m = space.midpoint(&x, &y)?;
            let half = 0.5 * space.distance(&x, &y)?;
            let off = (space.distance(&x, &m)? - half)
                .abs()
                .max((space.distance(&m, &y)? - half).abs());
            b.record(off, || {
                Witness::new(
                    "d(x,m) = d(m,y) = d(x,y)/2",
                    vec![x.clone(), y.clone(), m.clone()],
                    vec![],
                    0.0,
                )
            });
        }
        Ok(b.finish())
    })
}

fn triangles(ctx: &SuiteContext<'_>) -> Result<CheckVerdict, cat0kit::Error> {
    let space = ctx.space;
    per_sample(ctx, ctx.tol, |rng| {
        let v = [space.sample(rng)?, space.sample(rng)?, space.sample(rng)?];
        let tri = GeodesicTriangle::from_vertices(space, v[0].clone(), v[1].clone(), v[2].clone())?;
        Ok(prefixed(
            cat0_triangle_check(space, &tri, TRIANGLE_GRID, ctx.tol)?,
            &v,
        ))
    })
}

fn convexity(ctx: &SuiteContext<'_>) -> Result<CheckVerdict, cat0kit::Error> {
    let space = ctx.space;
    per_sample(ctx, ctx.tol, |rng| {
        let e = [
            space.sample(rng)?,
            space.sample(rng)?,
            space.sample(rng)?,
            space.sample(rng)?,
        ];
        let g1 = space.geodesic(&e[0], &e[1])?;
        let g2 = space.geodesic(&e[2], &e[3])?;
        Ok(prefixed(
            convexity_check(space, &g1, &g2, CURVE_GRID, ctx.tol)?,
            &e,
        ))
    })
}

/// Angles carry square-root roundoff, so this suite never runs tighter
/// than the angle stability tolerance.
pub fn projection_tolerance(tol: f64) -> f64 {
    tol.max(STABILITY_TOL)
}

/// Projects a sampled point onto a sampled geodesic segment. Checks the
/// angle at the projection is at least `π/2` and that projecting the
/// projection moves nothing.
fn projection(ctx: &SuiteContext<'_>) -> Result<CheckVerdict, cat0kit::Error> {
    let space = ctx.space;
    let tol = projection_tolerance(ctx.tol);
    per_sample(ctx, tol, |rng| {
        use rand::Rng;
        let x = space.sample(rng)?;
        let seg = GeodesicSegment {
            p: space.sample(rng)?,
            q: space.sample(rng)?,
        };
        let seed = rng.gen();
        let r = project_to_convex(space, &seg, &x, ctx.tol, PROJECTION_BUDGET, seed)?;
        let again = project_to_convex(space, &seg, &r.point, ctx.tol, PROJECTION_BUDGET, seed)?;
        let ctx_points = vec![x.clone(), seg.p.clone(), seg.q.clone(), r.point.clone()];
        let mut b = VerdictBuilder::new(tol);
        if let Some(angle) = r.angle_check {
            b.record(FRAC_PI_2 - angle, || {
                Witness::new(
                    "angle at projection >= pi/2",
                    ctx_points.clone(),
                    vec![angle],
                    0.0,
                )
            });
        }
        let moved = space.distance(&again.point, &r.point)?;
        b.record(moved, || {
            Witness::new(
                "projection is idempotent",
                ctx_points.clone(),
                vec![moved],
                0.0,
            )
        });
        Ok(b.finish())
    })
}

/// Vertical lines `t ↦ (b, t)` through sampled base points of `X × R`, or
/// lines along the first axis of `E^n`, must bound a flat strip whose
/// width is the base distance.
fn flatness(ctx: &SuiteContext<'_>) -> Result<Outcome, cat0kit::Error> {
    let (base, window): (
        Box<dyn Fn(&mut StdRng) -> Result<Point, cat0kit::Error> + Sync>,
        f64,
    ) = match ctx.spec {
        SpaceSpec::ProductWithLine { inner, extent } => {
            let inner = make_space(inner)?;
            if !inner.capabilities().geodesic {
                return Ok(Outcome::Skipped(
                    "the base space has no geodesic oracle".into(),
                ));
            }
            (Box::new(move |rng| inner.sample(rng)), *extent)
        }
        SpaceSpec::Euclidean { n, extent } if *n >= 2 => {
            let space = ctx.space.clone();
            (
                Box::new(move |rng| {
                    let mut p = space.sample(rng)?;
                    if let Point::Vector(c) = &mut p {
                        c[0] = 0.0;
                    }
                    Ok(p)
                }),
                *extent,
            )
        }
        _ => {
            return Ok(Outcome::Skipped(format!(
                "no family of parallel lines is known for {}",
                ctx.space.kind()
            )))
        }
    };
    let product = matches!(ctx.spec, SpaceSpec::ProductWithLine { .. });
    let line = move |b: Point| -> Result<Curve, cat0kit::Error> {
        let domain = Interval::new(-window, window)?;
        Ok(if product {
            Curve::from_fn(domain, move |t| Point::product(b.clone(), t))
        } else {
            let c = b.as_vector().expect("euclidean point").to_vec();
            Curve::from_fn(domain, move |t| {
                let mut c = c.clone();
                c[0] = t;
                Point::Vector(c)
            })
        })
    };
    let space = ctx.space;
    let v = per_sample(ctx, ctx.tol, |rng| {
        let (b1, b2) = (base(rng)?, base(rng)?);
        let (g1, g2) = (line(b1)?, line(b2)?);
        let input = FlatnessInput::Strip {
            gamma1: &g1,
            gamma2: &g2,
            window,
            bound: f64::INFINITY,
        };
        let report = flatness_detect(space, input, STRIP_GRID, &[], ctx.tol)?;
        let width = report.strip_width.unwrap_or(0.0);
        let (s, t) = (g1.eval(0.0)?, g2.eval(0.0)?);
        let base_gap = space.distance(&s, &t)?;
        let ends = space.distance(&g1.eval(window)?, &g2.eval(window)?)?;
        let slack = report
            .isometry_defect
            .max((width - base_gap).abs())
            .max((ends - base_gap).abs());
        let mut b = VerdictBuilder::new(ctx.tol);
        b.record(slack, || {
            Witness::new(
                "strip is flat with width d(b1,b2)",
                vec![s.clone(), t.clone()],
                vec![width, report.isometry_defect],
                0.0,
            )
        });
        Ok(b.finish())
    })?;
    Ok(Outcome::Verdict(v))
}
