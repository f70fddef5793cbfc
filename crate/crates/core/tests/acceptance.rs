//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::{SQRT_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{point_inside, random_instance, random_workspace, rel_diff, rng, square, Instance};
use convex_tour::arcs::ArcsList;
use convex_tour::dynamic::{preprocess, query_curvature, query_tour};
use convex_tour::error::Error;
use convex_tour::geom::{convex_hull, ConvexPolygon, Point, SimplePolygon};
use convex_tour::oracle::{check_curvature_comparison, check_enclosed_circle, check_tour, oracle_min_critical_radius};
use convex_tour::paths::{contains_polygon, maximal_path, TourElement};
use convex_tour::planner::{optimal_tour, OptimalResult};
use convex_tour::skeleton::medial_axis;
use rand::Rng;

type Outcome = Result<String, String>;

struct Solved {
    inst: Instance,
    oracle: f64,
    result: OptimalResult,
}

/// Criterion-1 instances with their oracle radius; seeds whose oracle
/// reports a degenerate tie are replaced by the next seed.
fn corpus(count: usize) -> (Vec<Solved>, usize) {
    let mut out = Vec::with_capacity(count);
    let mut skipped = 0;
    let mut seed = 0;
    while out.len() < count {
        let inst = random_instance(seed);
        seed += 1;
        let oracle = match oracle_min_critical_radius(&inst.outer, inst.obstacle.vertices()) {
            Ok(r) => r,
            Err(Error::Degenerate(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => panic!("oracle failed on seed {}: {e}", inst.seed),
        };
        let result = optimal_tour(&inst.outer, &inst.obstacle).unwrap_or_else(|e| panic!("seed {}: {e}", inst.seed));
        out.push(Solved { inst, oracle, result });
    }
    (out, skipped)
}

fn c1_oracle_equivalence(c: &[Solved], skipped: usize, secs: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    for s in c {
        let d = rel_diff(1.0 / s.result.kappa_star, s.oracle);
        worst = worst.max(d);
        if d > 1e-9 {
            return Err(format!(
                "seed {}: 1/kappa* = {} but oracle = {}",
                s.inst.seed,
                1.0 / s.result.kappa_star,
                s.oracle
            ));
        }
    }
    if secs > 60.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!(
        "{} instances ({skipped} degenerate seeds replaced), worst relative error {worst:.2e}, {secs:.1} s",
        c.len()
    ))
}

fn c2_square_corner_point() -> Outcome {
    let r = optimal_tour(&square(), &SimplePolygon::point(Point::new(3.5, 3.5))).map_err(|e| e.to_string())?;
    let want = 1.0 / (1.0 + SQRT_2 / 2.0);
    if (r.kappa_star - want).abs() > 1e-12 {
        return Err(format!("kappa* = {}, expected {want}", r.kappa_star));
    }
    let v = Point::new(3.5, 3.5);
    let d = r
        .tour
        .elements
        .iter()
        .map(|e| match *e {
            TourElement::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let a = (v - center).angle();
                let inside = convex_tour::geom::ccw_sweep(start_angle, a) <= end_angle - start_angle + 1e-12;
                if inside {
                    ((v - center).norm() - radius).abs()
                } else {
                    f64::INFINITY
                }
            }
            TourElement::Segment { from, to } => convex_tour::geom::distance_point_to_segment(v, from, to),
        })
        .fold(f64::INFINITY, f64::min);
    if d > 1e-9 {
        return Err(format!("tour misses (3.5, 3.5) by {d:e}"));
    }
    Ok(format!("kappa* = {:.15}, tour passes within {d:.1e}", r.kappa_star))
}

fn c3_inside_inscribed_circle() -> Outcome {
    let mut g = rng(3003);
    for i in 0..200 {
        let k = g.gen_range(3..=64);
        let e = random_workspace(&mut g, k);
        let tree = medial_axis(&e).map_err(|x| x.to_string())?;
        let c = tree.largest_inscribed_circle();
        let n = g.gen_range(1..=64);
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                let a = g.gen_range(0.0..TAU);
                let r = c.radius * g.gen_range(0.0f64..0.999).sqrt();
                c.center + Point::from_angle(a) * r
            })
            .collect();
        let obstacle = SimplePolygon::new(convex_hull(&pts).unwrap().into_vertices()).unwrap();
        let r = optimal_tour(&e, &obstacle).map_err(|x| x.to_string())?;
        if r.kappa_star != 1.0 / c.radius {
            return Err(format!("case {i}: kappa* = {} but 1/r* = {}", r.kappa_star, 1.0 / c.radius));
        }
        let z = maximal_path(&tree, r.kappa_star).map_err(|x| x.to_string())?;
        if z != r.tour {
            return Err(format!("case {i}: tour differs from the maximal path"));
        }
    }
    Ok("200 obstacles inside the inscribed circle give kappa* = 1/r* exactly".into())
}

fn c4_tour_validity(c: &[Solved]) -> Outcome {
    for s in c {
        let rep = check_tour(&s.result.tour, &s.inst.outer, s.inst.obstacle.vertices());
        if !rep.passed() {
            return Err(format!("seed {}: {:?}", s.inst.seed, rep.violations));
        }
        if !check_enclosed_circle(&s.result.tour) {
            return Err(format!("seed {}: no enclosed circle of radius 1/kappa", s.inst.seed));
        }
    }
    Ok(format!("{} tours pass all checks and enclose a 1/kappa circle", c.len()))
}

fn c5_optimality_witness(c: &[Solved]) -> Outcome {
    let mut binding = 0;
    for s in c {
        let tree = medial_axis(&s.inst.outer).map_err(|e| e.to_string())?;
        let r_star = tree.root_node().weight;
        if s.result.kappa_star <= (1.0 / r_star) * (1.0 + 1e-9) {
            continue;
        }
        binding += 1;
        let z = maximal_path(&tree, s.result.kappa_star * (1.0 - 1e-6)).map_err(|e| e.to_string())?;
        if contains_polygon(&z, s.inst.obstacle.vertices(), 1e-12 / s.result.kappa_star) {
            return Err(format!("seed {}: a looser curvature bound still encloses the obstacle", s.inst.seed));
        }
    }
    Ok(format!("{binding} binding instances are infeasible at kappa*(1 - 1e-6)"))
}

fn c6_dynamic(c: &[Solved]) -> Outcome {
    for s in c {
        let ix = preprocess(&s.inst.outer).map_err(|e| e.to_string())?;
        let q = query_tour(&ix, &s.inst.obstacle).map_err(|e| e.to_string())?;
        if q.kappa_star.to_bits() != s.result.kappa_star.to_bits() || q.tour != s.result.tour {
            return Err(format!("seed {}: query_tour differs from optimal_tour", s.inst.seed));
        }
        let k = query_curvature(&ix, &s.inst.points).map_err(|e| e.to_string())?;
        if rel_diff(1.0 / k, s.oracle) > 1e-9 {
            return Err(format!("seed {}: query_curvature radius {} vs oracle {}", s.inst.seed, 1.0 / k, s.oracle));
        }
    }
    Ok(format!("{} indexed queries match the static planner and the oracle", c.len()))
}

fn c7_point_location() -> Outcome {
    let mut g = rng(7007);
    let mut total = 0;
    for i in 0..50 {
        let k = g.gen_range(3..=64);
        let e = random_workspace(&mut g, k);
        let tree = medial_axis(&e).map_err(|x| x.to_string())?;
        let arcs = ArcsList::build(&tree);
        for _ in 0..200 {
            let q = point_inside(&mut g, &e);
            let a = arcs.locate_point(&tree, q).map_err(|x| x.to_string())?;
            let b = arcs.locate_linear_scan(&tree, q);
            if a != b {
                return Err(format!("polygon {i}, query {q:?}: {a:?} vs {b:?}"));
            }
            total += 1;
        }
    }
    Ok(format!("{total} queries over 50 polygons agree with the linear scan"))
}

/// Star-shaped obstacle with `n` vertices alternating between just inside
/// the inscribed circle and the thin band between it and the boundary.
fn star_obstacle(g: &mut rand_chacha::ChaCha8Rng, e: &ConvexPolygon, r_star: f64, n: usize) -> SimplePolygon {
    let m = e.len() as f64;
    let pts: Vec<Point> = (0..n)
        .map(|i| {
            let a = TAU * (i as f64 + g.gen_range(0.1..0.9)) / n as f64;
            let r = if i % 2 == 0 {
                r_star * (1.0 - g.gen_range(1e-7..1e-6))
            } else {
                let sector = (a / (TAU / m)).floor();
                let off = a - (sector + 0.5) * TAU / m;
                let edge = r_star / off.cos();
                r_star + g.gen_range(0.1..0.9) * (edge - r_star)
            };
            Point::from_angle(a) * r
        })
        .collect();
    SimplePolygon::new(pts).unwrap()
}

fn c8_scaling() -> Outcome {
    let m = 100_000;
    let e = ConvexPolygon::new((0..m).map(|i| Point::from_angle(TAU * i as f64 / m as f64)).collect())
        .map_err(|x| x.to_string())?;
    let r_star = (std::f64::consts::PI / m as f64).cos();
    let mut g = rng(8008);
    let small = star_obstacle(&mut g, &e, r_star, 50_000);
    let big = star_obstacle(&mut g, &e, r_star, 100_000);
    let t0 = Instant::now();
    let r_big = optimal_tour(&e, &big).map_err(|x| x.to_string())?;
    let secs = t0.elapsed().as_secs_f64();
    let r_small = optimal_tour(&e, &small).map_err(|x| x.to_string())?;
    let ratio = r_big.iterations as f64 / r_small.iterations as f64;
    if secs > 5.0 {
        return Err(format!("m = n = 1e5 took {secs:.2} s"));
    }
    if ratio >= 3.0 {
        return Err(format!("iterations grew by {ratio:.2} when n doubled"));
    }
    Ok(format!(
        "m = n = 1e5 in {secs:.2} s; iterations {} -> {} (x{ratio:.2}) when n doubles",
        r_small.iterations, r_big.iterations
    ))
}

fn transform(p: Point, rot: f64, scale: f64, shift: Point) -> Point {
    let (s, c) = rot.sin_cos();
    Point::new(c * p.x - s * p.y, s * p.x + c * p.y) * scale + shift
}

fn c9_invariance() -> Outcome {
    let mut g = rng(9009);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let inst = random_instance(100_000 + i);
        let base = optimal_tour(&inst.outer, &inst.obstacle).map_err(|x| x.to_string())?.kappa_star;
        let rot = g.gen_range(0.0..TAU);
        let shift = Point::new(g.gen_range(-5.0..5.0), g.gen_range(-5.0..5.0));
        let lambda = g.gen_range(0.1f64..10.0);
        for (scale, shift) in [(1.0, shift), (lambda, Point::new(0.0, 0.0))] {
            let f = |p: Point| transform(p, rot, scale, shift);
            let e = inst.outer.transformed(f).map_err(|x| x.to_string())?;
            let o = SimplePolygon::new(inst.obstacle.vertices().iter().map(|&p| f(p)).collect()).map_err(|x| x.to_string())?;
            let k = optimal_tour(&e, &o).map_err(|x| x.to_string())?.kappa_star;
            let d = rel_diff(k * scale, base);
            worst = worst.max(d);
            if d > 1e-9 {
                return Err(format!("instance {i}: kappa* {base} became {k} under scale {scale}"));
            }
        }
    }
    Ok(format!("100 rigid motions and 100 scalings, worst relative change {worst:.2e}"))
}

fn c10_curvature_comparison() -> Outcome {
    let mut g = rng(1010);
    for i in 0..100 {
        let r = g.gen_range(0.5..2.0);
        let rp = r * g.gen_range(0.2..0.95);
        let xs: Vec<f64> = (0..1000).map(|j| j as f64 * 0.1 * rp / 1000.0).collect();
        let circle = |rad: f64| -> Vec<Point> { xs.iter().map(|&x| Point::new(x, rad - (rad * rad - x * x).sqrt())).collect() };
        let gs = circle(r);
        let fs = if i % 2 == 0 {
            xs.iter().map(|&x| Point::new(x, x * x / (2.0 * rp))).collect()
        } else {
            circle(rp)
        };
        match check_curvature_comparison(&fs, &gs, r, 1e-9) {
            Ok(true) => {}
            other => return Err(format!("pair {i} (r = {r}, r' = {rp}): {other:?}")),
        }
        if let Ok(true) = check_curvature_comparison(&gs, &gs, r, 1e-9) {
            return Err(format!("pair {i}: equality case accepted"));
        }
    }
    Ok("100 osculating pairs exceed 1/r; the equality case is rejected".into())
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match out {
        Ok(msg) => {
            println!("criterion {n:>2} PASS  {name}: {msg}");
            true
        }
        Err(msg) => {
            println!("criterion {n:>2} FAIL  {name}: {msg}");
            false
        }
    }
}

fn main() {
    let t0 = Instant::now();
    let built = catch_unwind(|| corpus(1000));
    let secs = t0.elapsed().as_secs_f64();
    let mut ok = true;
    match &built {
        Ok((c, skipped)) => {
            ok &= run(1, "oracle equivalence", || c1_oracle_equivalence(c, *skipped, secs));
            ok &= run(2, "square corner point", c2_square_corner_point);
            ok &= run(3, "obstacle inside inscribed circle", c3_inside_inscribed_circle);
            ok &= run(4, "tour validity", || c4_tour_validity(c));
            ok &= run(5, "optimality witness", || c5_optimality_witness(c));
            ok &= run(6, "dynamic equivalence", || c6_dynamic(c));
        }
        Err(_) => {
            for (n, name) in [(1, "oracle equivalence"), (4, "tour validity"), (5, "optimality witness"), (6, "dynamic equivalence")] {
                ok &= run(n, name, || Err("instance corpus failed to build".into()));
            }
            ok &= run(2, "square corner point", c2_square_corner_point);
            ok &= run(3, "obstacle inside inscribed circle", c3_inside_inscribed_circle);
        }
    }
    ok &= run(7, "point location", c7_point_location);
    ok &= run(8, "scaling", c8_scaling);
    ok &= run(9, "invariance", c9_invariance);
    ok &= run(10, "curvature comparison", c10_curvature_comparison);
    if !ok {
        std::process::exit(1);
    }
}
