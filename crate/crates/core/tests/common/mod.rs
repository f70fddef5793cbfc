#![allow(dead_code)]

use convex_tour::geom::{convex_hull, ConvexPolygon, Point, SimplePolygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn square() -> ConvexPolygon {
    ConvexPolygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(4.0, 0.0),
        Point::new(4.0, 4.0),
        Point::new(0.0, 4.0),
    ])
    .unwrap()
}

/// Hull of up to `k` samples from the annulus `0.5 <= |p| <= 1`.
pub fn random_workspace(rng: &mut ChaCha8Rng, k: usize) -> ConvexPolygon {
    loop {
        let pts: Vec<Point> = (0..k.max(3))
            .map(|_| {
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = rng.gen_range(0.25f64..1.0).sqrt();
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        if let Ok(p) = convex_hull(&pts).and_then(|h| h.to_polygon()) {
            return p;
        }
    }
}

/// Point strictly inside `e`, uniform over its bounding box by rejection.
pub fn point_inside(rng: &mut ChaCha8Rng, e: &ConvexPolygon) -> Point {
    let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
    for v in e.vertices() {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    loop {
        let q = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if e.depth(q) > 1e-7 {
            return q;
        }
    }
}

pub struct Instance {
    pub seed: u64,
    pub outer: ConvexPolygon,
    pub points: Vec<Point>,
    pub obstacle: SimplePolygon,
}

/// Random workspace with `m` in `[3, 64]` and an obstacle that is the hull
/// of `n` in `[1, 128]` interior points.
pub fn random_instance(seed: u64) -> Instance {
    let mut r = rng(seed);
    let k = r.gen_range(3..=64);
    let outer = random_workspace(&mut r, k);
    let n = r.gen_range(1..=128);
    let points: Vec<Point> = (0..n).map(|_| point_inside(&mut r, &outer)).collect();
    let obstacle = SimplePolygon::new(convex_hull(&points).unwrap().into_vertices()).unwrap();
    Instance {
        seed,
        outer,
        points,
        obstacle,
    }
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
