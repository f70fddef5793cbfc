use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{convex_hull, ConvexPolygon, Point};

pub fn random_convex(rng: &mut ChaCha8Rng, k: usize) -> ConvexPolygon {
    let pts: Vec<Point> = (0..k)
        .map(|_| {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = rng.gen_range(0.7..1.0);
            Point::new(r * a.cos(), r * a.sin())
        })
        .collect();
    convex_hull(&pts).unwrap().to_polygon().unwrap()
}

/// Uniform point of `p` by rejection from its bounding box.
pub fn point_in(rng: &mut ChaCha8Rng, p: &ConvexPolygon) -> Point {
    loop {
        let q = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if p.depth(q) > 0.0 {
            return q;
        }
    }
}
