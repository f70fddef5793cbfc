//! Brute-force reference computations and numerical validators. Nothing
//! here uses the skeleton tree or the arc map.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geom::{ccw_sweep, convex_hull, eps, norm_angle, Circle, ConvexPolygon, EdgeLine, Location, Point};
use crate::paths::{sample_path, Tour, TourElement};

/// Largest inscribed circle by enumerating every triple of edge lines.
pub fn oracle_inscribed_circle(e: &ConvexPolygon) -> Circle {
    let lines = e.lines();
    let m = lines.len();
    let tol = eps() * e.diameter_bound().max(1.0);
    let mut best = Circle::new(e.centroid(), f64::NEG_INFINITY);
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let Some((c, r)) = tangent_to_three(&lines[i], &lines[j], &lines[k]) else {
                    continue;
                };
                if r <= best.radius || r <= 0.0 {
                    continue;
                }
                if lines.iter().all(|l| l.signed_dist(c) >= r - tol) {
                    best = Circle::new(c, r);
                }
            }
        }
    }
    best
}

/// Solves `n_i . c - r = o_i` for three lines by Cramer's rule.
fn tangent_to_three(a: &EdgeLine, b: &EdgeLine, c: &EdgeLine) -> Option<(Point, f64)> {
    let m = [
        [a.normal.x, a.normal.y, -1.0],
        [b.normal.x, b.normal.y, -1.0],
        [c.normal.x, c.normal.y, -1.0],
    ];
    let rhs = [a.offset, b.offset, c.offset];
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(&m);
    if d.abs() < 1e-12 {
        return None;
    }
    let col = |k: usize| {
        let mut t = m;
        for r in 0..3 {
            t[r][k] = rhs[r];
        }
        det3(&t) / d
    };
    Some((Point::new(col(0), col(1)), col(2)))
}

/// One row of the per-vertex oracle table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow {
    pub vertex: Point,
    /// `None` when the vertex has no critical arc.
    pub radius: Option<f64>,
    pub tangent_edges: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub inscribed: Circle,
    pub radius: f64,
    pub rows: Vec<OracleRow>,
}

/// Circles tangent to lines `a` and `b` (from inside) passing through `v`.
fn circles_through(v: Point, a: &EdgeLine, b: &EdgeLine) -> Vec<(Point, f64)> {
    let det = a.normal.cross(b.normal);
    let mut out = Vec::new();
    if det.abs() > 1e-12 {
        // c(r) = c0 + r c1 solves n_a.c = o_a + r, n_b.c = o_b + r
        let solve = |x: f64, y: f64| {
            Point::new(
                (x * b.normal.y - y * a.normal.y) / det,
                (a.normal.x * y - b.normal.x * x) / det,
            )
        };
        let c0 = solve(a.offset, b.offset);
        let c1 = solve(1.0, 1.0);
        let f = c0 - v;
        let qa = c1.norm2() - 1.0;
        let qb = 2.0 * c1.dot(f);
        let qc = f.norm2();
        for r in quadratic(qa, qb, qc) {
            out.push((c0 + c1 * r, r));
        }
    } else if a.normal.dot(b.normal) < 0.0 {
        let r = -(a.offset + b.offset) / 2.0;
        let mid = a.normal * (a.offset + r);
        let dir = a.normal.perp();
        let f = mid - v;
        for t in quadratic(1.0, 2.0 * dir.dot(f), f.norm2() - r * r) {
            out.push((mid + dir * t, r));
        }
    }
    out
}

/// Sweeps within rounding of a full turn are really zero.
fn near_zero(sweep: f64) -> f64 {
    if sweep > TAU - 1e-9 {
        0.0
    } else {
        sweep
    }
}

fn quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-14 {
        return if b != 0.0 { vec![-c / b] } else { vec![] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return vec![];
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
    let mut out = vec![q / a];
    if q != 0.0 {
        out.push(c / q);
    }
    out
}

/// Brute-force critical radius of every hull vertex of `points`.
pub fn oracle_table(e: &ConvexPolygon, points: &[Point]) -> Result<OracleReport> {
    let scale = e.diameter_bound().max(1.0);
    let tol = eps() * scale;
    if points.is_empty() {
        return Err(invalid("no obstacle points"));
    }
    if points.iter().any(|&p| e.locate(p, tol) == Location::Outside) {
        return Err(invalid("obstacle outside workspace"));
    }
    let inscribed = oracle_inscribed_circle(e);
    let r_star = inscribed.radius;
    let lines = e.lines();
    let m = lines.len();
    let mut rows = Vec::new();
    let mut best = r_star;
    for &v in convex_hull(points)?.vertices() {
        if v.dist(inscribed.center) <= r_star + tol {
            rows.push(OracleRow {
                vertex: v,
                radius: None,
                tangent_edges: None,
            });
            continue;
        }
        let mut found: Option<(f64, (usize, usize))> = None;
        for i in 0..m {
            for j in 0..m {
                if i == j {
                    continue;
                }
                for (c, r) in circles_through(v, &lines[i], &lines[j]) {
                    if !(r > 0.0) || r > r_star + tol {
                        continue;
                    }
                    let p1 = c - lines[i].normal * r;
                    let p2 = c - lines[j].normal * r;
                    let a1 = (p1 - c).angle();
                    let av = (v - c).angle();
                    let through = near_zero(ccw_sweep(a1, av)) + near_zero(ccw_sweep(av, (p2 - c).angle()));
                    if through > PI + eps() {
                        continue;
                    }
                    if !lines.iter().all(|l| l.signed_dist(c) >= r - tol) {
                        continue;
                    }
                    match found {
                        None => found = Some((r, (i, j))),
                        Some((r0, _)) if (r - r0).abs() <= 10.0 * eps() * r0.max(1.0) => {}
                        Some((r0, _)) => {
                            return Err(Error::Degenerate(format!(
                                "vertex {v:?} has critical radii {r0} and {r}"
                            )))
                        }
                    }
                }
            }
        }
        let (r, edges) = match found {
            Some(f) => f,
            None if v.dist(inscribed.center) <= r_star + 1e-6 * scale => (r_star, (0, 0)),
            None => return Err(Error::Geometry(format!("no critical circle for vertex {v:?}"))),
        };
        let r = r.min(r_star);
        best = best.min(r);
        rows.push(OracleRow {
            vertex: v,
            radius: Some(r),
            tangent_edges: Some(edges),
        });
    }
    Ok(OracleReport {
        inscribed,
        radius: best,
        rows,
    })
}

/// Smallest critical radius over the hull vertices, or the inscribed radius.
pub fn oracle_min_critical_radius(e: &ConvexPolygon, points: &[Point]) -> Result<f64> {
    oracle_table(e, points).map(|t| t.radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureEstimate {
    pub max_avg_curvature: f64,
    pub max_junction_tangent_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TourReport {
    pub closed: bool,
    pub smooth: bool,
    pub convex: bool,
    pub inside_workspace: bool,
    pub contains_obstacle: bool,
    pub curvature_bounded: bool,
    pub total_turning: f64,
    pub estimate: CurvatureEstimate,
    pub violations: Vec<String>,
}

impl TourReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Signed angle in `(-pi, pi]`.
fn wrap(a: f64) -> f64 {
    let a = norm_angle(a);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

/// Whether `p` is on the inner side of every element of a counterclockwise
/// convex closed curve.
pub fn inside_tour(t: &Tour, p: Point, tol: f64) -> bool {
    t.elements.iter().all(|e| match *e {
        TourElement::Segment { from, to } => {
            let d = to - from;
            let len = d.norm();
            len == 0.0 || d.cross(p - from) / len >= -tol
        }
        TourElement::Arc {
            center,
            radius,
            start_angle,
            end_angle,
        } => {
            let q = p - center;
            let d = q.norm();
            if d == 0.0 {
                return true;
            }
            let phi = q.angle();
            let reach = if ccw_sweep(start_angle, phi) <= end_angle - start_angle {
                d
            } else {
                d * (phi - start_angle).cos().max((phi - end_angle).cos())
            };
            reach <= radius + tol
        }
    })
}

fn sampling_step(t: &Tour) -> f64 {
    let shortest = t
        .elements
        .iter()
        .map(|e| match e {
            TourElement::Arc { radius, .. } => *radius,
            TourElement::Segment { .. } => e.length(),
        })
        .fold(f64::INFINITY, f64::min);
    (shortest / 64.0).max(t.length() / 20000.0)
}

/// Validates a tour against the workspace and obstacle.
pub fn check_tour(t: &Tour, e: &ConvexPolygon, obstacle: &[Point]) -> TourReport {
    let scale = e.diameter_bound().max(1.0);
    let tol = eps() * scale;
    let mut v = Vec::new();
    let n = t.elements.len();
    let mut gap_pos: f64 = 0.0;
    let mut gap_ang: f64 = 0.0;
    let mut ang_ok = true;
    for i in 0..n {
        let (a, b) = (&t.elements[i], &t.elements[(i + 1) % n]);
        gap_pos = gap_pos.max(a.end_point().dist(b.start_point()));
        let g = wrap(b.start_tangent().angle() - a.end_tangent().angle()).abs();
        gap_ang = gap_ang.max(g);
        // direction of a short segment carries coordinate rounding
        let slack = [a, b]
            .iter()
            .filter(|x| matches!(x, TourElement::Segment { .. }))
            .map(|x| 4.0 * f64::EPSILON * scale / x.length())
            .fold(0.0, f64::max);
        if g > 1e-9 + slack {
            ang_ok = false;
        }
    }
    let closed = n > 0 && gap_pos <= tol;
    if !closed {
        v.push(format!("not closed: endpoint gap {gap_pos:e}"));
    }
    if !ang_ok {
        v.push(format!("not C1: tangent gap {gap_ang:e} rad"));
    }
    let mut total = 0.0;
    let mut convex = true;
    for (i, el) in t.elements.iter().enumerate() {
        if el.turning() < 0.0 {
            convex = false;
        }
        let next = &t.elements[(i + 1) % n];
        total += el.turning() + wrap(next.start_tangent().angle() - el.end_tangent().angle());
    }
    if !convex || (total - TAU).abs() > 1e-6 {
        convex = false;
        v.push(format!("not convex: total turning {total}"));
    }
    let step = sampling_step(t);
    let samples = sample_path(t, step).unwrap_or_default();
    let inside_workspace = samples.iter().all(|s| e.locate(s.point, tol) != Location::Outside);
    if !inside_workspace {
        v.push("tour leaves the workspace".into());
    }
    let contains_obstacle = obstacle.iter().all(|&p| inside_tour(t, p, tol));
    if !contains_obstacle {
        v.push("obstacle not enclosed".into());
    }
    let per_element = t.elements.iter().all(|el| el.curvature() <= t.kappa * (1.0 + 1e-12) + eps());
    let mut max_avg: f64 = 0.0;
    for w in samples.windows(2) {
        let ds = w[1].arclength - w[0].arclength;
        if ds > 0.0 {
            let dth = wrap(w[1].direction.angle() - w[0].direction.angle()).abs();
            max_avg = max_avg.max(dth / ds);
        }
    }
    let curvature_bounded = per_element && max_avg <= t.kappa * (1.0 + 1e-6);
    if !curvature_bounded {
        v.push(format!("curvature {max_avg} exceeds bound {}", t.kappa));
    }
    TourReport {
        closed,
        smooth: ang_ok,
        convex,
        inside_workspace,
        contains_obstacle,
        curvature_bounded,
        total_turning: total,
        estimate: CurvatureEstimate {
            max_avg_curvature: max_avg,
            max_junction_tangent_gap: gap_ang,
        },
        violations: v,
    }
}

/// Checks that a circle of radius `1/kappa` centered at an arc center of
/// `t` fits inside the region bounded by `t`.
pub fn check_enclosed_circle(t: &Tour) -> bool {
    let Some(TourElement::Arc { center, .. }) = t.elements.iter().find(|e| matches!(e, TourElement::Arc { .. })) else {
        return false;
    };
    let r = 1.0 / t.kappa;
    let tol = eps() * (center.norm() + r).max(1.0);
    (0..256).all(|i| inside_tour(t, Circle::new(*center, r).point_at(TAU * i as f64 / 256.0), tol))
}

/// Sampled average-curvature comparison of two convex graphs `y = f(x)` and
/// `y = g(x)` over the same abscissas `x_0 = 0 < x_1 < ...`, touching at the
/// origin with a horizontal tangent (first chord slope at most `sqrt(x_1)`). `g` is a circular arc of radius `r`.
/// Returns whether the average curvature of `f` exceeds `1/r - tol`.
pub fn check_curvature_comparison(f: &[Point], g: &[Point], r: f64, tol: f64) -> Result<bool> {
    if f.len() < 3 || f.len() != g.len() || !(r > 0.0) {
        return Err(invalid("need matching samples of both curves and r > 0"));
    }
    if f.iter().zip(g).any(|(a, b)| (a.x - b.x).abs() > 1e-15 * a.x.abs().max(1.0)) {
        return Err(invalid("curves must share abscissas"));
    }
    if f[0].norm() > 1e-12 || g[0].norm() > 1e-12 {
        return Err(invalid("curves are not in contact at the origin"));
    }
    for c in [f, g] {
        let slope = (c[1].y - c[0].y) / (c[1].x - c[0].x);
        if !(c[1].x > 0.0) || slope.abs() > c[1].x.sqrt() {
            return Err(invalid("curves do not share the horizontal tangent at the origin"));
        }
    }
    if f.iter().zip(g).skip(1).any(|(a, b)| !(a.y > b.y)) {
        return Err(invalid("f must lie strictly above g away from the origin"));
    }
    let mut best: f64 = 0.0;
    for w in f.windows(3) {
        let (d0, d1) = (w[1] - w[0], w[2] - w[1]);
        let dth = wrap(d1.angle() - d0.angle()).abs();
        let ds = 0.5 * (d0.norm() + d1.norm());
        if ds > 0.0 {
            best = best.max(dth / ds);
        }
    }
    Ok(best > 1.0 / r - tol)
}
