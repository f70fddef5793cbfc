//! Critical arcs and the optimal-tour sweep, plus the constrained and
//! point-set variants.

use serde::Serialize;

use crate::arcs::{classify_vertex, AngularFrame, ArcEntry, ArcsList, Region};
use crate::error::{invalid, Error, Result};
use crate::geom::{ccw_sweep, convex_hull, eps, Circle, ConvexPolygon, Direction, EdgeLine, Location, Point, SimplePolygon};
use crate::paths::{maximal_path, maximal_path_with_radius, contains_polygon, Tour};
use crate::skeleton::{medial_axis, SkeletonTree};

/// Critical circle of a point together with its two tangency points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalArc {
    pub circle: Circle,
    pub vertex: Point,
    pub tangent_points: (Point, Point),
    pub sweep: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalResult {
    pub kappa_star: f64,
    pub radius: f64,
    pub limiting_vertex: Option<Point>,
    pub critical: Option<CriticalArc>,
    pub tour: Tour,
    /// Iterations of the vertex/arc sweep.
    pub iterations: usize,
}

/// A tangent constraint: the tour must touch `direction`'s line at `point`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub point: Point,
    pub direction: Direction,
}

/// Circle tangent to lines `a` and `b` through `v`, on the side of `v` that
/// faces the wedge apex. `reference` anchors the bisector parametrization
/// and rejects points inside it.
pub(crate) fn critical_circle(v: Point, a: &EdgeLine, b: &EdgeLine, reference: &Circle) -> Result<Circle> {
    let scale = reference.radius.max(1.0);
    if v.dist(reference.center) < reference.radius - eps() * scale {
        return Err(Error::NoCriticalArc);
    }
    let g = a.normal - b.normal;
    let g2 = g.norm2();
    let (base, u) = if g2 < 1e-24 {
        return Err(Error::Geometry("tangent lines coincide".into()));
    } else {
        let p = reference.center;
        let base = p + g * ((a.offset - b.offset - g.dot(p)) / g2);
        let mut u = g.perp() * (1.0 / g2.sqrt());
        let along = a.normal.dot(u);
        if along > 1e-15 || (along.abs() <= 1e-15 && u.dot(v - base) < 0.0) {
            u = -u;
        }
        (base, u)
    };
    let k = -a.normal.dot(u);
    let w0 = a.signed_dist(base);
    let d = base - v;
    // (1 - k^2) t^2 + 2 (u.d + k w0) t + |d|^2 - w0^2 = 0
    let qa = 1.0 - k * k;
    let qb = u.dot(d) + k * w0;
    let qc = d.norm2() - w0 * w0;
    let disc = qb * qb - qa * qc;
    if disc < -1e-12 * scale * scale {
        return Err(Error::Geometry("no critical circle through the point".into()));
    }
    let s = disc.max(0.0).sqrt();
    let q = -(qb + if qb >= 0.0 { s } else { -s });
    let mut roots = Vec::with_capacity(2);
    if q != 0.0 {
        roots.push(qc / q);
    }
    if qa.abs() > 1e-300 {
        roots.push(q / qa);
    }
    let pick = roots
        .into_iter()
        .filter(|t| t.is_finite())
        .map(|t| (base + u * t, w0 - k * t))
        .filter(|&(c, r)| r > 0.0 && (v - c).dot(u) >= -1e-9 * scale)
        .min_by(|x, y| y.1.total_cmp(&x.1));
    let (c, r) = pick.ok_or_else(|| Error::Geometry("no admissible critical circle".into()))?;
    Ok(Circle::new(c, r.min(reference.radius)))
}

/// Critical arc of `v` in the cell supported by `left` and `right`.
pub fn critical_arc(v: Point, left: &EdgeLine, right: &EdgeLine, tree: &SkeletonTree) -> Result<CriticalArc> {
    let circle = critical_circle(v, left, right, &tree.largest_inscribed_circle())?;
    let p1 = circle.center - left.normal * circle.radius;
    let p2 = circle.center - right.normal * circle.radius;
    let c = circle.center;
    Ok(CriticalArc {
        circle,
        vertex: v,
        tangent_points: (p1, p2),
        sweep: ccw_sweep((p1 - c).angle(), (p2 - c).angle()),
    })
}

/// Source of arcs for the sweep, in list order.
pub(crate) trait ArcCursor {
    fn current(&self) -> Option<&ArcEntry>;
    /// Moves to the next arc; `skip_subtree` may jump past arcs nested
    /// inside the current one.
    fn advance(&mut self, skip_subtree: bool);
}

struct ListCursor<'a> {
    list: &'a ArcsList,
    at: usize,
}

impl ArcCursor for ListCursor<'_> {
    fn current(&self) -> Option<&ArcEntry> {
        self.list.entries.get(self.at)
    }

    fn advance(&mut self, _skip_subtree: bool) {
        self.at += 1;
    }
}

/// Hull vertices in counterclockwise order around the frame's root, first
/// vertex just after the reference direction; ties nearer first.
pub(crate) fn radial_order(points: &[Point], frame: &AngularFrame) -> Result<Vec<Point>> {
    let hull = convex_hull(points)?;
    let mut keyed: Vec<(f64, f64, Point)> = hull
        .vertices()
        .iter()
        .map(|&p| (frame.key(p), p.dist(frame.root), p))
        .collect();
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(keyed.into_iter().map(|k| k.2).collect())
}

pub(crate) struct SweepOutcome {
    pub radius: f64,
    pub critical: Option<CriticalArc>,
    pub iterations: usize,
}

pub(crate) fn sweep(
    cursor: &mut impl ArcCursor,
    vertices: &[Point],
    frame: &AngularFrame,
    tree: &SkeletonTree,
) -> Result<SweepOutcome> {
    let root = tree.largest_inscribed_circle();
    let lines = tree.lines();
    let mut r = root.radius;
    let mut critical = None;
    let mut iterations = 0;
    let mut vi = 0;
    while vi < vertices.len() {
        let Some(a) = cursor.current() else { break };
        iterations += 1;
        let v = vertices[vi];
        match classify_vertex(v, a, frame) {
            Region::R1 => {
                let (la, lb) = (&lines[a.left_edge_index], &lines[a.right_edge_index]);
                match critical_circle(v, la, lb, &root) {
                    Ok(c) => {
                        if c.radius < r {
                            r = c.radius;
                            let p1 = c.center - la.normal * c.radius;
                            let p2 = c.center - lb.normal * c.radius;
                            critical = Some(CriticalArc {
                                circle: c,
                                vertex: v,
                                tangent_points: (p1, p2),
                                sweep: ccw_sweep((p1 - c.center).angle(), (p2 - c.center).angle()),
                            });
                        }
                    }
                    Err(Error::NoCriticalArc) => {}
                    Err(e) => return Err(e),
                }
                vi += 1;
            }
            Region::R2 => cursor.advance(false),
            Region::R4 => cursor.advance(true),
            Region::R3 | Region::R5 => vi += 1,
        }
    }
    Ok(SweepOutcome {
        radius: r,
        critical,
        iterations,
    })
}

pub(crate) fn check_inside(poly: &ConvexPolygon, points: &[Point], what: &str) -> Result<()> {
    let tol = eps() * poly.diameter_bound().max(1.0);
    if points.iter().any(|&p| !p.is_finite() || poly.locate(p, tol) == Location::Outside) {
        return Err(invalid(format!("{what} outside workspace")));
    }
    Ok(())
}

pub(crate) fn finish(tree: &SkeletonTree, out: SweepOutcome) -> Result<OptimalResult> {
    let tour = maximal_path_with_radius(tree, out.radius)?;
    Ok(OptimalResult {
        kappa_star: 1.0 / out.radius,
        radius: out.radius,
        limiting_vertex: out.critical.map(|c| c.vertex),
        critical: out.critical,
        tour,
        iterations: out.iterations,
    })
}

fn solve_points(e: &ConvexPolygon, points: &[Point]) -> Result<OptimalResult> {
    if points.is_empty() {
        return Err(invalid("obstacle has no points"));
    }
    check_inside(e, points, "obstacle")?;
    let tree = medial_axis(e)?;
    let arcs = ArcsList::build(&tree);
    let vertices = radial_order(points, &arcs.frame)?;
    let mut cursor = ListCursor { list: &arcs, at: 0 };
    let out = sweep(&mut cursor, &vertices, &arcs.frame, &tree)?;
    finish(&tree, out)
}

/// Smallest-curvature tour of `obstacle` inside `outer`.
pub fn optimal_tour(outer: &ConvexPolygon, obstacle: &SimplePolygon) -> Result<OptimalResult> {
    solve_points(outer, obstacle.vertices())
}

/// Maximal path for `kappa` if it encloses the obstacle.
pub fn tour_with_curvature(outer: &ConvexPolygon, obstacle: &SimplePolygon, kappa: f64) -> Result<Option<Tour>> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(invalid("kappa must be positive and finite"));
    }
    check_inside(outer, obstacle.vertices(), "obstacle")?;
    let tree = medial_axis(outer)?;
    let tour = match maximal_path(&tree, kappa) {
        Ok(t) => t,
        Err(Error::NoSuchPath { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let tol = eps() * outer.diameter_bound().max(1.0);
    Ok(contains_polygon(&tour, obstacle.vertices(), tol).then_some(tour))
}

/// Clips `poly` to the closed half-plane `side * cross(d, p - q) >= 0`.
fn clip(poly: &[Point], q: Point, d: Point, side: f64) -> Vec<Point> {
    let f = |p: Point| side * d.cross(p - q);
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, n) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fnx) = (f(p), f(n));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp > 0.0 && fnx < 0.0) || (fp < 0.0 && fnx > 0.0) {
            out.push(p.lerp(n, fp / (fp - fnx)));
        }
    }
    out
}

/// Optimal tour that touches each constraint line at its point.
pub fn constrained_tour(
    outer: &ConvexPolygon,
    obstacle: &SimplePolygon,
    constraints: &[Constraint],
) -> Result<OptimalResult> {
    if constraints.is_empty() {
        return optimal_tour(outer, obstacle);
    }
    let mut pts: Vec<Point> = obstacle.vertices().to_vec();
    for c in constraints {
        if !c.direction.is_unit() || !c.point.is_finite() {
            return Err(invalid("constraint direction must be a unit vector"));
        }
        pts.push(c.point);
    }
    check_inside(outer, &pts, "constraint point")?;
    let hull = convex_hull(&pts)?.into_vertices();
    let tol = eps() * outer.diameter_bound().max(1.0);
    let mut clipped = outer.vertices().to_vec();
    for c in constraints {
        let d = c.direction.as_point();
        let s: Vec<f64> = hull.iter().map(|&p| d.cross(p - c.point)).collect();
        let hi = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
        if hi > tol && lo < -tol {
            return Err(Error::Infeasible("constraint line crosses the obstacle".into()));
        }
        let side = if hi > tol {
            1.0
        } else if lo < -tol {
            -1.0
        } else if d.cross(outer.centroid() - c.point) < 0.0 {
            -1.0
        } else {
            1.0
        };
        clipped = clip(&clipped, c.point, d, side);
        if clipped.len() < 3 {
            return Err(Error::Infeasible("clipped workspace is empty".into()));
        }
    }
    let e2 = ConvexPolygon::new(clipped).map_err(|_| Error::Infeasible("clipped workspace is degenerate".into()))?;
    if check_inside(&e2, &hull, "obstacle").is_err() {
        return Err(Error::Infeasible("obstacle not inside the clipped workspace".into()));
    }
    solve_points(&e2, &hull)
}

/// Optimal tour around a finite point set.
pub fn tour_of_points(outer: &ConvexPolygon, points: &[Point]) -> Result<OptimalResult> {
    solve_points(outer, points)
}
