//! Planar primitives: points, directions, edge lines, polygons and hulls.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default incidence tolerance in workspace units.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Tolerance on the norm of a [`Direction`].
pub const UNIT_EPS: f64 = 1e-12;

/// Global incidence tolerance. `CONVEX_TOUR_EPS` overrides the default.
pub fn eps() -> f64 {
    static EPS: OnceLock<f64> = OnceLock::new();
    *EPS.get_or_init(|| {
        std::env::var("CONVEX_TOUR_EPS")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|e| e.is_finite() && *e > 0.0)
            .unwrap_or(DEFAULT_EPS)
    })
}

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(theta: f64) -> Point {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Orientation of the triple `(a, b, c)`: positive when counterclockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Normalizes an angle into `[0, 2π)`.
pub fn norm_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Counterclockwise sweep from angle `from` to angle `to`, in `[0, 2π)`.
pub fn ccw_sweep(from: f64, to: f64) -> f64 {
    norm_angle(to - from)
}

/// A unit tangent direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub dx: f64,
    pub dy: f64,
}

impl Direction {
    /// Normalizes `v`; fails on a zero or non-finite vector.
    pub fn new(v: Point) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(invalid("direction vector must be nonzero and finite"));
        }
        Ok(Direction {
            dx: v.x / n,
            dy: v.y / n,
        })
    }

    pub fn from_angle(theta: f64) -> Self {
        Direction {
            dx: theta.cos(),
            dy: theta.sin(),
        }
    }

    pub fn as_point(self) -> Point {
        Point::new(self.dx, self.dy)
    }

    pub fn angle(self) -> f64 {
        self.dy.atan2(self.dx)
    }

    pub fn is_unit(self) -> bool {
        ((self.dx * self.dx + self.dy * self.dy) - 1.0).abs() <= UNIT_EPS
    }
}

/// An oriented supporting line of a polygon edge, with the unit normal
/// pointing into the polygon. `signed_dist` is positive inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeLine {
    pub normal: Point,
    pub offset: f64,
}

impl EdgeLine {
    /// Line through `a` and `b` with the interior on the left of `a → b`.
    pub fn through(a: Point, b: Point) -> Result<Self> {
        let d = b - a;
        let len = d.norm();
        if !(len > 0.0) {
            return Err(invalid("edge endpoints coincide"));
        }
        let normal = d.perp() * (1.0 / len);
        Ok(EdgeLine {
            normal,
            offset: normal.dot(a),
        })
    }

    pub fn signed_dist(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Direction of travel along the edge (counterclockwise on the polygon).
    pub fn direction(&self) -> Point {
        Point::new(self.normal.y, -self.normal.x)
    }

    /// Foot of the perpendicular from `p`.
    pub fn project(&self, p: Point) -> Point {
        p - self.normal * self.signed_dist(p)
    }
}

/// Unsigned distance from `p` to the infinite line through `a` and `b`.
pub fn distance_point_to_edge_line(p: Point, a: Point, b: Point) -> Result<f64> {
    let d = b - a;
    let len = d.norm();
    if !(len > 0.0) {
        return Err(invalid("line endpoints coincide"));
    }
    Ok(d.cross(p - a).abs() / len)
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn distance_point_to_segment(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let l2 = d.norm2();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// A circle; radius zero encodes a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Self {
        Circle { center, radius }
    }

    pub fn point_at(&self, theta: f64) -> Point {
        self.center + Point::from_angle(theta) * self.radius
    }
}

/// Tri-state point/polygon classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    OnBoundary,
    Outside,
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
    lines: Vec<EdgeLine>,
}

impl ConvexPolygon {
    /// Canonicalizes `vertices` (drops duplicates and collinear vertices,
    /// orients counterclockwise) and checks strict convexity.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(invalid("polygon has non-finite coordinates"));
        }
        let tol = eps();
        let mut pts: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if pts.last().map_or(true, |q: &Point| q.dist(p) > tol) {
                pts.push(p);
            }
        }
        while pts.len() > 1 && pts[0].dist(*pts.last().unwrap()) <= tol {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(invalid("polygon needs at least 3 distinct vertices"));
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        // Drop collinear vertices until none remain.
        loop {
            let n = pts.len();
            if n < 3 {
                return Err(invalid("polygon is degenerate"));
            }
            let idx = (0..n).find(|&i| {
                let a = pts[(i + n - 1) % n];
                let b = pts[i];
                let c = pts[(i + 1) % n];
                // b within tol of the chord a-c, and not a spike
                orient(a, b, c).abs() <= tol * (c - a).norm() && (b - a).dot(c - b) > 0.0
            });
            match idx {
                Some(i) => {
                    pts.remove(i);
                }
                None => break,
            }
        }
        let n = pts.len();
        let mut turning = 0.0;
        for i in 0..n {
            let a = pts[(i + n - 1) % n];
            let b = pts[i];
            let c = pts[(i + 1) % n];
            let e1 = b - a;
            let e2 = c - b;
            if e1.cross(e2) <= 0.0 {
                return Err(invalid("polygon not convex"));
            }
            turning += e1.cross(e2).atan2(e1.dot(e2));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(invalid("polygon not convex"));
        }
        let lines = (0..n)
            .map(|i| EdgeLine::through(pts[i], pts[(i + 1) % n]))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConvexPolygon {
            vertices: pts,
            lines,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Supporting line of edge `i` (from vertex `i` to vertex `i + 1`).
    pub fn lines(&self) -> &[EdgeLine] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    /// Largest coordinate span, used to scale tolerances.
    pub fn diameter_bound(&self) -> f64 {
        let (mut lo, mut hi) = (self.vertices[0], self.vertices[0]);
        for p in &self.vertices {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (hi - lo).norm()
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as f64;
        self.vertices.iter().fold(Point::default(), |acc, &p| acc + p) * (1.0 / n)
    }

    pub fn locate(&self, p: Point, tol: f64) -> Location {
        point_in_convex_polygon(p, self, tol)
    }

    /// Minimum signed distance from `p` to the edge lines.
    pub fn depth(&self, p: Point) -> f64 {
        self.lines
            .iter()
            .map(|l| l.signed_dist(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn transformed(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        ConvexPolygon::new(self.vertices.iter().map(|&p| f(p)).collect())
    }
}

/// Twice-signed area would be the shoelace sum; this returns the area.
pub fn signed_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut s = 0.0;
    for i in 0..n {
        s += pts[i].cross(pts[(i + 1) % n]);
    }
    s * 0.5
}

/// Locates `p` by binary search over the fan of triangles at vertex 0, then
/// tests the edges that bound the selected triangle. Points outside the fan
/// fall back to a full scan.
pub fn point_in_convex_polygon(p: Point, poly: &ConvexPolygon, tol: f64) -> Location {
    let v = &poly.vertices;
    let m = v.len();
    let classify = |edges: &mut dyn Iterator<Item = usize>| {
        let mut min = f64::INFINITY;
        for i in edges {
            let d = poly.lines[i].signed_dist(p);
            if d < -tol {
                return Location::Outside;
            }
            min = min.min(d);
        }
        if min <= tol {
            Location::OnBoundary
        } else {
            Location::Inside
        }
    };
    if m < 8 || orient(v[0], v[1], p) < 0.0 || orient(v[0], v[m - 1], p) > 0.0 {
        return classify(&mut (0..m));
    }
    // largest k in [1, m-2] with p left of or on v0 -> v_k
    let (mut lo, mut hi) = (1, m - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if orient(v[0], v[mid], p) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = lo;
    classify(&mut [0, m - 1, k - 1, k, k + 1].into_iter())
}

/// A simple polygon (the obstacle). One or two vertices are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    /// Orients counterclockwise and rejects self-intersections.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(invalid("obstacle needs at least one vertex"));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(invalid("obstacle has non-finite coordinates"));
        }
        let mut pts = vertices;
        if pts.len() >= 3 {
            if signed_area(&pts) < 0.0 {
                pts.reverse();
            }
            if self_intersects(&pts) {
                return Err(invalid("obstacle polygon self-intersects"));
            }
        }
        Ok(SimplePolygon { vertices: pts })
    }

    pub fn point(p: Point) -> Self {
        SimplePolygon { vertices: vec![p] }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    let on = |p: Point, q: Point, r: Point, o: f64| {
        o == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Sweep over edges sorted by their left x-extent; only x-overlapping pairs
/// are tested.
fn self_intersects(pts: &[Point]) -> bool {
    let n = pts.len();
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| pts[i].x.min(pts[(i + 1) % n].x);
    let xmax = |i: usize| pts[i].x.max(pts[(i + 1) % n].x);
    order.sort_by(|&i, &j| xmin(i).total_cmp(&xmin(j)));
    for (k, &i) in order.iter().enumerate() {
        let hi = xmax(i);
        for &j in &order[k + 1..] {
            if xmin(j) > hi {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

/// Convex hull of a point set; may be a single point or a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Hull {
    vertices: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullKind {
    Point,
    Segment,
    Polygon,
}

impl Hull {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn kind(&self) -> HullKind {
        match self.vertices.len() {
            1 => HullKind::Point,
            2 => HullKind::Segment,
            _ => HullKind::Polygon,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.kind() != HullKind::Polygon
    }

    pub fn to_polygon(&self) -> Result<ConvexPolygon> {
        if self.is_degenerate() {
            return Err(invalid("hull is degenerate"));
        }
        ConvexPolygon::new(self.vertices.clone())
    }

    /// Distance from `p` to the hull (zero inside).
    pub fn distance(&self, p: Point) -> f64 {
        let v = &self.vertices;
        match v.len() {
            1 => p.dist(v[0]),
            2 => distance_point_to_segment(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| orient(v[i], v[(i + 1) % n], p) >= 0.0);
                if inside {
                    return 0.0;
                }
                (0..n)
                    .map(|i| distance_point_to_segment(p, v[i], v[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Andrew's monotone chain; output is counterclockwise, starting at the
/// lowest-leftmost point, with collinear points removed.
pub fn convex_hull(points: &[Point]) -> Result<Hull> {
    if points.is_empty() {
        return Err(invalid("convex hull of an empty point set"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(invalid("non-finite point"));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(Hull { vertices: pts });
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(Hull { vertices: lower })
}

/// Angle in `[0, π]` between two directions.
pub fn angle_between(a: Point, b: Point) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs().min(PI)
}
