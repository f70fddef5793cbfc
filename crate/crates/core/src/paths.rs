//! Smooth closed convex paths built from circular arcs and segments, and the
//! maximal path of a workspace for a given curvature bound.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom::{ccw_sweep, convex_hull, eps, Direction, Point};
use crate::skeleton::SkeletonTree;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TourElement {
    /// Counterclockwise arc; `end_angle > start_angle`.
    Arc {
        center: Point,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
    Segment { from: Point, to: Point },
}

impl TourElement {
    pub fn length(&self) -> f64 {
        match *self {
            TourElement::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } => radius * (end_angle - start_angle),
            TourElement::Segment { from, to } => from.dist(to),
        }
    }

    pub fn start_point(&self) -> Point {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point {
        self.point_at(self.length())
    }

    /// Point at arclength `s` from the element's start.
    pub fn point_at(&self, s: f64) -> Point {
        match *self {
            TourElement::Arc {
                center,
                radius,
                start_angle,
                ..
            } => center + Point::from_angle(start_angle + s / radius) * radius,
            TourElement::Segment { from, to } => {
                let len = from.dist(to);
                if len == 0.0 {
                    from
                } else {
                    from.lerp(to, s / len)
                }
            }
        }
    }

    /// Tangent angle at arclength `s`, not normalized.
    pub fn tangent_angle_at(&self, s: f64) -> f64 {
        match *self {
            TourElement::Arc {
                radius, start_angle, ..
            } => start_angle + s / radius + FRAC_PI_2,
            TourElement::Segment { from, to } => (to - from).angle(),
        }
    }

    pub fn start_tangent(&self) -> Direction {
        Direction::from_angle(self.tangent_angle_at(0.0))
    }

    pub fn end_tangent(&self) -> Direction {
        Direction::from_angle(self.tangent_angle_at(self.length()))
    }

    /// Signed curvature: `1/radius` on arcs, zero on segments.
    pub fn curvature(&self) -> f64 {
        match *self {
            TourElement::Arc { radius, .. } => 1.0 / radius,
            TourElement::Segment { .. } => 0.0,
        }
    }

    /// Total change of tangent angle across the element.
    pub fn turning(&self) -> f64 {
        match *self {
            TourElement::Arc {
                start_angle,
                end_angle,
                ..
            } => end_angle - start_angle,
            TourElement::Segment { .. } => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub kappa: f64,
    pub elements: Vec<TourElement>,
}

/// One sample of an arclength parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSample {
    pub point: Point,
    pub direction: Direction,
    pub arclength: f64,
}

impl Tour {
    pub fn length(&self) -> f64 {
        self.elements.iter().map(TourElement::length).sum()
    }

    /// Centers of the arcs, in tour order.
    pub fn arc_centers(&self) -> Vec<Point> {
        self.elements
            .iter()
            .filter_map(|e| match *e {
                TourElement::Arc { center, .. } => Some(center),
                TourElement::Segment { .. } => None,
            })
            .collect()
    }

    /// Common radius of the arcs, falling back to `1/kappa`.
    pub fn arc_radius(&self) -> f64 {
        self.elements
            .iter()
            .find_map(|e| match *e {
                TourElement::Arc { radius, .. } => Some(radius),
                TourElement::Segment { .. } => None,
            })
            .unwrap_or(1.0 / self.kappa)
    }

    /// Whether `p` lies in the closed region bounded by the tour.
    pub fn region_contains(&self, p: Point, tol: f64) -> bool {
        match convex_hull(&self.arc_centers()) {
            Ok(h) => h.distance(p) <= self.arc_radius() + tol,
            Err(_) => false,
        }
    }

    pub fn transformed(&self, rotation: f64, scale: f64, shift: Point) -> Tour {
        let (s, c) = rotation.sin_cos();
        let f = |p: Point| Point::new(c * p.x - s * p.y, s * p.x + c * p.y) * scale + shift;
        Tour {
            kappa: self.kappa / scale,
            elements: self
                .elements
                .iter()
                .map(|e| match *e {
                    TourElement::Arc {
                        center,
                        radius,
                        start_angle,
                        end_angle,
                    } => TourElement::Arc {
                        center: f(center),
                        radius: radius * scale,
                        start_angle: start_angle + rotation,
                        end_angle: end_angle + rotation,
                    },
                    TourElement::Segment { from, to } => TourElement::Segment {
                        from: f(from),
                        to: f(to),
                    },
                })
                .collect(),
        }
    }
}

/// True iff every point lies in the closed region bounded by `t`.
pub fn contains_polygon(t: &Tour, points: &[Point], tol: f64) -> bool {
    let Ok(h) = convex_hull(&t.arc_centers()) else {
        return false;
    };
    let r = t.arc_radius();
    points.iter().all(|&p| h.distance(p) <= r + tol)
}

/// Samples in arclength order; consecutive gaps are at most `step` and the
/// last sample closes the loop at the first element's start.
pub fn sample_path(t: &Tour, step: f64) -> Result<Vec<PathSample>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid("sampling step must be positive"));
    }
    let mut out = Vec::new();
    let mut base = 0.0;
    for e in &t.elements {
        let len = e.length();
        let n = (len / step).ceil().max(1.0) as usize;
        for i in 0..n {
            let s = len * i as f64 / n as f64;
            out.push(PathSample {
                point: e.point_at(s),
                direction: Direction::from_angle(e.tangent_angle_at(s)),
                arclength: base + s,
            });
        }
        base += len;
    }
    if let Some(first) = t.elements.first() {
        out.push(PathSample {
            point: first.start_point(),
            direction: first.start_tangent(),
            arclength: base,
        });
    }
    Ok(out)
}

/// Centers of all radius-`rho` circles tangent to two or more edges: one
/// per skeleton edge whose weight range brackets `rho`.
fn centers_at(tree: &SkeletonTree, rho: f64) -> Vec<Point> {
    let mut out = Vec::new();
    for x in tree.nodes() {
        let Some(p) = x.parent else { continue };
        let v = tree.node(p);
        if v.weight >= rho && rho > x.weight {
            let t = (v.weight - rho) / (v.weight - x.weight);
            out.push(v.position.lerp(x.position, t));
        }
    }
    if out.is_empty() {
        out.push(tree.root_node().position);
    }
    out
}

/// Maximal path for curvature bound `kappa`.
pub fn maximal_path(tree: &SkeletonTree, kappa: f64) -> Result<Tour> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(invalid("kappa must be positive and finite"));
    }
    maximal_path_with_radius(tree, 1.0 / kappa)
}

/// Maximal path whose arcs have radius `rho`.
pub fn maximal_path_with_radius(tree: &SkeletonTree, rho: f64) -> Result<Tour> {
    let r_star = tree.root_node().weight;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid("radius must be positive and finite"));
    }
    if rho > r_star + eps() * r_star.max(1.0) {
        return Err(Error::NoSuchPath {
            kappa: 1.0 / rho,
            radius: rho,
            max_radius: r_star,
        });
    }
    // 1/(1/r*) may land an ulp below r*
    let rho = if (rho - r_star).abs() <= 4.0 * f64::EPSILON * r_star {
        r_star
    } else {
        rho.min(r_star)
    };
    let hull = convex_hull(&centers_at(tree, rho))?;
    let tol = eps() * tree.polygon().diameter_bound().max(1.0);
    let mut c: Vec<Point> = Vec::with_capacity(hull.vertices().len());
    for &p in hull.vertices() {
        if c.last().map_or(true, |&q| q.dist(p) > tol) {
            c.push(p);
        }
    }
    while c.len() > 1 && c[0].dist(c[c.len() - 1]) <= tol {
        c.pop();
    }
    let kappa = 1.0 / rho;
    if c.len() == 1 {
        return Ok(Tour {
            kappa,
            elements: vec![TourElement::Arc {
                center: c[0],
                radius: rho,
                start_angle: 0.0,
                end_angle: TAU,
            }],
        });
    }
    let k = c.len();
    let outward = |i: usize| {
        let d = c[(i + 1) % k] - c[i];
        Point::new(d.y, -d.x) * (1.0 / d.norm())
    };
    let mut elements = Vec::with_capacity(2 * k);
    for i in 0..k {
        let n_in = outward((i + k - 1) % k);
        let n_out = outward(i);
        let start_angle = n_in.angle();
        elements.push(TourElement::Arc {
            center: c[i],
            radius: rho,
            start_angle,
            end_angle: start_angle + ccw_sweep(start_angle, n_out.angle()),
        });
        elements.push(TourElement::Segment {
            from: c[i] + n_out * rho,
            to: c[(i + 1) % k] + n_out * rho,
        });
    }
    Ok(Tour { kappa, elements })
}
