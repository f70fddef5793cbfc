//! JSON instance and tour files, and SVG rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arcs::ArcsList;
use crate::error::Error;
use crate::geom::{eps, ConvexPolygon, Direction, Location, Point, SimplePolygon};
use crate::paths::{Tour, TourElement};
use crate::planner::Constraint;
use crate::skeleton::SkeletonTree;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawConstraint {
    point: Point,
    direction: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    outer: Vec<Point>,
    #[serde(default)]
    obstacle: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constraints: Option<Vec<RawConstraint>>,
}

/// A workspace, an obstacle (possibly empty for workspace-only files) and
/// optional tangent constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub outer: ConvexPolygon,
    pub obstacle: Vec<Point>,
    pub constraints: Vec<Constraint>,
}

impl Instance {
    /// The obstacle as a simple polygon.
    pub fn obstacle_polygon(&self) -> Result<SimplePolygon, IoError> {
        if self.obstacle.is_empty() {
            return Err(IoError::Validation("obstacle missing".into()));
        }
        SimplePolygon::new(self.obstacle.clone()).map_err(|e| IoError::Validation(format!("obstacle not simple: {e}")))
    }
}

fn outer_polygon(pts: Vec<Point>) -> Result<ConvexPolygon, IoError> {
    ConvexPolygon::new(pts).map_err(|e| match e {
        Error::InvalidInput(m) if m.contains("not convex") => IoError::Validation("outer not convex".into()),
        Error::InvalidInput(m) => IoError::Validation(format!("outer {}", m.trim_start_matches("polygon "))),
        other => IoError::Validation(other.to_string()),
    })
}

fn check_inside(outer: &ConvexPolygon, pts: &[Point], what: &str) -> Result<(), IoError> {
    let tol = eps() * outer.diameter_bound().max(1.0);
    if pts.iter().any(|&p| !p.is_finite() || outer.locate(p, tol) == Location::Outside) {
        return Err(IoError::Validation(format!("{what} outside workspace")));
    }
    Ok(())
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let outer = outer_polygon(raw.outer)?;
    check_inside(&outer, &raw.obstacle, "obstacle")?;
    if raw.obstacle.len() >= 3 {
        SimplePolygon::new(raw.obstacle.clone()).map_err(|e| IoError::Validation(format!("obstacle not simple: {e}")))?;
    }
    let mut constraints = Vec::new();
    for c in raw.constraints.unwrap_or_default() {
        let direction =
            Direction::new(c.direction).map_err(|_| IoError::Validation("constraint direction is zero".into()))?;
        check_inside(&outer, &[c.point], "constraint point")?;
        constraints.push(Constraint {
            point: c.point,
            direction,
        });
    }
    Ok(Instance {
        outer,
        obstacle: raw.obstacle,
        constraints,
    })
}

pub fn serialize_instance(inst: &Instance) -> String {
    let raw = RawInstance {
        outer: inst.outer.vertices().to_vec(),
        obstacle: inst.obstacle.clone(),
        constraints: (!inst.constraints.is_empty()).then(|| {
            inst.constraints
                .iter()
                .map(|c| RawConstraint {
                    point: c.point,
                    direction: c.direction.as_point(),
                })
                .collect()
        }),
    };
    serde_json::to_string_pretty(&raw).expect("instance serializes")
}

/// Obstacle file: either an instance-like object with an `obstacle` key or
/// a bare list of points.
pub fn parse_points(text: &str) -> Result<Vec<Point>, IoError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        List(Vec<Point>),
        Object { obstacle: Vec<Point> },
    }
    let doc: Doc = serde_json::from_str(text)?;
    let pts = match doc {
        Doc::List(p) | Doc::Object { obstacle: p } => p,
    };
    if pts.is_empty() {
        return Err(IoError::Validation("obstacle missing".into()));
    }
    Ok(pts)
}

pub fn tour_to_json(t: &Tour) -> String {
    serde_json::to_string_pretty(t).expect("tour serializes")
}

pub fn parse_tour(text: &str) -> Result<Tour, IoError> {
    let t: Tour = serde_json::from_str(text)?;
    for e in &t.elements {
        match *e {
            TourElement::Arc {
                radius,
                start_angle,
                end_angle,
                ..
            } if !(radius > 0.0 && end_angle >= start_angle) => {
                return Err(IoError::Validation("arc needs positive radius and ccw angles".into()))
            }
            _ => {}
        }
    }
    Ok(t)
}

/// Optional overlays for [`render_svg`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Annotations<'a> {
    pub skeleton: Option<&'a SkeletonTree>,
    pub arcs: Option<(&'a SkeletonTree, &'a ArcsList)>,
}

fn fmt_pt(out: &mut String, p: Point) {
    let _ = write!(out, "{} {}", p.x, p.y);
}

fn arc_command(out: &mut String, radius: f64, sweep: f64, to: Point) {
    let _ = write!(out, " A {radius} {radius} 0 {} 1 ", u8::from(sweep > std::f64::consts::PI));
    fmt_pt(out, to);
}

/// SVG path data for a tour, in y-up coordinates.
pub fn tour_path_data(t: &Tour) -> String {
    let mut d = String::new();
    let Some(first) = t.elements.first() else { return d };
    d.push_str("M ");
    fmt_pt(&mut d, first.start_point());
    for e in &t.elements {
        match *e {
            TourElement::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let sweep = end_angle - start_angle;
                // full circles need two arc commands
                let pieces = if sweep > 1.5 * std::f64::consts::PI { 2 } else { 1 };
                for k in 1..=pieces {
                    let a = start_angle + sweep * k as f64 / pieces as f64;
                    arc_command(&mut d, radius, sweep / pieces as f64, center + Point::from_angle(a) * radius);
                }
            }
            TourElement::Segment { to, .. } => {
                d.push_str(" L ");
                fmt_pt(&mut d, to);
            }
        }
    }
    d.push_str(" Z");
    d
}

fn polygon_points(pts: &[Point]) -> String {
    pts.iter().map(|p| format!("{},{}", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

/// Deterministic SVG of the workspace, obstacle and tour. The drawing group
/// flips the y axis so coordinates read as in a y-up plot.
pub fn render_svg(outer: &ConvexPolygon, obstacle: &[Point], tour: Option<&Tour>, ann: Annotations) -> String {
    let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
    for v in outer.vertices() {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let size = (hi.x - lo.x).max(hi.y - lo.y);
    let pad = 0.05 * size;
    let stroke = size / 400.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        lo.x - pad,
        -(hi.y + pad),
        hi.x - lo.x + 2.0 * pad,
        hi.y - lo.y + 2.0 * pad
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke-width="{stroke}">"#);
    let _ = writeln!(s, r#"<polygon class="outer" points="{}" stroke="black"/>"#, polygon_points(outer.vertices()));
    match obstacle.len() {
        0 => {}
        1 => {
            let _ = writeln!(
                s,
                r#"<circle class="obstacle" cx="{}" cy="{}" r="{}" fill="gray"/>"#,
                obstacle[0].x,
                obstacle[0].y,
                2.0 * stroke
            );
        }
        _ => {
            let _ = writeln!(
                s,
                r#"<polygon class="obstacle" points="{}" fill="gray" stroke="gray"/>"#,
                polygon_points(obstacle)
            );
        }
    }
    if let Some(tree) = ann.skeleton {
        for e in tree.edges() {
            let (a, b) = (tree.node(e.from).position, tree.node(e.to).position);
            let _ = writeln!(
                s,
                r#"<line class="skeleton" x1="{}" y1="{}" x2="{}" y2="{}" stroke="green"/>"#,
                a.x, a.y, b.x, b.y
            );
        }
    }
    if let Some((_, arcs)) = ann.arcs {
        for e in arcs.entries.iter().filter(|e| !e.degenerate) {
            let mut d = String::from("M ");
            fmt_pt(&mut d, e.first_endpoint);
            arc_command(&mut d, e.circle.radius, e.sweep(), e.second_endpoint);
            let _ = writeln!(s, r#"<path class="arc" d="{d}" stroke="orange"/>"#);
        }
    }
    if let Some(t) = tour {
        let _ = writeln!(
            s,
            r#"<path class="tour" d="{}" pathLength="{}" stroke="blue"/>"#,
            tour_path_data(t),
            t.length()
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
