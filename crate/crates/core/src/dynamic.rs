//! Preprocessed workspace for repeated obstacle queries.
//!
//! The skeleton tree is built once. Tour queries walk its arcs lazily and
//! skip whole subtrees once a vertex is angularly past them; curvature-only
//! queries locate each point by binary search over arc first endpoints.

use serde::{Deserialize, Serialize};

use crate::arcs::{entry_at, first_step, frame_of, next_step, AngularFrame, ArcEntry, ArcsList, CellDescriptor, Step};
use crate::error::{invalid, Error, Result};
use crate::geom::{convex_hull, ConvexPolygon, Point, SimplePolygon};
use crate::planner::{check_inside, critical_circle, finish, radial_order, sweep, ArcCursor, OptimalResult};
use crate::skeleton::{medial_axis, SkeletonNode, SkeletonTree};

pub const INDEX_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct WorkspaceIndex {
    skeleton: SkeletonTree,
    frame: AngularFrame,
    locator: ArcsList,
}

/// Arc cursor that generates entries from the tree on demand.
struct LazyCursor<'a> {
    tree: &'a SkeletonTree,
    frame: &'a AngularFrame,
    step: Option<Step>,
    entry: Option<ArcEntry>,
    visited: usize,
}

impl<'a> LazyCursor<'a> {
    fn new(tree: &'a SkeletonTree, frame: &'a AngularFrame) -> Self {
        let mut c = LazyCursor {
            tree,
            frame,
            step: first_step(tree),
            entry: None,
            visited: 0,
        };
        c.settle();
        c
    }

    /// Loads the entry at the current step, passing over steps that yield
    /// no entry.
    fn settle(&mut self) {
        self.entry = None;
        while let Some(s) = self.step {
            self.visited += 1;
            if let Some(e) = entry_at(self.tree, self.frame, s) {
                self.entry = Some(e);
                return;
            }
            self.step = next_step(self.tree, s, true);
        }
    }
}

impl ArcCursor for LazyCursor<'_> {
    fn current(&self) -> Option<&ArcEntry> {
        self.entry.as_ref()
    }

    fn advance(&mut self, skip_subtree: bool) {
        if let Some(s) = self.step {
            self.step = next_step(self.tree, s, !skip_subtree);
            self.settle();
        }
    }
}

/// Serialized skeleton node; derived fields are rebuilt on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredNode {
    pub position: Point,
    pub weight: f64,
    pub children: Vec<usize>,
    pub left_edge: Option<usize>,
    pub right_edge: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredSkeleton {
    pub root: usize,
    pub nodes: Vec<StoredNode>,
}

impl StoredSkeleton {
    pub fn from_tree(t: &SkeletonTree) -> Self {
        StoredSkeleton {
            root: t.root(),
            nodes: t
                .nodes()
                .iter()
                .map(|n| StoredNode {
                    position: n.position,
                    weight: n.weight,
                    children: n.children.clone(),
                    left_edge: n.left_edge,
                    right_edge: n.right_edge,
                })
                .collect(),
        }
    }

    pub fn into_tree(self, polygon: ConvexPolygon) -> Result<SkeletonTree> {
        let nodes = self
            .nodes
            .into_iter()
            .enumerate()
            .map(|(id, n)| SkeletonNode {
                id,
                position: n.position,
                weight: n.weight,
                parent: None,
                children: n.children,
                is_leaf: false,
                left_edge: n.left_edge,
                right_edge: n.right_edge,
                tangent_edges: Vec::new(),
                child_index: 0,
            })
            .collect();
        SkeletonTree::from_parts(polygon, nodes, self.root)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexFile {
    pub version: u32,
    pub polygon: Vec<Point>,
    pub skeleton: StoredSkeleton,
}

impl WorkspaceIndex {
    pub fn skeleton(&self) -> &SkeletonTree {
        &self.skeleton
    }

    pub fn frame(&self) -> &AngularFrame {
        &self.frame
    }

    pub fn locator(&self) -> &ArcsList {
        &self.locator
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        self.skeleton.polygon()
    }

    fn from_tree(skeleton: SkeletonTree) -> Self {
        let frame = frame_of(&skeleton);
        let locator = ArcsList::build(&skeleton);
        WorkspaceIndex {
            skeleton,
            frame,
            locator,
        }
    }

    pub fn to_file(&self) -> IndexFile {
        IndexFile {
            version: INDEX_VERSION,
            polygon: self.polygon().vertices().to_vec(),
            skeleton: StoredSkeleton::from_tree(&self.skeleton),
        }
    }

    pub fn from_file(f: IndexFile) -> Result<Self> {
        if f.version != INDEX_VERSION {
            return Err(invalid(format!("unsupported index version {}", f.version)));
        }
        let polygon = ConvexPolygon::new(f.polygon)?;
        if polygon.len() + 1 > f.skeleton.nodes.len() {
            return Err(invalid("index skeleton does not match its polygon"));
        }
        Ok(Self::from_tree(f.skeleton.into_tree(polygon)?))
    }
}

pub fn preprocess(e: &ConvexPolygon) -> Result<WorkspaceIndex> {
    Ok(WorkspaceIndex::from_tree(medial_axis(e)?))
}

/// Optimal tour plus the number of arc positions the lazy walk generated.
pub fn query_tour_counted(ix: &WorkspaceIndex, obstacle: &[Point]) -> Result<(OptimalResult, usize)> {
    if obstacle.is_empty() {
        return Err(invalid("obstacle has no points"));
    }
    check_inside(ix.polygon(), obstacle, "obstacle")?;
    let vertices = radial_order(obstacle, &ix.frame)?;
    let mut cursor = LazyCursor::new(&ix.skeleton, &ix.frame);
    let out = sweep(&mut cursor, &vertices, &ix.frame, &ix.skeleton)?;
    let visited = cursor.visited;
    Ok((finish(&ix.skeleton, out)?, visited))
}

pub fn query_tour(ix: &WorkspaceIndex, obstacle: &SimplePolygon) -> Result<OptimalResult> {
    query_tour_counted(ix, obstacle.vertices()).map(|r| r.0)
}

/// Optimal curvature of a point set plus the number of arc entries the
/// point location inspected.
pub fn query_curvature_counted(ix: &WorkspaceIndex, points: &[Point]) -> Result<(f64, usize)> {
    if points.is_empty() {
        return Err(invalid("no query points"));
    }
    check_inside(ix.polygon(), points, "query point")?;
    let root = ix.skeleton.largest_inscribed_circle();
    let lines = ix.skeleton.lines();
    let mut r = root.radius;
    let mut visited = 0;
    for &p in points {
        let (cell, n) = ix.locator.locate_counted(p);
        visited += n;
        if let CellDescriptor::Between { outer, .. } = cell {
            let a = &ix.locator.entries[outer];
            match critical_circle(p, &lines[a.left_edge_index], &lines[a.right_edge_index], &root) {
                Ok(c) => r = r.min(c.radius),
                Err(Error::NoCriticalArc) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok((1.0 / r, visited))
}

pub fn query_curvature(ix: &WorkspaceIndex, points: &[Point]) -> Result<f64> {
    query_curvature_counted(ix, points).map(|r| r.0)
}

pub fn query_tour_points(ix: &WorkspaceIndex, points: &[Point]) -> Result<OptimalResult> {
    if points.is_empty() {
        return Err(invalid("no query points"));
    }
    let hull = convex_hull(points)?;
    query_tour_counted(ix, hull.vertices()).map(|r| r.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::{optimal_tour, tour_of_points};
    use crate::testutil::{point_in, random_convex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    fn square() -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 4.0),
            Point::new(0.0, 4.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_index() {
        let ix = preprocess(&square()).unwrap();
        assert_eq!(ix.skeleton().nodes().len(), 5);
        let k = query_curvature(&ix, &[Point::new(3.5, 3.5)]).unwrap();
        assert!((k - 1.0 / (1.0 + SQRT_2 / 2.0)).abs() < 1e-12);
        let inner: Vec<Point> = (0..10).map(|i| Point::from_angle(i as f64) + Point::new(2.0, 2.0)).collect();
        assert_eq!(query_curvature(&ix, &inner).unwrap(), 0.5);
        assert!(query_tour_points(&ix, &[]).is_err());
    }

    #[test]
    fn index_round_trips_through_json() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_convex(&mut rng, 30);
        let ix = preprocess(&p).unwrap();
        let text = serde_json::to_string(&ix.to_file()).unwrap();
        let back = WorkspaceIndex::from_file(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, ix);
        assert_eq!(serde_json::to_string(&preprocess(&p).unwrap().to_file()).unwrap(), text);
    }

    #[test]
    fn queries_match_static_planner() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let e = random_convex(&mut rng, 40);
            let ix = preprocess(&e).unwrap();
            let n = rng.gen_range(1..30);
            let pts: Vec<Point> = (0..n).map(|_| point_in(&mut rng, &e)).collect();
            let a = query_tour_points(&ix, &pts).unwrap();
            let b = tour_of_points(&e, &pts).unwrap();
            assert_eq!(a.kappa_star.to_bits(), b.kappa_star.to_bits());
            assert_eq!(a.tour, b.tour);
            let hull = SimplePolygon::new(convex_hull(&pts).unwrap().into_vertices()).unwrap();
            let (q, o) = (query_tour(&ix, &hull).unwrap(), optimal_tour(&e, &hull).unwrap());
            assert_eq!((q.kappa_star.to_bits(), &q.tour), (o.kappa_star.to_bits(), &o.tour));
            assert!(q.iterations <= o.iterations);
            let k = query_curvature(&ix, &pts).unwrap();
            assert!((k - b.kappa_star).abs() <= 1e-9 * b.kappa_star);
        }
    }
}
