//! Ordered Voronoi-circle arcs of the skeleton tree and the planar map they
//! induce together with the workspace boundary.
//!
//! Walking the tree depth-first with children in counterclockwise order, an
//! arc is emitted each time a node `x` is entered from its parent `v`: it lies
//! on `v`'s Voronoi circle, between the tangency points with the two polygon
//! edges whose bisector carries `v → x`. A leaf contributes a degenerate
//! point arc. Each arc bounds one cell of the map from the inside; the cell's
//! outer boundary is the matching arc of `x`'s circle (or the corner, for a
//! leaf).

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geom::{ccw_sweep, norm_angle, Circle, Location, Point};
use crate::skeleton::SkeletonTree;

/// Polar keys around the skeleton root, measured counterclockwise from the
/// first endpoint of the first arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularFrame {
    pub root: Point,
    pub reference: f64,
}

impl AngularFrame {
    pub fn key(&self, p: Point) -> f64 {
        let d = p - self.root;
        if d.x == 0.0 && d.y == 0.0 {
            return 0.0;
        }
        norm_angle(d.angle() - self.reference)
    }
}

/// Arc of the child's circle between the same two tangent edges; the cell's
/// far boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerArc {
    pub circle: Circle,
    pub first_endpoint: Point,
    pub second_endpoint: Point,
    pub key_first: f64,
    pub key_second: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcEntry {
    pub circle: Circle,
    pub start_angle: f64,
    /// `start_angle + sweep`; not normalized.
    pub end_angle: f64,
    pub first_endpoint: Point,
    pub second_endpoint: Point,
    pub left_edge_index: usize,
    pub right_edge_index: usize,
    pub degenerate: bool,
    /// Skeleton node carrying the circle.
    pub center_node: usize,
    /// Child node of the skeleton edge that produced this entry (the leaf
    /// itself for degenerate entries).
    pub skeleton_edge: usize,
    pub key_first: f64,
    pub key_second: f64,
    /// `None` for degenerate entries and for arcs into a leaf.
    pub inner: Option<InnerArc>,
}

impl ArcEntry {
    pub fn sweep(&self) -> f64 {
        self.end_angle - self.start_angle
    }

    /// Smallest arc of the same circle that contains this arc and every
    /// tangency point of the circle with the workspace boundary.
    pub fn extended_arc(&self, tree: &SkeletonTree) -> ArcEntry {
        if self.degenerate {
            return self.clone();
        }
        let node = tree.node(self.center_node);
        let c = self.circle;
        let sweep = self.sweep();
        let mut rel: Vec<f64> = node
            .tangent_edges
            .iter()
            .map(|&e| ccw_sweep(self.start_angle, (-tree.lines()[e].normal).angle()))
            .filter(|&a| a > sweep + 1e-12 && a < TAU - 1e-12)
            .collect();
        rel.sort_by(f64::total_cmp);
        // Candidates: keep [0, sweep] and drop one gap between consecutive
        // outside points. Start at the arc's own start on ties.
        let mut best = (0.0, rel.last().copied().unwrap_or(sweep).max(sweep));
        let mut best_len = best.1 - best.0;
        let mut cuts = vec![sweep];
        cuts.extend(rel.iter().copied());
        for w in 0..cuts.len() {
            let end = cuts[w];
            let start = match cuts.get(w + 1) {
                Some(&s) => s - TAU,
                None => 0.0,
            };
            let len = end - start;
            if len < best_len - 1e-12 {
                best = (start, end);
                best_len = len;
            }
        }
        let start_angle = self.start_angle + best.0;
        let end_angle = self.start_angle + best.1;
        ArcEntry {
            start_angle,
            end_angle,
            first_endpoint: c.point_at(start_angle),
            second_endpoint: c.point_at(end_angle),
            ..self.clone()
        }
    }
}

/// Region of a vertex relative to the current arc `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// Beyond `A` but not beyond the extension of `next(A)`.
    R1,
    /// Beyond the extension of `next(A)`.
    R2,
    /// Not beyond `A`.
    R3,
    /// Angularly after `A`.
    R4,
    /// Angularly before `A`.
    R5,
}

/// True when the ray from `origin` through `v` leaves `circle` before
/// reaching `v`.
pub(crate) fn beyond(v: Point, circle: &Circle, origin: Point) -> bool {
    let d = v - origin;
    let tv = d.norm();
    if tv == 0.0 || circle.radius <= 0.0 {
        return false;
    }
    let u = d * (1.0 / tv);
    let f = origin - circle.center;
    let b = u.dot(f);
    let disc = b * b - (f.norm2() - circle.radius * circle.radius);
    if disc < 0.0 {
        return false;
    }
    tv > -b + disc.sqrt()
}

/// Five-way classification of `v` against `a` (whose successor is `next`).
/// The inner arc stored on `a` is the extension of `next(a)` restricted to
/// the cell, which is all the classification needs.
pub fn classify_vertex(v: Point, a: &ArcEntry, frame: &AngularFrame) -> Region {
    let kv = frame.key(v);
    if kv < a.key_first {
        return Region::R5;
    }
    if kv > a.key_second {
        return Region::R4;
    }
    if a.degenerate || !beyond(v, &a.circle, frame.root) {
        return Region::R3;
    }
    match &a.inner {
        Some(inner) if kv >= inner.key_first && kv <= inner.key_second && beyond(v, &inner.circle, frame.root) => {
            Region::R2
        }
        _ => Region::R1,
    }
}

/// Traversal position in the depth-first arc order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Arc { parent: usize, child: usize },
    Leaf { node: usize },
}

pub(crate) fn first_step(tree: &SkeletonTree) -> Option<Step> {
    let r = tree.root_node();
    (!r.children.is_empty()).then_some(Step::Arc {
        parent: r.id,
        child: 0,
    })
}

fn sibling_after(tree: &SkeletonTree, mut parent: usize, mut child: usize) -> Option<Step> {
    loop {
        let p = tree.node(parent);
        if child + 1 < p.children.len() {
            return Some(Step::Arc {
                parent,
                child: child + 1,
            });
        }
        let up = p.parent?;
        child = p.child_index;
        parent = up;
    }
}

/// Successor of `step`; with `descend == false` an arc's subtree is skipped.
pub(crate) fn next_step(tree: &SkeletonTree, step: Step, descend: bool) -> Option<Step> {
    match step {
        Step::Arc { parent, child } => {
            let x = tree.node(parent).children[child];
            if !descend {
                return sibling_after(tree, parent, child);
            }
            if tree.node(x).is_leaf {
                Some(Step::Leaf { node: x })
            } else {
                Some(Step::Arc { parent: x, child: 0 })
            }
        }
        Step::Leaf { node } => {
            let n = tree.node(node);
            sibling_after(tree, n.parent?, n.child_index)
        }
    }
}

/// Frame anchored at the first endpoint of the first arc.
pub fn frame_of(tree: &SkeletonTree) -> AngularFrame {
    let root = tree.root_node();
    let reference = match root.children.first() {
        Some(&c) => {
            let a = tree.node(c).left_edge.expect("non-root node has supports");
            (-tree.lines()[a].normal).angle()
        }
        None => 0.0,
    };
    AngularFrame {
        root: root.position,
        reference,
    }
}

/// Materializes the entry at `step`. Returns `None` for arcs wider than a
/// semicircle, which never belong to the list.
pub(crate) fn entry_at(tree: &SkeletonTree, frame: &AngularFrame, step: Step) -> Option<ArcEntry> {
    let lines = tree.lines();
    match step {
        Step::Leaf { node } => {
            let n = tree.node(node);
            let k = frame.key(n.position);
            Some(ArcEntry {
                circle: Circle::new(n.position, 0.0),
                start_angle: 0.0,
                end_angle: 0.0,
                first_endpoint: n.position,
                second_endpoint: n.position,
                left_edge_index: n.left_edge.unwrap(),
                right_edge_index: n.right_edge.unwrap(),
                degenerate: true,
                center_node: node,
                skeleton_edge: node,
                key_first: k,
                key_second: k,
                inner: None,
            })
        }
        Step::Arc { parent, child } => {
            let v = tree.node(parent);
            let x = tree.node(v.children[child]);
            let (a, b) = (x.left_edge.unwrap(), x.right_edge.unwrap());
            let (na, nb) = (lines[a].normal, lines[b].normal);
            let start_angle = (-na).angle();
            let mut sweep = ccw_sweep(start_angle, (-nb).angle());
            if sweep > TAU - 1e-9 {
                // antiparallel within rounding on the wrong side of zero
                sweep = 0.0;
            }
            if sweep > PI + 1e-9 {
                return None;
            }
            let first = v.position - na * v.weight;
            let second = v.position - nb * v.weight;
            let key_first = if v.id == tree.root() && child == 0 {
                0.0
            } else {
                frame.key(first)
            };
            let unwrap = |k: f64| if k < key_first { k + TAU } else { k };
            let key_second = unwrap(frame.key(second));
            let inner = (!x.is_leaf).then(|| {
                let f = x.position - na * x.weight;
                let s = x.position - nb * x.weight;
                InnerArc {
                    circle: Circle::new(x.position, x.weight),
                    first_endpoint: f,
                    second_endpoint: s,
                    key_first: unwrap(frame.key(f)),
                    key_second: unwrap(frame.key(s)),
                }
            });
            Some(ArcEntry {
                circle: Circle::new(v.position, v.weight),
                start_angle,
                end_angle: start_angle + sweep,
                first_endpoint: first,
                second_endpoint: second,
                left_edge_index: a,
                right_edge_index: b,
                degenerate: false,
                center_node: v.id,
                skeleton_edge: x.id,
                key_first,
                key_second,
                inner,
            })
        }
    }
}

/// Cell of the planar map containing a query point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellDescriptor {
    InsideInscribedCircle,
    /// Between entry `outer` and its successor `inner` (an arc of the child's
    /// circle, or a corner).
    Between { outer: usize, inner: usize },
}

/// The ordered arc list with the bookkeeping needed for point location.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcsList {
    pub entries: Vec<ArcEntry>,
    pub root: Point,
    pub frame: AngularFrame,
    pub max_radius: f64,
    /// Entry of the skeleton edge into each entry's center node.
    #[serde(skip)]
    parent_entry: Vec<Option<usize>>,
}

impl ArcsList {
    pub fn build(tree: &SkeletonTree) -> ArcsList {
        let frame = frame_of(tree);
        let mut entries = Vec::with_capacity(2 * tree.nodes().len());
        let mut parent_entry = Vec::with_capacity(entries.capacity());
        // entry index of the arc entering each node
        let mut entering: Vec<Option<usize>> = vec![None; tree.nodes().len()];
        let mut step = first_step(tree);
        while let Some(s) = step {
            if let Some(e) = entry_at(tree, &frame, s) {
                let idx = entries.len();
                parent_entry.push(entering[e.center_node]);
                if !e.degenerate {
                    entering[e.skeleton_edge] = Some(idx);
                }
                entries.push(e);
            }
            step = next_step(tree, s, true);
        }
        ArcsList {
            entries,
            root: frame.root,
            frame,
            max_radius: tree.root_node().weight,
            parent_entry,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parent_entry(&self, idx: usize) -> Option<usize> {
        self.parent_entry[idx]
    }

    /// Classifies `v` against entry `idx`; `v` must lie in the workspace.
    pub fn classify(&self, tree: &SkeletonTree, v: Point, idx: usize) -> Result<Region> {
        if tree.polygon().locate(v, crate::geom::eps()) == Location::Outside {
            return Err(invalid("vertex outside the workspace"));
        }
        let a = self.entries.get(idx).ok_or_else(|| invalid("arc index out of range"))?;
        Ok(classify_vertex(v, a, &self.frame))
    }

    /// Point location by binary search on first-endpoint keys, then a walk
    /// up the nested arcs containing the query direction. Returns the cell
    /// and the number of entries inspected.
    pub fn locate_counted(&self, q: Point) -> (CellDescriptor, usize) {
        if q.dist(self.root) <= self.max_radius {
            return (CellDescriptor::InsideInscribedCircle, 0);
        }
        let kq = self.frame.key(q);
        let j = self.entries.partition_point(|e| e.key_first <= kq);
        let mut visited = (usize::BITS - self.entries.len().leading_zeros()) as usize;
        let mut cand = j.checked_sub(1);
        while let Some(c) = cand {
            visited += 1;
            let e = &self.entries[c];
            if !e.degenerate && kq >= e.key_first && kq <= e.key_second {
                break;
            }
            cand = self.parent_entry[c];
        }
        while let Some(c) = cand {
            visited += 1;
            if beyond(q, &self.entries[c].circle, self.root) {
                return (
                    CellDescriptor::Between {
                        outer: c,
                        inner: c + 1,
                    },
                    visited,
                );
            }
            cand = self.parent_entry[c];
        }
        (CellDescriptor::InsideInscribedCircle, visited)
    }

    pub fn locate_point(&self, tree: &SkeletonTree, q: Point) -> Result<CellDescriptor> {
        if tree.polygon().locate(q, crate::geom::eps()) == Location::Outside {
            return Err(invalid("query point outside the workspace"));
        }
        Ok(self.locate_counted(q).0)
    }

    /// Reference point location: tests every cell directly by solving for
    /// the maximal circle through `q` centered on the cell's skeleton edge.
    pub fn locate_linear_scan(&self, tree: &SkeletonTree, q: Point) -> CellDescriptor {
        if q.dist(self.root) <= self.max_radius {
            return CellDescriptor::InsideInscribedCircle;
        }
        let scale = tree.polygon().diameter_bound().max(1.0);
        let mut best: Option<(usize, f64)> = None;
        for (i, e) in self.entries.iter().enumerate() {
            if e.degenerate {
                continue;
            }
            let v = tree.node(e.center_node);
            let x = tree.node(e.skeleton_edge);
            if let Some(resid) = edge_family_residual(v.position, v.weight, x.position, x.weight, q, tree, e) {
                if resid <= 1e-9 * scale && best.map_or(true, |(_, r)| resid < r) {
                    best = Some((i, resid));
                }
            }
        }
        match best {
            Some((i, _)) => CellDescriptor::Between { outer: i, inner: i + 1 },
            None => CellDescriptor::InsideInscribedCircle,
        }
    }
}

/// For circles centered on segment `p → c` with linearly varying radius,
/// finds one through `q` whose apex-facing arc (between the two tangent
/// edges of `e`) contains `q`; returns how far outside the segment the
/// center falls (zero when inside).
fn edge_family_residual(
    p: Point,
    wp: f64,
    c: Point,
    wc: f64,
    q: Point,
    tree: &SkeletonTree,
    e: &ArcEntry,
) -> Option<f64> {
    let len = p.dist(c);
    if len == 0.0 {
        return None;
    }
    let u = (c - p) * (1.0 / len);
    let k = (wp - wc) / len;
    let f = p - q;
    // |f + t u|^2 = (wp - k t)^2
    let qa = 1.0 - k * k;
    let qb = 2.0 * (u.dot(f) + k * wp);
    let qc = f.norm2() - wp * wp;
    let mut roots = Vec::new();
    if qa.abs() < 1e-14 {
        if qb != 0.0 {
            roots.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        roots.push((-qb - s) / (2.0 * qa));
        roots.push((-qb + s) / (2.0 * qa));
    }
    let lines = tree.lines();
    let (na, nb) = (lines[e.left_edge_index].normal, lines[e.right_edge_index].normal);
    roots
        .into_iter()
        .filter_map(|t| {
            let center = p + u * t;
            let r = wp - k * t;
            if r <= 0.0 {
                return None;
            }
            let a0 = (-na).angle();
            let sweep = ccw_sweep(a0, (-nb).angle());
            let at = ccw_sweep(a0, (q - center).angle());
            let on_arc = at <= sweep + 1e-9 || at >= TAU - 1e-9;
            on_arc.then(|| (-t).max(t - len).max(0.0))
        })
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::ConvexPolygon;
    use crate::skeleton::medial_axis;
    use std::f64::consts::FRAC_PI_2;

    fn square_tree() -> SkeletonTree {
        medial_axis(
            &ConvexPolygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(4.0, 0.0),
                Point::new(4.0, 4.0),
                Point::new(0.0, 4.0),
            ])
            .unwrap(),
        )
        .unwrap()
    }

    fn arc_from(list: &ArcsList, p: Point) -> usize {
        list.entries
            .iter()
            .position(|e| !e.degenerate && e.first_endpoint.dist(p) < 1e-12)
            .unwrap()
    }

    #[test]
    fn square_has_four_quarter_arcs_and_four_corners() {
        let t = square_tree();
        let l = ArcsList::build(&t);
        assert_eq!(l.len(), 8);
        for (i, e) in l.entries.iter().enumerate() {
            assert_eq!(e.degenerate, i % 2 == 1);
            if !e.degenerate {
                assert!((e.sweep() - FRAC_PI_2).abs() < 1e-12);
                assert!((e.circle.radius - 2.0).abs() < 1e-12);
            }
        }
        for w in l.entries.windows(2) {
            assert!(w[0].key_first < w[1].key_first);
        }
    }

    #[test]
    fn triangle_keeps_its_three_arcs() {
        let s = 2.0;
        let t = medial_axis(
            &ConvexPolygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(s, 0.0),
                Point::new(s / 2.0, s * 3f64.sqrt() / 2.0),
            ])
            .unwrap(),
        )
        .unwrap();
        let l = ArcsList::build(&t);
        assert_eq!(l.len(), 6);
        let arcs: Vec<_> = l.entries.iter().filter(|e| !e.degenerate).collect();
        assert_eq!(arcs.len(), 3);
        for a in arcs {
            assert!((a.sweep() - 2.0 * PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extended_arc_of_square_quarter_spans_three_quarters() {
        let t = square_tree();
        let l = ArcsList::build(&t);
        let a = &l.entries[arc_from(&l, Point::new(4.0, 2.0))];
        let ext = a.extended_arc(&t);
        assert!((ext.sweep() - 3.0 * FRAC_PI_2).abs() < 1e-12);
        assert!(ext.first_endpoint.dist(Point::new(4.0, 2.0)) < 1e-12);
        let corner = l.entries.iter().find(|e| e.degenerate).unwrap();
        assert_eq!(&corner.extended_arc(&t), corner);
    }

    #[test]
    fn square_regions() {
        let t = square_tree();
        let l = ArcsList::build(&t);
        let i = arc_from(&l, Point::new(4.0, 2.0));
        let r = |x, y| l.classify(&t, Point::new(x, y), i).unwrap();
        assert_eq!(r(3.5, 3.5), Region::R1);
        assert_eq!(r(3.0, 2.5), Region::R3);
        assert_eq!(r(2.0, 0.5), Region::R5);
        assert!(l.classify(&t, Point::new(5.0, 5.0), i).is_err());
    }

    #[test]
    fn square_point_location() {
        let t = square_tree();
        let l = ArcsList::build(&t);
        let i = arc_from(&l, Point::new(4.0, 2.0));
        let q = Point::new(3.5, 3.5);
        assert_eq!(l.locate_point(&t, q).unwrap(), CellDescriptor::Between { outer: i, inner: i + 1 });
        assert_eq!(l.locate_linear_scan(&t, q), CellDescriptor::Between { outer: i, inner: i + 1 });
        assert!(l.entries[i + 1].degenerate);
        assert!(l.entries[i + 1].first_endpoint.dist(Point::new(4.0, 4.0)) < 1e-12);
        assert_eq!(
            l.locate_point(&t, Point::new(2.1, 2.0)).unwrap(),
            CellDescriptor::InsideInscribedCircle
        );
    }
    #[test]
    fn binary_search_location_matches_linear_scan() {
        use crate::testutil::{point_in, random_convex};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let p = random_convex(&mut rng, 25);
            let t = medial_axis(&p).unwrap();
            let l = ArcsList::build(&t);
            for w in l.entries.windows(2) {
                assert!(w[0].key_first <= w[1].key_first);
            }
            for _ in 0..200 {
                let q = point_in(&mut rng, &p);
                assert_eq!(l.locate_point(&t, q).unwrap(), l.locate_linear_scan(&t, q), "{q:?}");
            }
        }
    }
}
