//! Medial axis of a convex polygon as a rooted, weighted tree.
//!
//! The tree is built by offsetting every edge inward at unit speed. An edge
//! disappears when its two endpoint vertices meet; that collapse becomes a
//! tree node whose weight is the offset distance, i.e. the radius of the
//! Voronoi circle centered there. Collapses are processed in time order from
//! a binary heap, so construction is `O(m log m)`. The last collapse is the
//! root, and the result is a largest inscribed circle.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{invalid, Result};
use crate::geom::{eps, Circle, ConvexPolygon, EdgeLine, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonNode {
    pub id: usize,
    pub position: Point,
    /// Distance to the polygon boundary.
    pub weight: f64,
    pub parent: Option<usize>,
    /// Children in counterclockwise order.
    pub children: Vec<usize>,
    pub is_leaf: bool,
    /// Polygon edges whose bisector carries the edge to the parent. `left`
    /// precedes `right` counterclockwise; the subtree covers the boundary
    /// between them.
    pub left_edge: Option<usize>,
    pub right_edge: Option<usize>,
    /// Polygon edges tangent to this node's Voronoi circle, counterclockwise.
    pub tangent_edges: Vec<usize>,
    /// Index of this node in its parent's `children`.
    pub child_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonEdge {
    pub from: usize,
    pub to: usize,
    pub left_edge_index: usize,
    pub right_edge_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonTree {
    polygon: ConvexPolygon,
    nodes: Vec<SkeletonNode>,
    root: usize,
}

impl SkeletonTree {
    pub fn polygon(&self) -> &ConvexPolygon {
        &self.polygon
    }

    pub fn nodes(&self) -> &[SkeletonNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &SkeletonNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_node(&self) -> &SkeletonNode {
        &self.nodes[self.root]
    }

    pub fn lines(&self) -> &[EdgeLine] {
        self.polygon.lines()
    }

    /// Skeleton edges, one per non-root node, parent first.
    pub fn edges(&self) -> Vec<SkeletonEdge> {
        self.nodes
            .iter()
            .filter_map(|n| {
                Some(SkeletonEdge {
                    from: n.parent?,
                    to: n.id,
                    left_edge_index: n.left_edge?,
                    right_edge_index: n.right_edge?,
                })
            })
            .collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf).count()
    }

    pub fn largest_inscribed_circle(&self) -> Circle {
        largest_inscribed_circle(self)
    }

    /// Rebuilds a tree from stored parts (used when loading an index file).
    /// Derived fields are recomputed and the structure is validated.
    pub fn from_parts(polygon: ConvexPolygon, mut nodes: Vec<SkeletonNode>, root: usize) -> Result<Self> {
        let m = polygon.len();
        if root >= nodes.len() || nodes.len() < m + 1 {
            return Err(invalid("skeleton: bad node count or root"));
        }
        for (i, n) in nodes.iter().enumerate() {
            if n.id != i {
                return Err(invalid("skeleton: node ids must be dense"));
            }
            if n.children.iter().any(|&c| c >= nodes.len()) {
                return Err(invalid("skeleton: child index out of range"));
            }
            let supports_ok = match (n.left_edge, n.right_edge) {
                (Some(a), Some(b)) => a < m && b < m,
                (None, None) => i == root,
                _ => false,
            };
            if !supports_ok {
                return Err(invalid("skeleton: bad supporting edges"));
            }
        }
        let mut seen = vec![false; nodes.len()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for k in 0..nodes[v].children.len() {
                let c = nodes[v].children[k];
                if seen[c] {
                    return Err(invalid("skeleton: not a tree"));
                }
                seen[c] = true;
                nodes[c].parent = Some(v);
                nodes[c].child_index = k;
                queue.push_back(c);
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(invalid("skeleton: disconnected"));
        }
        nodes[root].parent = None;
        for n in nodes.iter_mut() {
            n.is_leaf = n.children.is_empty();
        }
        fill_tangent_edges(&mut nodes, root);
        Ok(SkeletonTree { polygon, nodes, root })
    }
}

/// Circle centered at the root with the root's weight.
pub fn largest_inscribed_circle(tree: &SkeletonTree) -> Circle {
    let r = tree.root_node();
    Circle::new(r.position, r.weight)
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    edge: usize,
    version: u32,
}

impl PartialEq for Event {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Event {
    fn cmp(&self, o: &Self) -> Ordering {
        self.time
            .total_cmp(&o.time)
            .then(self.edge.cmp(&o.edge))
            .then(self.version.cmp(&o.version))
    }
}

/// Wavefront vertex between an active edge and its successor.
#[derive(Debug, Clone, Copy)]
struct Vertex {
    source: usize,
    origin: Point,
    t0: f64,
    /// `None` when the two edges are antiparallel (the wavefront has
    /// collapsed to a segment and the vertex moves infinitely fast).
    velocity: Option<Point>,
}

impl Vertex {
    fn at(&self, t: f64) -> Option<Point> {
        self.velocity.map(|v| self.origin + v * (t - self.t0))
    }
}

fn bisector_velocity(a: &EdgeLine, b: &EdgeLine) -> Option<Point> {
    let d = 1.0 + a.normal.dot(b.normal);
    if d < 1e-12 {
        None
    } else {
        Some((a.normal + b.normal) * (1.0 / d))
    }
}

/// Intersection of two edge lines offset inward by `t`.
fn offset_intersection(a: &EdgeLine, b: &EdgeLine, t: f64) -> Option<Point> {
    let det = a.normal.cross(b.normal);
    if det.abs() < 1e-15 {
        return None;
    }
    let (ca, cb) = (a.offset + t, b.offset + t);
    Some(Point::new(
        (ca * b.normal.y - cb * a.normal.y) / det,
        (a.normal.x * cb - b.normal.x * ca) / det,
    ))
}

struct RawNode {
    position: Point,
    weight: f64,
    children: Vec<usize>,
    supports: Option<(usize, usize)>,
}

/// Builds the skeleton tree of `poly`.
pub fn medial_axis(poly: &ConvexPolygon) -> Result<SkeletonTree> {
    let m = poly.len();
    if m < 3 {
        return Err(invalid("workspace polygon is degenerate"));
    }
    let lines = poly.lines();
    let mut raw: Vec<RawNode> = (0..m)
        .map(|i| RawNode {
            position: poly.vertices()[i],
            weight: 0.0,
            children: Vec::new(),
            supports: Some(((i + m - 1) % m, i)),
        })
        .collect();

    let mut prev: Vec<usize> = (0..m).map(|i| (i + m - 1) % m).collect();
    let mut next: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    let mut alive = vec![true; m];
    let mut version = vec![0u32; m];
    // vertex[i] sits between edge i and next[i]
    let mut vertex: Vec<Vertex> = (0..m)
        .map(|i| {
            let j = (i + 1) % m;
            Vertex {
                source: j,
                origin: poly.vertices()[j],
                t0: 0.0,
                velocity: bisector_velocity(&lines[i], &lines[j]),
            }
        })
        .collect();

    let collapse_time = |e: usize, left: &Vertex, right: &Vertex, now: f64| -> f64 {
        let (Some(vl), Some(vr)) = (left.velocity, right.velocity) else {
            return now;
        };
        let d = lines[e].direction();
        let gap = d.dot(right.at(now).unwrap()) - d.dot(left.at(now).unwrap());
        let closing = d.dot(vl) - d.dot(vr);
        if closing <= 0.0 {
            return f64::INFINITY;
        }
        now + gap.max(0.0) / closing
    };

    let mut heap = BinaryHeap::new();
    for e in 0..m {
        let t = collapse_time(e, &vertex[prev[e]], &vertex[e], 0.0);
        heap.push(Reverse(Event { time: t, edge: e, version: 0 }));
    }

    let mut active = m;
    let mut now = 0.0f64;
    let mut last = None;
    while active > 2 {
        let Some(Reverse(ev)) = heap.pop() else {
            return Err(crate::Error::Geometry("skeleton event queue exhausted".into()));
        };
        if !alive[ev.edge] || ev.version != version[ev.edge] || !ev.time.is_finite() {
            continue;
        }
        now = now.max(ev.time);
        let e = ev.edge;
        let (p, q) = (prev[e], next[e]);
        let (left, right) = (vertex[p], vertex[e]);
        let position = match (left.at(now), right.at(now)) {
            (Some(a), Some(b)) => a.lerp(b, 0.5),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => offset_intersection(&lines[p], &lines[e], now)
                .or_else(|| offset_intersection(&lines[e], &lines[q], now))
                .unwrap_or(left.origin),
        };
        let id = raw.len();
        raw[left.source].supports = Some((p, e));
        raw[right.source].supports = Some((e, q));
        raw.push(RawNode {
            position,
            weight: now,
            children: vec![left.source, right.source],
            supports: None,
        });
        last = Some(id);

        alive[e] = false;
        next[p] = q;
        prev[q] = p;
        active -= 1;
        vertex[p] = Vertex {
            source: id,
            origin: position,
            t0: now,
            velocity: bisector_velocity(&lines[p], &lines[q]),
        };
        if active > 2 {
            for f in [p, q] {
                version[f] += 1;
                let t = collapse_time(f, &vertex[prev[f]], &vertex[f], now).max(now);
                heap.push(Reverse(Event { time: t, edge: f, version: version[f] }));
            }
        }
    }

    // Two edges remain; both wavefront vertices sit at the last collapse.
    let root = last.expect("at least one collapse");
    let a = (0..m).find(|&i| alive[i]).unwrap();
    let b = next[a];
    for (v, supports) in [(vertex[a], (a, b)), (vertex[b], (b, a))] {
        if v.source != root {
            raw[v.source].supports = Some(supports);
            raw[root].children.push(v.source);
        }
    }
    raw[root].supports = None;

    Ok(finish(poly.clone(), raw, root))
}

/// Contracts near-zero-length skeleton edges and renumbers: leaves keep the
/// polygon vertex index, internal nodes follow in breadth-first order.
fn finish(polygon: ConvexPolygon, raw: Vec<RawNode>, root: usize) -> SkeletonTree {
    let m = polygon.len();
    let tol = eps() * polygon.diameter_bound().max(1.0);
    let mergeable = |c: usize, into: usize| {
        c >= m
            && raw[c].position.dist(raw[into].position) <= tol
            && (raw[c].weight - raw[into].weight).abs() <= tol
    };

    let mut new_id = vec![usize::MAX; raw.len()];
    let mut order: Vec<usize> = Vec::new();
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); raw.len()];
    let mut next_internal = m;
    new_id[root] = next_internal;
    next_internal += 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let mut stack: Vec<usize> = raw[v].children.iter().rev().copied().collect();
        while let Some(c) = stack.pop() {
            if mergeable(c, v) {
                stack.extend(raw[c].children.iter().rev().copied());
            } else {
                kids[v].push(c);
                if c < m {
                    new_id[c] = c;
                } else {
                    new_id[c] = next_internal;
                    next_internal += 1;
                }
                queue.push_back(c);
            }
        }
    }

    let mut nodes: Vec<Option<SkeletonNode>> = vec![None; next_internal];
    for &v in &order {
        let id = new_id[v];
        let (left_edge, right_edge) = match raw[v].supports {
            Some((a, b)) if v != root => (Some(a), Some(b)),
            _ => (None, None),
        };
        nodes[id] = Some(SkeletonNode {
            id,
            position: raw[v].position,
            weight: raw[v].weight,
            parent: None,
            children: kids[v].iter().map(|&c| new_id[c]).collect(),
            is_leaf: v < m,
            left_edge,
            right_edge,
            tangent_edges: Vec::new(),
            child_index: 0,
        });
    }
    let mut nodes: Vec<SkeletonNode> = nodes.into_iter().map(|n| n.expect("every node reached")).collect();
    let root = m;
    for v in 0..nodes.len() {
        for k in 0..nodes[v].children.len() {
            let c = nodes[v].children[k];
            nodes[c].parent = Some(v);
            nodes[c].child_index = k;
        }
    }
    fill_tangent_edges(&mut nodes, root);
    SkeletonTree { polygon, nodes, root }
}

fn fill_tangent_edges(nodes: &mut [SkeletonNode], root: usize) {
    for v in 0..nodes.len() {
        let tangents: Vec<usize> = if nodes[v].is_leaf {
            vec![nodes[v].left_edge.unwrap(), nodes[v].right_edge.unwrap()]
        } else if v == root {
            nodes[v].children.iter().filter_map(|&c| nodes[c].left_edge).collect()
        } else {
            let mut t = vec![nodes[v].left_edge.unwrap()];
            t.extend(nodes[v].children.iter().filter_map(|&c| nodes[c].right_edge));
            t
        };
        nodes[v].tangent_edges = tangents;
    }
}
