//! Smallest-curvature convex tours of a polygonal obstacle inside a convex
//! workspace.
//!
//! The pipeline is:
//!
//! 1. [`skeleton::medial_axis`] builds the weighted medial-axis tree of the
//!    workspace polygon.
//! 2. [`arcs::ArcsList::build`] orders the Voronoi-circle arcs of that tree
//!    around its root.
//! 3. [`planner::optimal_tour`] sweeps the obstacle's hull vertices against the
//!    arcs, finds the binding critical radius and emits the maximal path
//!    ([`paths::maximal_path`]) at that curvature.
//!
//! [`dynamic::WorkspaceIndex`] amortizes steps 1–2 across many obstacle
//! queries, and [`oracle`] holds brute-force checks used by the tests.

pub mod arcs;
pub mod dynamic;
pub mod error;
pub mod geom;
pub mod io;
pub mod oracle;
pub mod paths;
pub mod planner;
pub mod skeleton;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use geom::{Circle, ConvexPolygon, Direction, Point, SimplePolygon};
pub use paths::{Tour, TourElement};
pub use planner::{optimal_tour, OptimalResult};
