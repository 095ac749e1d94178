//! Combinatorial decision procedure for non-singular extensions of
//! horizontal stable fold maps from closed oriented surfaces to the plane.
//!
//! The surface and the map never appear directly. An [`Instance`] records
//! the combinatorial shadow of the map: the sheets over the plane with
//! their orientation signs, the fold circles with their collar type, the
//! complementary regions of the fold image together with the sheets lying
//! over each of them, region adjacencies and double points.
//!
//! From that data the crate
//!
//! * validates the structural laws such data must obey ([`validate_instance`]),
//! * enumerates the generated set of labeled bipartite candidate graphs
//!   ([`genset::enumerate_generated_set`]),
//! * searches for and independently checks admissible pairs
//!   ([`admissible::search_delta`], [`admissible::check_conditions`]),
//! * decides extendability ([`admissible::decide_extension`]),
//! * and emits an attachment plan for a certificate ([`construct::emit_build_plan`]).

pub mod admissible;
pub mod construct;
pub mod error;
pub mod genset;
pub mod io;
pub mod indexed;
pub mod model;
mod validate;

pub use error::{Error, Result};
pub use indexed::{ArcIx, FoldIx, GammaDiff, RegionIx, ValidatedInstance, VertexIx, VertexSet};
pub use model::{
    AdjacencyArc, ArcKind, DoublePoint, FoldEdge, FoldLabel, Instance, Region, Sign, Vertex,
};
pub use validate::{validate_instance, CrossingForm, CrossingReading, Law, ValidationReport, Violation};
