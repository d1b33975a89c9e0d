//! Geodetic graph families, their straight-line drawings, and exact analysis
//! of how often drawn shortest paths meet.
//!
//! Everything geometric uses exact rationals, so predicates never depend on
//! floating-point tolerance.

pub mod bounds;
pub mod charging;
pub mod field;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod layout;
pub mod meets;
pub mod plane;
pub mod shortest;
pub mod svg;

pub use charging::{
    build_crossing_graph, charge_crossings, find_c4, find_witness_pair, BipartiteCrossingGraph, ChargeMap,
    WitnessPair,
};
pub use generators::{
    bipartite_incidence_subgraph, diameter_two_graph, scapellato_graph, subdivided_complete, KstParams,
};
pub use geometry::{Point2, Rational};
pub use graph::{build_graph, Graph, GraphError, Path, VertexId, VertexRole};
pub use layout::{clustered_convex_layout, validate_drawing, Drawing};
pub use meets::{certify_philogeodetic, count_meets, segment_intersections, AnalysisError, MeetReport};
pub use shortest::{all_pairs_shortest, geodetic_report, is_geodetic, GeodeticReport, ShortestPathTable};
pub use svg::export_svg;
