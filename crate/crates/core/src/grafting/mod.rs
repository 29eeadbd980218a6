//! Grafting along weighted multicurves: lifted leaves, the bending cocycle,
//! crescent charts, pleated surfaces and path lifting.

mod leaves;
mod multicurve;
mod path;
mod pleated;
mod structure;

pub use leaves::{
    h2_distance, h2_distance_to_geodesic, lift_crossings, Crossing, KleinChart, LeafSet, LiftedLeaf,
};
pub use multicurve::{CurveEntry, Weight, WeightedMulticurve};
pub use path::{develop_path, lift_loop, lifts_of, LoopLift, PathDevelopment};
pub use pleated::{pleated_surface, PleatedEdge, PleatedFace, PleatedSurfaceMesh};
pub use structure::{
    crescent_develop, grafted_holonomy, leaf_frame, CrescentChart, GraftedPoint, GraftedStructure,
    DEFAULT_DEPTH, DEFAULT_LEAF_RADIUS,
};
