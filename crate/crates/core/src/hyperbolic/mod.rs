//! Upper half-space geometry: points, geodesics, planes, rotations about
//! geodesics, nearest-point projections and convex-hull domes.

mod dome;
mod h3;

pub use dome::{distance_to_geodesic, dome, DomeEdge, DomeFace, DomeMesh};
pub use h3::{
    h3_distance, nearest_point_projection, rotation_about_geodesic, GeodesicH3, PlaneH3, PointH3,
};
