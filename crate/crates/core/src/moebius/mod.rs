//! Numerical PSL(2, C): points of CP1, Moebius maps, oriented round circles
//! and minimal enclosing disks.

mod circle;
mod enclosing;
mod map;
mod point;

pub use circle::{angle_between, CircleShape, OrientedCircle, RoundDisk};
pub use enclosing::{
    circumcircle, minimal_enclosing_disk, minimal_enclosing_disk_seeded, support_points,
    EnclosingDisk, DEFAULT_SEED,
};
pub use map::{Classification, MoebiusKind, MoebiusMap};
pub use point::{cross_ratio, PointCP1};
