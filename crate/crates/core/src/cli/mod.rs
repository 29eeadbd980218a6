//! Batch front end: configuration, commands and output schemas.

mod commands;
mod config;
mod output;

pub use commands::{domain_samples, exit_code, export, graft, verify, Check, Outcome, Target};
pub use config::{
    random_sphere_point, ConfigPoint, CoveringConfig, DomainConfig, DomainPreset, InfinityTag,
    RunConfig, SurfaceConfig,
};
pub use output::{holonomy_csv, points_csv, to_json, write_atomic, MeshEdge, MeshJson};
