//! Inverse direction: maximal disks and their cores, the stratification of a
//! domain, transverse measures, and recovery of grafting data.

mod domain;
mod measure;
mod recovery;
mod report;
mod strata;

pub use domain::{
    maximal_disk_at, normalizing_map, projection_psi, DiskComplementDomain, MaximalDiskRecord,
    DEFAULT_EDGE_SAMPLES, TOL_CONTACT,
};
pub use measure::{
    angle_sum, edge_crossing_path, face_center, transverse_measure, TransverseMeasure,
    MAX_REFINEMENTS, TOL_MEASURE,
};
pub use recovery::{
    loop_margin, random_loops, recover_weight_from_grafted, verify_covering, verify_goldman,
    RecoveredWeight,
};
pub use report::{Check, Report};
pub use strata::{cores_disjoint, stratification_check, DISK_MATCH_TOL};
