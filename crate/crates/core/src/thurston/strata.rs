use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use super::domain::{maximal_disk_at, DiskComplementDomain, MaximalDiskRecord};
use super::report::Report;
use crate::moebius::{MoebiusMap, PointCP1};
use crate::tolerance::TOL_GEO;

/// Tolerance for identifying two maximal disks.
pub const DISK_MATCH_TOL: f64 = 1e-8;
const ANGLE_TOL: f64 = 1e-9;

/// Angular sector `[start, start + width]` (counterclockwise).
#[derive(Debug, Clone, Copy)]
struct Sector {
    start: f64,
    width: f64,
}

fn overlap(a: Sector, b: Sector) -> bool {
    let d = (b.start - a.start).rem_euclid(TAU);
    if a.width <= ANGLE_TOL && b.width <= ANGLE_TOL {
        return d < ANGLE_TOL || TAU - d < ANGLE_TOL;
    }
    d < a.width - ANGLE_TOL || TAU - d < b.width - ANGLE_TOL
}

/// Sector of directions (seen from the first intersection point, with the
/// second sent to infinity) that contains the core of `rec`.
fn core_sector(rec: &MaximalDiskRecord, t: &MoebiusMap, ends: [PointCP1; 2]) -> Option<Sector> {
    let c = rec.disk.boundary.transform(t);
    // a circle through 0 and infinity: 2 Re(conj(z) b) = 0, disk towards -b
    let normal = -c.b / c.b.norm();
    let mut ray: Option<f64> = None;
    for p in &rec.ideal_points {
        if ends.iter().any(|e| e.chordal_distance(*p) < TOL_GEO) {
            continue;
        }
        let z = t.apply(*p).to_complex()?;
        let dir = z.arg();
        match ray {
            None => ray = Some(dir),
            Some(r) => {
                let d = (dir - r).rem_euclid(TAU);
                if d > 1e-6 && TAU - d > 1e-6 {
                    return None;
                }
            }
        }
    }
    let Some(r) = ray else {
        return Some(Sector {
            start: normal.arg(),
            width: 0.0,
        });
    };
    let u = Complex64::from_polar(1.0, r);
    let turn = u.re * normal.im - u.im * normal.re;
    Some(if turn > 0.0 {
        Sector {
            start: r,
            width: FRAC_PI_2,
        }
    } else {
        Sector {
            start: normal.arg(),
            width: FRAC_PI_2,
        }
    })
}

/// Whether the cores of two maximal disks are disjoint.
///
/// When the boundary circles cross at `a` and `b`, sending `a` to 0 and `b`
/// to infinity turns both disks into half-planes; each core then lies in the
/// quarter-plane between its ideal ray and its inward normal, and the cores
/// are disjoint exactly when those sectors do not overlap.
pub fn cores_disjoint(r1: &MaximalDiskRecord, r2: &MaximalDiskRecord) -> bool {
    let (c1, c2) = (r1.disk.boundary, r2.disk.boundary);
    if c1.approx_eq(&c2, DISK_MATCH_TOL) || c1.approx_eq(&c2.flipped(), DISK_MATCH_TOL) {
        return true;
    }
    let Some(ends) = c1.intersection_points(&c2) else {
        // distinct maximal disks with non-crossing boundaries are disjoint
        return !c2.disk_contains(r1.point) && !c1.disk_contains(r2.point);
    };
    if ends[0].chordal_distance(ends[1]) < TOL_GEO {
        return !c2.disk_contains(r1.point) && !c1.disk_contains(r2.point);
    }
    let Ok(t) = MoebiusMap::to_zero_infinity(ends[0], ends[1]) else {
        return false;
    };
    match (core_sector(r1, &t, ends), core_sector(r2, &t, ends)) {
        (Some(s1), Some(s2)) => !overlap(s1, s2),
        _ => false,
    }
}

/// Checks the stratification of the domain by cores on the given samples.
///
/// Every sample must receive a maximal disk whose core contains it, samples
/// with equal disks must share ideal points, and cores of distinct disks must
/// be disjoint.
pub fn stratification_check(dom: &DiskComplementDomain, samples: &[PointCP1]) -> Report {
    let records: Vec<_> = samples
        .par_iter()
        .map(|x| maximal_disk_at(dom, *x))
        .collect();
    let mut report = Report::new();
    let failed: Vec<usize> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_err())
        .map(|(i, _)| i)
        .collect();
    for &i in &failed {
        report.violation(format!("sample {i}: {}", records[i].as_ref().unwrap_err()));
    }
    report.check(
        "every sample assigned a maximal disk",
        failed.is_empty(),
        format!("{} failures", failed.len()),
    );
    let ok: Vec<&MaximalDiskRecord> = records.iter().filter_map(|r| r.as_ref().ok()).collect();
    let outside = ok.iter().filter(|r| !r.core_contains_point).count();
    report.check(
        "core contains its sample",
        outside == 0,
        format!("{outside} samples outside their core"),
    );

    // group by disk, in input order
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, r) in ok.iter().enumerate() {
        match classes.iter_mut().find(|c| {
            ok[c[0]]
                .disk
                .boundary
                .approx_eq(&r.disk.boundary, DISK_MATCH_TOL)
        }) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    let ideal_set = |i: usize| {
        let mut v = ok[i].ideal_indices.clone();
        v.sort_unstable();
        v
    };
    let mismatched: Vec<String> = classes
        .iter()
        .flat_map(|c| {
            c.iter()
                .filter(|&&i| ideal_set(i) != ideal_set(c[0]))
                .map(move |&i| (c[0], i))
        })
        .map(|(a, b)| format!("samples {a} and {b} share a disk but not its ideal points"))
        .collect();
    report.check(
        "equal disks share ideal points",
        mismatched.is_empty(),
        format!("{} mismatches", mismatched.len()),
    );
    for m in mismatched {
        report.violation(m);
    }

    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .flat_map(|i| (i + 1..classes.len()).map(move |j| (i, j)))
        .collect();
    let overlapping: Vec<(usize, usize)> = pairs
        .par_iter()
        .filter(|&&(i, j)| !cores_disjoint(ok[classes[i][0]], ok[classes[j][0]]))
        .copied()
        .collect();
    report.check(
        "cores of distinct disks are disjoint",
        overlapping.is_empty(),
        format!("{} of {} pairs overlap", overlapping.len(), pairs.len()),
    );
    for (i, j) in overlapping {
        report.violation(format!("cores of disk classes {i} and {j} overlap"));
    }
    report.value("samples", samples.len());
    report.value("disk_classes", classes.len());
    report.value("core_pairs_checked", pairs.len());
    report.value("angle_tolerance", ANGLE_TOL);
    report
}
