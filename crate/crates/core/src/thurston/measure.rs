use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::domain::{maximal_disk_at, DiskComplementDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::DomeMesh;
use crate::moebius::{MoebiusMap, OrientedCircle, PointCP1};

pub const TOL_MEASURE: f64 = 1e-5;
pub const MAX_REFINEMENTS: usize = 16;
/// Levels computed before convergence is tested.
const MIN_LEVELS: usize = 4;

/// Cauchy trace of the transverse measure under dyadic refinement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransverseMeasure {
    pub value: f64,
    /// Sum of disk angles at each level; `None` where consecutive disks missed each other.
    pub trace: Vec<Option<f64>>,
    pub converged: bool,
}

/// Sum of angles between consecutive disks, or `None` if two of them do not meet.
pub fn angle_sum(disks: &[OrientedCircle]) -> Option<f64> {
    disks.windows(2).map(|w| w[0].separation_angle(&w[1])).sum()
}

/// Points of the polyline with every segment cut into `2^level` pieces,
/// interpolated along the great circle of the sphere.
fn refine(path: &[PointCP1], level: usize) -> Vec<PointCP1> {
    let k = 1usize << level;
    let mut out = vec![path[0]];
    for w in path.windows(2) {
        let (a, b) = (w[0].to_sphere(), w[1].to_sphere());
        for j in 1..=k {
            let t = j as f64 / k as f64;
            let s = [0, 1, 2].map(|i| a[i] + (b[i] - a[i]) * t);
            let n = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
            out.push(if j == k {
                w[1]
            } else {
                PointCP1::from_sphere(s.map(|v| v / n))
            });
        }
    }
    out
}

/// Transverse measure of the path: the limit of the angle sums of maximal
/// disks over dyadic refinements of its vertices.
pub fn transverse_measure(
    dom: &DiskComplementDomain,
    path: &[PointCP1],
    max_levels: usize,
) -> Result<TransverseMeasure> {
    if path.len() < 2 {
        return Err(Error::Empty("transversal needs two points"));
    }
    let mut trace = Vec::new();
    let mut last: Option<f64> = None;
    for level in 0..=max_levels.min(MAX_REFINEMENTS) {
        let pts = refine(path, level);
        let disks: Vec<OrientedCircle> = pts
            .par_iter()
            .map(|x| maximal_disk_at(dom, *x).map(|r| r.disk.boundary))
            .collect::<Result<_>>()?;
        let theta = angle_sum(&disks);
        trace.push(theta);
        if let (Some(t), Some(prev)) = (theta, last) {
            if level + 1 >= MIN_LEVELS && (t - prev).abs() < TOL_MEASURE {
                return Ok(TransverseMeasure {
                    value: t,
                    trace,
                    converged: true,
                });
            }
        }
        last = theta;
    }
    match last {
        Some(value) => Ok(TransverseMeasure {
            value,
            trace,
            converged: false,
        }),
        None => Err(Error::Transversality(
            "consecutive maximal disks miss each other at the finest level".into(),
        )),
    }
}

/// Point of the support disk of a dome face lying over the center of the
/// face's ideal triangle (its first three vertices).
pub fn face_center(dome: &DomeMesh, face: usize) -> Result<PointCP1> {
    let f = &dome.faces[face];
    let s = f.plane.boundary.standardizing_map();
    let v: Vec<PointCP1> = f
        .vertices
        .iter()
        .take(3)
        .map(|&i| s.apply(dome.vertices[i]))
        .collect();
    let mut t = MoebiusMap::to_zero_one_infinity(v[0], v[1], v[2])?;
    if t.apply_complex(Complex64::new(0.0, 1.0))
        .to_complex()
        .is_none_or(|z| z.im < 0.0)
    {
        t = MoebiusMap::to_zero_one_infinity(v[1], v[0], v[2])?;
    }
    let c = Complex64::new(0.5, 3f64.sqrt() / 2.0);
    Ok((s.inverse() * t.inverse()).apply_complex(c))
}

/// A path from the core of one face of `edge` to the core of the other that
/// meets no other bending line: arcs around the edge's first endpoint, with
/// the second endpoint at infinity.
pub fn edge_crossing_path(dome: &DomeMesh, edge: usize, samples: usize) -> Result<Vec<PointCP1>> {
    let e = &dome.edges[edge];
    let ends = e.ends.map(|i| dome.vertices[i]);
    let t = MoebiusMap::to_zero_infinity(ends[0], ends[1])?;
    let tinv = t.inverse();
    let setup = |face: usize| -> Result<(f64, f64, f64)> {
        let c = dome.faces[face].plane.boundary.transform(&t);
        let normal = (-c.b).arg();
        let r = dome.faces[face]
            .vertices
            .iter()
            .filter(|&&i| !e.ends.contains(&i))
            .filter_map(|&i| t.apply(dome.vertices[i]).to_complex())
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        if !r.is_finite() {
            return Err(Error::Degenerate("face without a third vertex".into()));
        }
        Ok((normal, r, 0.0))
    };
    let (n1, r1, _) = setup(e.faces[0])?;
    let (n2, r2, _) = setup(e.faces[1])?;
    let mut turn = (n2 - n1).rem_euclid(2.0 * PI);
    if turn > PI {
        turn -= 2.0 * PI;
    }
    // inside each core, go a quarter turn back from the normal towards the ideal ray
    let back = -turn.signum() * PI / 4.0;
    let samples = samples.max(2);
    let mut pts = Vec::with_capacity(3 * samples);
    let mut push = |r: f64, phi: f64| pts.push(tinv.apply_complex(Complex64::from_polar(r, phi)));
    for k in 0..samples {
        push(r1, n1 + back * (1.0 - k as f64 / samples as f64));
    }
    for k in 0..=samples {
        let s = k as f64 / samples as f64;
        push((r1.ln() * (1.0 - s) + r2.ln() * s).exp(), n1 + turn * s);
    }
    for k in 1..=samples {
        push(r2, n2 - back * (k as f64 / samples as f64));
    }
    Ok(pts)
}
