use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::{nearest_point_projection, GeodesicH3, PlaneH3, PointH3};
use crate::moebius::{
    minimal_enclosing_disk, support_points, EnclosingDisk, MoebiusMap, OrientedCircle, PointCP1,
    RoundDisk,
};
use crate::tolerance::TOL_GEO;

/// Relative band (in units of the enclosing radius) for ideal-point contact.
pub const TOL_CONTACT: f64 = 1e-6;
/// Boundary samples per polygon edge.
pub const DEFAULT_EDGE_SAMPLES: usize = 64;

/// Complement of a closed set in CP^1: either finitely many points, or a
/// compact convex polygon represented by samples of its boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum DiskComplementDomain {
    Finite {
        points: Vec<PointCP1>,
    },
    Polygon {
        vertices: Vec<Complex64>,
        samples: Vec<PointCP1>,
    },
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

impl DiskComplementDomain {
    pub fn finite(points: &[PointCP1]) -> Result<Self> {
        let mut kept: Vec<PointCP1> = Vec::new();
        for p in points {
            if !kept.iter().any(|q| q.chordal_distance(*p) < TOL_GEO) {
                kept.push(p.normalized());
            }
        }
        if kept.len() < 2 {
            return Err(Error::Domain(
                "complement must contain more than one point".into(),
            ));
        }
        Ok(DiskComplementDomain::Finite { points: kept })
    }

    /// Convex polygon with vertices in either orientation; two vertices give a segment.
    pub fn polygon(vertices: &[Complex64], edge_samples: usize) -> Result<Self> {
        if vertices.len() < 2 || edge_samples == 0 {
            return Err(Error::Domain(
                "polygon needs two vertices and one sample per edge".into(),
            ));
        }
        let mut v = vertices.to_vec();
        let n = v.len();
        if n >= 3 {
            let turns: Vec<f64> = (0..n)
                .map(|i| cross(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]))
                .collect();
            let scale = v.iter().map(|z| z.norm_sqr()).fold(1.0, f64::max);
            if turns.iter().any(|t| *t > 1e-12 * scale) && turns.iter().any(|t| *t < -1e-12 * scale)
            {
                return Err(Error::Domain("polygon is not convex".into()));
            }
            if turns.iter().sum::<f64>() < 0.0 {
                v.reverse();
            }
        }
        let edges = if n == 2 { 1 } else { n };
        let mut samples = Vec::with_capacity(edges * edge_samples + 1);
        for i in 0..edges {
            let (a, b) = (v[i], v[(i + 1) % n]);
            for k in 0..edge_samples {
                samples.push(PointCP1::finite(
                    a + (b - a) * (k as f64 / edge_samples as f64),
                ));
            }
        }
        if n == 2 {
            samples.push(PointCP1::finite(v[1]));
        }
        Ok(DiskComplementDomain::Polygon {
            vertices: v,
            samples,
        })
    }

    /// Vertices of a regular ideal tetrahedron, one of them at infinity.
    pub fn regular_tetrahedron() -> Self {
        let mut pts = vec![PointCP1::INFINITY];
        let (z, r) = (-1.0 / 3.0, (8.0f64 / 9.0).sqrt());
        for k in 0..3 {
            let t = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            pts.push(PointCP1::from_sphere([r * t.cos(), r * t.sin(), z]));
        }
        DiskComplementDomain::Finite { points: pts }
    }

    /// Finite points standing for the complement.
    pub fn complement_points(&self) -> &[PointCP1] {
        match self {
            DiskComplementDomain::Finite { points } => points,
            DiskComplementDomain::Polygon { samples, .. } => samples,
        }
    }

    /// True when `x` lies in the domain (off the complement).
    pub fn contains(&self, x: PointCP1) -> bool {
        if self
            .complement_points()
            .iter()
            .any(|p| p.chordal_distance(x) < TOL_GEO)
        {
            return false;
        }
        match self {
            DiskComplementDomain::Finite { .. } => true,
            DiskComplementDomain::Polygon { vertices, .. } => {
                let Some(z) = x.to_complex() else { return true };
                let n = vertices.len();
                n < 3
                    || !(0..n)
                        .all(|i| cross(vertices[(i + 1) % n] - vertices[i], z - vertices[i]) >= 0.0)
            }
        }
    }
}

/// A maximal disk of the domain with its ideal points and core.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalDiskRecord {
    pub point: PointCP1,
    pub disk: RoundDisk,
    /// Indices into the complement points, in circular order along the boundary.
    pub ideal_indices: Vec<usize>,
    pub ideal_points: Vec<PointCP1>,
    /// Boundary geodesics of the core: one geodesic for two ideal points,
    /// the sides of the ideal polygon otherwise.
    pub core: Vec<GeodesicH3>,
    /// Minimal enclosing disk of the complement with `point` sent to infinity.
    pub normalized: EnclosingDisk,
    /// Whether the enclosing center lies in the hull of the contacts, that is
    /// whether the core contains `point`.
    pub core_contains_point: bool,
}

/// Rotation of the sphere taking `x` to infinity.
pub fn normalizing_map(x: PointCP1) -> MoebiusMap {
    let p = x.normalized();
    MoebiusMap::new(p.z0.conj(), p.z1.conj(), p.z1, -p.z0).expect("unitary matrix")
}

/// The maximal disk whose core contains `x`: the complement of the minimal
/// enclosing disk of the complement after sending `x` to infinity.
pub fn maximal_disk_at(dom: &DiskComplementDomain, x: PointCP1) -> Result<MaximalDiskRecord> {
    let pts = dom.complement_points();
    if pts.len() < 2 {
        return Err(Error::Domain(
            "complement must contain more than one point".into(),
        ));
    }
    let gap = pts
        .iter()
        .map(|p| p.chordal_distance(x))
        .fold(f64::INFINITY, f64::min);
    if gap <= TOL_GEO {
        return Err(Error::TooCloseToComplement(gap));
    }
    if !dom.contains(x) {
        return Err(Error::Domain("point lies in the complement".into()));
    }
    let n = normalizing_map(x);
    let k: Vec<Complex64> = pts
        .iter()
        .map(|p| {
            n.apply(*p)
                .to_complex()
                .ok_or_else(|| Error::Numeric("complement point sent to infinity".into()))
        })
        .collect::<Result<_>>()?;
    let med = minimal_enclosing_disk(&k)?;
    let mut contacts = support_points(&k, &med, TOL_CONTACT);
    let angle = |i: &usize| (k[*i] - med.center).arg();
    contacts.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
    let boundary = OrientedCircle::exterior(med.center, med.radius)?.transform(&n.inverse());
    let ideal_points: Vec<PointCP1> = contacts.iter().map(|&i| pts[i]).collect();
    let core = match ideal_points.len() {
        0 | 1 => {
            return Err(Error::Numeric(
                "enclosing disk with fewer than two contacts".into(),
            ))
        }
        2 => vec![GeodesicH3::new(ideal_points[0], ideal_points[1])?],
        m => (0..m)
            .map(|i| GeodesicH3::new(ideal_points[i], ideal_points[(i + 1) % m]))
            .collect::<Result<_>>()?,
    };
    let mut angles: Vec<f64> = contacts.iter().map(angle).collect();
    angles.push(angles[0] + 2.0 * std::f64::consts::PI);
    let widest = angles.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(MaximalDiskRecord {
        point: x,
        disk: RoundDisk::new(boundary),
        ideal_indices: contacts,
        ideal_points,
        core,
        normalized: med,
        core_contains_point: widest <= std::f64::consts::PI + 1e-9,
    })
}

/// Nearest-point projection of `x` onto the support plane of its maximal disk.
pub fn projection_psi(dom: &DiskComplementDomain, x: PointCP1) -> Result<PointH3> {
    let rec = maximal_disk_at(dom, x)?;
    nearest_point_projection(&PlaneH3::new(rec.disk.boundary), x)
}
