use num_complex::Complex64;
use rayon::prelude::*;

use super::leaves::KleinChart;
use super::structure::GraftedStructure;
use crate::error::{Error, Result};
use crate::hyperbolic::{PlaneH3, PointH3};
use crate::moebius::MoebiusMap;

/// Vertices of the polygon approximating the truncation circle.
const TRUNCATION_SIDES: usize = 96;
const SPLIT_EPS: f64 = 1e-12;

/// A truncated stratum with the isometry placing it in upper half-space.
#[derive(Debug, Clone, PartialEq)]
pub struct PleatedFace {
    /// Polygon vertices in the upper half-plane, counterclockwise in the Klein chart.
    pub polygon: Vec<Complex64>,
    pub isometry: MoebiusMap,
    pub plane: PlaneH3,
}

/// A piece of a lifted leaf separating two faces.
#[derive(Debug, Clone, PartialEq)]
pub struct PleatedEdge {
    pub leaf: usize,
    /// Face on the leaf's right, then on its left.
    pub faces: [usize; 2],
    pub segment: [Complex64; 2],
    pub weight: f64,
}

/// Truncated pleated surface: strata within a Klein-chart polygon around the
/// base point, each mapped into H^3 by its bending isometry.
#[derive(Debug, Clone, PartialEq)]
pub struct PleatedSurfaceMesh {
    pub chart: KleinChart,
    pub radius: f64,
    pub faces: Vec<PleatedFace>,
    pub edges: Vec<PleatedEdge>,
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

fn contains(poly: &[Complex64], k: Complex64) -> bool {
    (0..poly.len()).all(|i| cross(poly[(i + 1) % poly.len()] - poly[i], k - poly[i]) >= -1e-14)
}

/// Splits a convex polygon by the line through `a`, `b`; returns the parts on
/// the right and on the left of `a -> b`, with the two cut points.
fn split(
    poly: &[Complex64],
    a: Complex64,
    b: Complex64,
) -> Option<(Vec<Complex64>, Vec<Complex64>, [Complex64; 2])> {
    let side = |k: Complex64| cross(b - a, k - a);
    let s: Vec<f64> = poly.iter().map(|&k| side(k)).collect();
    if !(s.iter().any(|&v| v > SPLIT_EPS) && s.iter().any(|&v| v < -SPLIT_EPS)) {
        return None;
    }
    let (mut right, mut left, mut cuts) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        let (p, q, sp, sq) = (poly[i], poly[j], s[i], s[j]);
        if sp <= 0.0 {
            right.push(p);
        }
        if sp >= 0.0 {
            left.push(p);
        }
        if (sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0) {
            let x = p + (q - p) * (sp / (sp - sq));
            right.push(x);
            left.push(x);
            cuts.push(x);
        }
    }
    if cuts.len() != 2 {
        return None;
    }
    Some((right, left, [cuts[0], cuts[1]]))
}

impl PleatedSurfaceMesh {
    /// Face whose polygon contains `p`.
    pub fn face_containing(&self, p: Complex64) -> Option<usize> {
        let k = self.chart.klein(p);
        self.faces.iter().position(|f| {
            let poly: Vec<Complex64> = f.polygon.iter().map(|&z| self.chart.klein(z)).collect();
            contains(&poly, k)
        })
    }

    /// Image of `p` under the pleated map.
    pub fn image(&self, p: Complex64) -> Result<PointH3> {
        let f = self
            .face_containing(p)
            .ok_or_else(|| Error::Domain("point outside the truncated mesh".into()))?;
        Ok(PointH3::from_h2(p).transform(&self.faces[f].isometry))
    }

    /// Face vertices mapped into upper half-space.
    pub fn face_vertices(&self, face: usize) -> Vec<PointH3> {
        let f = &self.faces[face];
        f.polygon
            .iter()
            .map(|&z| PointH3::from_h2(z).transform(&f.isometry))
            .collect()
    }

    /// Largest plane residual of the face vertices over all faces.
    pub fn planarity_residual(&self) -> f64 {
        (0..self.faces.len())
            .flat_map(|i| {
                let plane = self.faces[i].plane;
                self.face_vertices(i)
                    .into_iter()
                    .map(move |v| plane.residual(&v).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Pleated surface of a grafted structure truncated to the hyperbolic disk of
/// radius `r0` around the base point.
pub fn pleated_surface(gs: &GraftedStructure, r0: f64) -> Result<PleatedSurfaceMesh> {
    if !(r0 > 1e-6) || !r0.is_finite() {
        return Err(Error::TruncationTooSmall(r0));
    }
    if r0 > gs.leaves().radius {
        return Err(Error::Precondition(format!(
            "truncation radius {r0} exceeds the leaf radius {}",
            gs.leaves().radius
        )));
    }
    let chart = KleinChart::new(gs.basepoint());
    let rk = r0.tanh();
    let mut cells: Vec<Vec<Complex64>> = vec![(0..TRUNCATION_SIDES)
        .map(|i| {
            Complex64::from_polar(
                rk,
                2.0 * std::f64::consts::PI * i as f64 / TRUNCATION_SIDES as f64,
            )
        })
        .collect()];
    let mut cuts = Vec::new();
    for (li, leaf) in gs.leaves().leaves.iter().enumerate() {
        let a = chart.ideal(leaf.geodesic.start);
        let b = chart.ideal(leaf.geodesic.end);
        // disjoint leaves never share a cell boundary, so at most one cell splits
        for ci in 0..cells.len() {
            if let Some((right, left, seg)) = split(&cells[ci], a, b) {
                cells[ci] = right;
                cells.push(left);
                cuts.push((li, seg, a, b));
                break;
            }
        }
    }
    let faces = cells
        .par_iter()
        .map(|poly| {
            let centroid = poly.iter().sum::<Complex64>() / poly.len() as f64;
            let p = chart.from_klein(centroid);
            let isometry = gs.stratum_chart(p)?;
            Ok(PleatedFace {
                polygon: poly.iter().map(|&k| chart.from_klein(k)).collect(),
                isometry,
                plane: PlaneH3::real().transform(&isometry),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut mesh = PleatedSurfaceMesh {
        chart,
        radius: r0,
        faces,
        edges: Vec::new(),
    };
    for (li, seg, a, b) in cuts {
        let mid = (seg[0] + seg[1]) / 2.0;
        let normal = (b - a) * Complex64::new(0.0, 1.0) / (b - a).norm();
        let offset = 1e-9;
        let face_at = |k: Complex64| mesh.face_containing(chart.from_klein(k));
        let (r, l) = (
            face_at(mid - normal * offset),
            face_at(mid + normal * offset),
        );
        if let (Some(r), Some(l)) = (r, l) {
            mesh.edges.push(PleatedEdge {
                leaf: li,
                faces: [r, l],
                segment: [chart.from_klein(seg[0]), chart.from_klein(seg[1])],
                weight: gs.leaves().leaves[li].weight,
            });
        }
    }
    Ok(mesh)
}
