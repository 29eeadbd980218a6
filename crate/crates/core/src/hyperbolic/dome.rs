use std::collections::BTreeMap;

use super::h3::{GeodesicH3, PlaneH3, PointH3};
use crate::error::{Error, Result};
use crate::moebius::{MoebiusMap, OrientedCircle, PointCP1};
use crate::tolerance::TOL_GEO;

/// Relative band for deciding that a sphere point lies on a support plane.
const COPLANAR_EPS: f64 = 1e-9;

/// A face of the dome: an ideal polygon in its support plane. Vertices are
/// indices into [`DomeMesh::vertices`], ordered counter-clockwise as seen from
/// the empty cap.
#[derive(Debug, Clone, PartialEq)]
pub struct DomeFace {
    pub vertices: Vec<usize>,
    pub plane: PlaneH3,
}

/// A bending line of the dome with its exterior dihedral angle.
#[derive(Debug, Clone, PartialEq)]
pub struct DomeEdge {
    pub ends: [usize; 2],
    pub faces: [usize; 2],
    pub geodesic: GeodesicH3,
    pub weight: f64,
}

/// Boundary of the hyperbolic convex hull of a finite ideal set.
#[derive(Debug, Clone, PartialEq)]
pub struct DomeMesh {
    pub vertices: Vec<PointCP1>,
    pub faces: Vec<DomeFace>,
    pub edges: Vec<DomeEdge>,
}

type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Oriented circle cut on the sphere by the plane `n . s = d`, with the cap
/// `n . s > d` as its disk.
pub(crate) fn cap_circle(n: Vec3, d: f64) -> Result<OrientedCircle> {
    OrientedCircle::from_form(
        -(n[2] - d),
        num_complex::Complex64::new(-n[0], -n[1]),
        n[2] + d,
    )
}

impl DomeMesh {
    pub fn face_circle(&self, face: usize) -> OrientedCircle {
        self.faces[face].plane.boundary
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Index of the face whose empty cap contains `x`, if any.
    pub fn face_containing(&self, x: PointCP1) -> Option<usize> {
        self.faces
            .iter()
            .position(|f| f.plane.boundary.disk_contains(x))
    }

    /// Hyperbolic distance from an interior point to the dome surface.
    ///
    /// Each face is treated as its ideal polygon inside its support plane.
    pub fn distance_to(&self, p: &PointH3) -> f64 {
        self.faces
            .iter()
            .map(|f| face_distance(self, f, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn transform(&self, m: &MoebiusMap) -> Result<DomeMesh> {
        dome(
            &self
                .vertices
                .iter()
                .map(|v| m.apply(*v))
                .collect::<Vec<_>>(),
        )
    }
}

/// Distance from `p` to the ideal polygon of `face`, computed in the Klein
/// model of the support plane.
fn face_distance(mesh: &DomeMesh, face: &DomeFace, p: &PointH3) -> f64 {
    // Send the plane to the hemisphere over the unit circle (disk = inside).
    let circle = face.plane.boundary;
    let s = circle.standardizing_map();
    let cayley = MoebiusMap::new(
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.0, -1.0),
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.0, 1.0),
    )
    .expect("cayley map");
    let m = cayley * s;
    let q = face.plane.nearest_point(p);
    let d_perp = super::h3::h3_distance(p, &q);
    let q = q.transform(&m);
    // Klein coordinate of a point on the unit hemisphere is its vertical shadow.
    let k = q.z;
    let poly: Vec<_> = face
        .vertices
        .iter()
        .map(|&i| m.apply(mesh.vertices[i]).to_complex().unwrap_or_default())
        .collect();
    if point_in_convex_polygon(k, &poly) {
        return d_perp;
    }
    // Outside the polygon: distance to the nearest edge geodesic.
    let mut best = f64::INFINITY;
    for w in 0..poly.len() {
        let a = mesh.vertices[face.vertices[w]];
        let b = mesh.vertices[face.vertices[(w + 1) % poly.len()]];
        if let Ok(g) = GeodesicH3::new(a, b) {
            best = best.min(distance_to_geodesic(p, &g));
        }
    }
    best
}

fn point_in_convex_polygon(k: num_complex::Complex64, poly: &[num_complex::Complex64]) -> bool {
    let n = poly.len();
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let cr = (b - a).re * (k - a).im - (b - a).im * (k - a).re;
        if cr.abs() < 1e-12 {
            continue;
        }
        if sign == 0.0 {
            sign = cr.signum();
        } else if cr.signum() != sign {
            return false;
        }
    }
    true
}

/// Hyperbolic distance from a point of H^3 to a geodesic.
pub fn distance_to_geodesic(p: &PointH3, g: &GeodesicH3) -> f64 {
    let t = g.to_standard();
    let q = p.transform(&t);
    // distance to the vertical axis over 0: asinh(|z| / t)
    (q.z.norm() / q.t).asinh()
}

/// Boundary of the convex hull of the ideal set `points`, computed as the
/// Euclidean hull of their images on the sphere (Klein model). Concircular
/// subsets merge into single faces, so a flat configuration gives one face
/// and no bending lines.
pub fn dome(points: &[PointCP1]) -> Result<DomeMesh> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "a dome needs at least 3 ideal points, got {}",
            points.len()
        )));
    }
    for i in 0..points.len() {
        for j in 0..i {
            if points[i].chordal_distance(points[j]) <= TOL_GEO {
                return Err(Error::Degenerate(format!(
                    "ideal points {j} and {i} coincide"
                )));
            }
        }
    }
    let sphere: Vec<Vec3> = points.iter().map(|p| p.to_sphere()).collect();
    let n = sphere.len();

    // Flat configuration: every point on one plane.
    if is_flat(&sphere) {
        let circle = OrientedCircle::through(points[0], points[1], points[2])?;
        let mut face = DomeFace {
            vertices: (0..n).collect(),
            plane: PlaneH3::new(circle),
        };
        order_face(&mut face, &sphere, circle_normal(&circle));
        return Ok(DomeMesh {
            vertices: points.to_vec(),
            faces: vec![face],
            edges: vec![],
        });
    }

    let mut faces: BTreeMap<Vec<usize>, (Vec3, f64)> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut nrm = cross(sub(sphere[j], sphere[i]), sub(sphere[k], sphere[i]));
                let len = norm(nrm);
                if len < 1e-12 {
                    continue;
                }
                nrm = nrm.map(|x| x / len);
                let d = dot(nrm, sphere[i]);
                let mut above = false;
                let mut below = false;
                let mut on = Vec::new();
                for (m, s) in sphere.iter().enumerate() {
                    let v = dot(nrm, *s) - d;
                    if v > COPLANAR_EPS {
                        above = true;
                    } else if v < -COPLANAR_EPS {
                        below = true;
                    } else {
                        on.push(m);
                    }
                    if above && below {
                        break;
                    }
                }
                if above && below {
                    continue;
                }
                // outward normal points away from the remaining points
                let (nrm, d) = if above {
                    (nrm.map(|x| -x), -d)
                } else {
                    (nrm, d)
                };
                faces.entry(on).or_insert((nrm, d));
            }
        }
    }

    let mut out_faces = Vec::with_capacity(faces.len());
    for (verts, (nrm, d)) in faces {
        let circle = cap_circle(nrm, d)?;
        let mut face = DomeFace {
            vertices: verts,
            plane: PlaneH3::new(circle),
        };
        order_face(&mut face, &sphere, nrm);
        out_faces.push(face);
    }

    let mut edge_faces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fi, f) in out_faces.iter().enumerate() {
        let m = f.vertices.len();
        for w in 0..m {
            let (a, b) = (f.vertices[w], f.vertices[(w + 1) % m]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    let mut edges = Vec::with_capacity(edge_faces.len());
    for ((a, b), fs) in edge_faces {
        if fs.len() != 2 {
            return Err(Error::Numeric(format!(
                "hull edge ({a}, {b}) borders {} faces",
                fs.len()
            )));
        }
        let weight = out_faces[fs[0]]
            .plane
            .boundary
            .angle_between(&out_faces[fs[1]].plane.boundary)?;
        edges.push(DomeEdge {
            ends: [a, b],
            faces: [fs[0], fs[1]],
            geodesic: GeodesicH3::new(points[a], points[b])?,
            weight,
        });
    }

    Ok(DomeMesh {
        vertices: points.to_vec(),
        faces: out_faces,
        edges,
    })
}

fn is_flat(sphere: &[Vec3]) -> bool {
    let n = sphere.len();
    for j in 1..n {
        for k in (j + 1)..n {
            let nrm = cross(sub(sphere[j], sphere[0]), sub(sphere[k], sphere[0]));
            let len = norm(nrm);
            if len < 1e-9 {
                continue;
            }
            let nrm = nrm.map(|x| x / len);
            let d = dot(nrm, sphere[0]);
            return sphere
                .iter()
                .all(|s| (dot(nrm, *s) - d).abs() <= COPLANAR_EPS);
        }
    }
    false
}

/// Normal of the plane cutting `circle`, pointing into its disk cap.
fn circle_normal(circle: &OrientedCircle) -> Vec3 {
    // invert cap_circle: a = -(n3 - d), b = -(n1 + i n2), d_ = n3 + d
    let n1 = -circle.b.re;
    let n2 = -circle.b.im;
    let n3 = (circle.d - circle.a) / 2.0;
    let len = (n1 * n1 + n2 * n2 + n3 * n3).sqrt();
    [n1 / len, n2 / len, n3 / len]
}

fn order_face(face: &mut DomeFace, sphere: &[Vec3], normal: Vec3) {
    let m = face.vertices.len() as f64;
    let centroid = face.vertices.iter().fold([0.0; 3], |acc, &i| {
        [
            acc[0] + sphere[i][0] / m,
            acc[1] + sphere[i][1] / m,
            acc[2] + sphere[i][2] / m,
        ]
    });
    let e1 = {
        let v = sub(sphere[face.vertices[0]], centroid);
        let l = norm(v);
        v.map(|x| x / l)
    };
    let e2 = cross(normal, e1);
    face.vertices.sort_by(|&i, &j| {
        let ang = |k: usize| {
            let v = sub(sphere[k], centroid);
            dot(v, e2).atan2(dot(v, e1))
        };
        ang(i).total_cmp(&ang(j))
    });
}
