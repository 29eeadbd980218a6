#![allow(dead_code)]

use cp1graft::moebius::{MoebiusMap, OrientedCircle, PointCP1};
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_sphere_point<R: Rng>(rng: &mut R) -> PointCP1 {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (0.1..=1.0).contains(&n) {
            return PointCP1::from_sphere(v.map(|x| x / n));
        }
    }
}

/// Circle through three points, computed from the perpendicular bisectors.
fn circle3(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    // solve |z - a|^2 = |z - b|^2 = |z - c|^2 as a 2x2 linear system
    let (r1, r2) = (b - a, c - a);
    let (s1, s2) = (
        (b.norm_sqr() - a.norm_sqr()) / 2.0,
        (c.norm_sqr() - a.norm_sqr()) / 2.0,
    );
    let det = r1.re * r2.im - r1.im * r2.re;
    if det.abs() < 1e-13 * (r1.norm() * r2.norm()) {
        return None;
    }
    let z = Complex64::new(
        (s1 * r2.im - s2 * r1.im) / det,
        (r1.re * s2 - r2.re * s1) / det,
    );
    Some((z, (z - a).norm()))
}

/// Exhaustive search for the smallest disk through two or three of the points
/// containing all of them.
pub fn brute_force_med(points: &[Complex64]) -> (Complex64, f64) {
    let n = points.len();
    let fits = |z: Complex64, r: f64| {
        points
            .iter()
            .all(|p| (p - z).norm() <= r * (1.0 + 1e-9) + 1e-12)
    };
    let mut best: Option<(Complex64, f64)> = None;
    let mut offer = |z: Complex64, r: f64| {
        if fits(z, r) && best.is_none_or(|(_, b)| r < b) {
            best = Some((z, r));
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            offer(
                (points[i] + points[j]) / 2.0,
                (points[i] - points[j]).norm() / 2.0,
            );
            for k in j + 1..n {
                if let Some((z, r)) = circle3(points[i], points[j], points[k]) {
                    offer(z, r);
                }
            }
        }
    }
    best.expect("at least two points")
}

/// Maximal disk at `x` from the exhaustive search, using the chart `1 / (z - x)`.
pub fn oracle_maximal_disk(complement: &[PointCP1], x: Complex64) -> OrientedCircle {
    let inv = MoebiusMap::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), -x).unwrap();
    let k: Vec<Complex64> = complement
        .iter()
        .map(|p| inv.apply(*p).to_complex().unwrap())
        .collect();
    let (z, r) = brute_force_med(&k);
    OrientedCircle::exterior(z, r)
        .unwrap()
        .transform(&inv.inverse())
}

pub fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Complex64 {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Random map with entries of moderate size, normalized to determinant 1.
pub fn random_map<R: Rng>(rng: &mut R) -> MoebiusMap {
    loop {
        let [a, b, cc, d] = [(); 4].map(|_| random_complex(rng, 2.0));
        let det = a * d - b * cc;
        if det.norm() > 0.2 {
            return MoebiusMap::new(a, b, cc, d).unwrap();
        }
    }
}

/// Point of the upper half-plane at hyperbolic distance `r` from `center`
/// in direction `angle`.
pub fn h2_point_at(center: Complex64, r: f64, angle: f64) -> Complex64 {
    let w = Complex64::from_polar((r / 2.0).tanh(), angle);
    let z = c(0.0, 1.0) * (1.0 + w) / (1.0 - w);
    center.re + center.im * z
}

/// Minkowski normal `(n, d)` of the Klein-model plane `n . x = d` through
/// three sphere points, oriented away from `inside`.
pub fn klein_plane(a: [f64; 3], b: [f64; 3], cc: [f64; 3], inside: [f64; 3]) -> [f64; 4] {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [cc[0] - a[0], cc[1] - a[1], cc[2] - a[2]];
    let mut n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let dot = |x: [f64; 3], y: [f64; 3]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
    if dot(n, inside) > dot(n, a) {
        n = n.map(|x| -x);
    }
    [n[0], n[1], n[2], dot(n, a)]
}

/// Exterior dihedral angle between two Klein-model planes from their
/// outward Minkowski normals.
pub fn minkowski_exterior_angle(p: [f64; 4], q: [f64; 4]) -> f64 {
    let ip = |x: [f64; 4], y: [f64; 4]| x[0] * y[0] + x[1] * y[1] + x[2] * y[2] - x[3] * y[3];
    (ip(p, q) / (ip(p, p) * ip(q, q)).sqrt())
        .clamp(-1.0, 1.0)
        .acos()
}

/// Hull faces of points on the unit sphere by exhaustive search over triples,
/// with outward Minkowski normals.
pub fn brute_force_hull(pts: &[[f64; 3]]) -> Vec<([usize; 3], [f64; 4])> {
    let n = pts.len();
    let centroid = pts
        .iter()
        .fold([0.0; 3], |s, p| [s[0] + p[0], s[1] + p[1], s[2] + p[2]])
        .map(|x| x / n as f64);
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let pl = klein_plane(pts[i], pts[j], pts[k], centroid);
                let side = |p: [f64; 3]| p[0] * pl[0] + p[1] * pl[1] + p[2] * pl[2] - pl[3];
                if pts.iter().all(|p| side(*p) <= 1e-12) {
                    faces.push(([i, j, k], pl));
                }
            }
        }
    }
    faces
}
