use num_complex::Complex64;

use super::map::MoebiusMap;
use super::point::PointCP1;
use crate::error::{Error, Result};
use crate::tolerance::TOL_GEO;

/// A round circle on CP1 with a chosen side.
///
/// Stored as the Hermitian form `H = [[a, b], [conj(b), d]]` with `a, d`
/// real and `det H = a d - |b|^2 = -1`. The form value of a point is
/// `p* H p = a |z0|^2 + 2 Re(conj(z0) b z1) + d |z1|^2`, and the disk of the
/// circle is the side where that value is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedCircle {
    pub a: f64,
    pub b: Complex64,
    pub d: f64,
}

/// A round disk: the negative side of an oriented circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundDisk {
    pub boundary: OrientedCircle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleShape {
    Circle {
        center: Complex64,
        radius: f64,
    },
    /// Straight line through infinity: `Re(conj(normal) z) = offset` with `|normal| = 1`.
    Line {
        normal: Complex64,
        offset: f64,
    },
}

impl OrientedCircle {
    /// Normalizes an arbitrary Hermitian form with negative determinant.
    pub fn from_form(a: f64, b: Complex64, d: f64) -> Result<Self> {
        let det = a * d - b.norm_sqr();
        if !(det < 0.0) || !det.is_finite() {
            return Err(Error::Degenerate(format!(
                "Hermitian form with det {det} is not a circle"
            )));
        }
        let s = (-det).sqrt().recip();
        Ok(OrientedCircle {
            a: a * s,
            b: b * s,
            d: d * s,
        })
    }

    /// Circle `|z - center| = radius`; the disk is the bounded interior.
    pub fn interior(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Degenerate(format!("radius {radius}")));
        }
        Self::from_form(1.0, -center, center.norm_sqr() - radius * radius)
    }

    /// Same circle with the unbounded exterior as its disk.
    pub fn exterior(center: Complex64, radius: f64) -> Result<Self> {
        Ok(Self::interior(center, radius)?.flipped())
    }

    /// Extended real line with the upper half-plane as its disk.
    pub fn real_line() -> Self {
        OrientedCircle {
            a: 0.0,
            b: Complex64::new(0.0, -1.0),
            d: 0.0,
        }
    }

    pub fn unit_circle() -> Self {
        OrientedCircle {
            a: 1.0,
            b: Complex64::new(0.0, 0.0),
            d: -1.0,
        }
    }

    pub fn flipped(&self) -> Self {
        OrientedCircle {
            a: -self.a,
            b: -self.b,
            d: -self.d,
        }
    }

    /// The unique circle through three distinct points, oriented so that the
    /// disk lies to the left when traversing `p -> q -> r`.
    pub fn through(p: PointCP1, q: PointCP1, r: PointCP1) -> Result<Self> {
        for (u, v) in [(p, q), (q, r), (p, r)] {
            if u.chordal_distance(v) <= TOL_GEO {
                return Err(Error::Degenerate("coincident points on circle".into()));
            }
        }
        let t = MoebiusMap::to_zero_one_infinity(p, q, r)?;
        Ok(Self::real_line().pull_back(&t))
    }

    /// Form of the preimage under `t`: the circle `C` with `t(C) = self`.
    pub fn pull_back(&self, t: &MoebiusMap) -> Self {
        // H' = T* H T
        let (ta, tb, tc, td) = (t.a, t.b, t.c, t.d);
        let (ha, hb, hd) = (
            Complex64::new(self.a, 0.0),
            self.b,
            Complex64::new(self.d, 0.0),
        );
        let hbc = hb.conj();
        // H T
        let m00 = ha * ta + hb * tc;
        let m01 = ha * tb + hb * td;
        let m10 = hbc * ta + hd * tc;
        let m11 = hbc * tb + hd * td;
        // T* (H T)
        let a = ta.conj() * m00 + tc.conj() * m10;
        let b = ta.conj() * m01 + tc.conj() * m11;
        let d = tb.conj() * m01 + td.conj() * m11;
        // determinant preserved for det T = 1; renormalize for drift
        Self::from_form(a.re, b, d.re).unwrap_or(OrientedCircle {
            a: a.re,
            b,
            d: d.re,
        })
    }

    /// Image of the oriented circle under `m`.
    pub fn transform(&self, m: &MoebiusMap) -> Self {
        self.pull_back(&m.inverse())
    }

    /// Value of the Hermitian form at `p` (with `p` normalized to unit length).
    pub fn form(&self, p: PointCP1) -> f64 {
        let p = p.normalized();
        self.a * p.z0.norm_sqr() + 2.0 * (p.z0.conj() * self.b * p.z1).re + self.d * p.z1.norm_sqr()
    }

    /// Strictly inside the disk side.
    pub fn disk_contains(&self, p: PointCP1) -> bool {
        self.form(p) < 0.0
    }

    /// Spherical-scale distance of `p` from the circle; positive on the disk side.
    ///
    /// Exact for circles through the chordal metric up to a bounded factor.
    pub fn signed_depth(&self, p: PointCP1) -> f64 {
        let n = (self.a * self.a + 2.0 * self.b.norm_sqr() + self.d * self.d).sqrt();
        -self.form(p) / n
    }

    /// Inversive product; for normalized forms equals the cosine of the angle
    /// between the outward normals at an intersection point.
    pub fn inversive_product(&self, other: &OrientedCircle) -> f64 {
        (self.b * other.b.conj()).re - 0.5 * (self.a * other.d + other.a * self.d)
    }

    /// Angle in `[0, pi]` between two oriented circles: the vertex angle of the
    /// crescents cut out by their disks. Equal circles give 0, opposite give pi.
    pub fn angle_between(&self, other: &OrientedCircle) -> Result<f64> {
        if self.approx_eq(other, TOL_GEO) {
            return Ok(0.0);
        }
        if self.approx_eq(&other.flipped(), TOL_GEO) {
            return Ok(std::f64::consts::PI);
        }
        let ip = self.inversive_product(other);
        if ip.abs() >= 1.0 - TOL_GEO {
            return Err(Error::NoIntersection(ip));
        }
        Ok(ip.acos())
    }

    /// Angle between two oriented circles that stays accurate for nearly equal
    /// circles; `None` when the circles do not meet.
    ///
    /// Uses `sin(angle / 2) = |H1 - H2| / 2` in the Minkowski norm of the forms.
    pub fn separation_angle(&self, other: &OrientedCircle) -> Option<f64> {
        let (da, db, dd) = (self.a - other.a, self.b - other.b, self.d - other.d);
        let q = db.norm_sqr() - da * dd;
        let slack = 1e-12 * (1.0 + self.b.norm_sqr() + other.b.norm_sqr());
        if q < -slack || q > 4.0 + slack {
            return None;
        }
        Some(2.0 * (q.clamp(0.0, 4.0).sqrt() / 2.0).asin())
    }

    /// Chordal distance (the metric of `PointCP1::chordal_distance`) from `p` to the circle.
    pub fn chordal_distance_to(&self, p: PointCP1) -> f64 {
        // the circle is the section n . s = k of the unit sphere
        let n = [-self.b.re, -self.b.im, (self.d - self.a) / 2.0];
        let k = (self.d + self.a) / 2.0;
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let s = p.to_sphere();
        let dot = n[0] * s[0] + n[1] * s[1] + n[2] * s[2];
        let cross = [
            n[1] * s[2] - n[2] * s[1],
            n[2] * s[0] - n[0] * s[2],
            n[0] * s[1] - n[1] * s[0],
        ];
        let sin = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
        // polar angles from n, computed with atan2 to stay accurate near the poles
        let polar = sin.atan2(dot);
        let circle = (len * len - k * k).max(0.0).sqrt().atan2(k);
        let gap = (polar - circle).abs();
        (gap / 2.0).sin()
    }

    pub fn approx_eq(&self, other: &OrientedCircle, tol: f64) -> bool {
        let (x, y) = (self.unit_coeffs(), other.unit_coeffs());
        x.iter().zip(y.iter()).all(|(u, v)| (u - v).abs() < tol)
    }

    /// Coefficient vector scaled to unit Euclidean norm (projective comparison).
    fn unit_coeffs(&self) -> [f64; 4] {
        let v = [self.a, self.b.re, self.b.im, self.d];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    }

    pub fn shape(&self) -> CircleShape {
        let scale = self.a.abs().max(self.b.norm()).max(self.d.abs());
        if self.a.abs() <= 1e-14 * scale {
            // 2 Re(conj(z) b) + d = 0
            let n = self.b.norm();
            CircleShape::Line {
                normal: self.b / n,
                offset: -self.d / (2.0 * n),
            }
        } else {
            let center = -self.b / self.a;
            let radius = (1.0 / (self.a * self.a)).sqrt();
            CircleShape::Circle { center, radius }
        }
    }

    pub fn center_radius(&self) -> Option<(Complex64, f64)> {
        match self.shape() {
            CircleShape::Circle { center, radius } => Some((center, radius)),
            CircleShape::Line { .. } => None,
        }
    }

    /// Two points of `self ∩ other`, if the circles cross.
    pub fn intersection_points(&self, other: &OrientedCircle) -> Option<[PointCP1; 2]> {
        // Normalize `self` to the real line, then solve a quadratic for the other.
        let t = self.standardizing_map();
        let o = other.transform(&t);
        // o restricted to real x: a x^2 + 2 Re(b) x + d = 0, plus infinity if a = 0
        let (a, br, d) = (o.a, o.b.re, o.d);
        let scale = a.abs().max(br.abs()).max(d.abs());
        let tinv = t.inverse();
        if a.abs() <= 1e-14 * scale {
            if br.abs() <= 1e-300 {
                return None;
            }
            let x = -d / (2.0 * br);
            return Some([
                tinv.apply(PointCP1::real(x)),
                tinv.apply(PointCP1::INFINITY),
            ]);
        }
        let disc = br * br - a * d;
        if disc <= 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let q = -(br + br.signum() * s);
        let (x1, x2) = if q.abs() > 0.0 {
            (q / a, d / q)
        } else {
            (s / a, -s / a)
        };
        Some([
            tinv.apply(PointCP1::real(x1)),
            tinv.apply(PointCP1::real(x2)),
        ])
    }

    /// A Moebius map sending this oriented circle to the real line with its
    /// disk onto the upper half-plane.
    pub fn standardizing_map(&self) -> MoebiusMap {
        let pts = self.sample_points();
        // Traversal with disk on the left is p -> q -> r; map to 0, 1, inf.
        MoebiusMap::to_zero_one_infinity(pts[0], pts[1], pts[2]).expect("distinct circle samples")
    }

    /// Three points on the circle ordered with the disk on the left.
    pub fn sample_points(&self) -> [PointCP1; 3] {
        // the circle is the section n . s = k of the unit sphere
        let n = [-self.b.re, -self.b.im, (self.d - self.a) / 2.0];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let u = n.map(|x| x / len);
        let h = ((self.d + self.a) / 2.0 / len).clamp(-1.0, 1.0);
        let rad = (1.0 - h * h).sqrt();
        let axis = if u[0].abs() <= u[1].abs() && u[0].abs() <= u[2].abs() {
            [1.0, 0.0, 0.0]
        } else if u[1].abs() <= u[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let cross = |a: [f64; 3], b: [f64; 3]| {
            [
                a[1] * b[2] - a[2] * b[1],
                a[2] * b[0] - a[0] * b[2],
                a[0] * b[1] - a[1] * b[0],
            ]
        };
        let e1 = cross(u, axis);
        let l1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
        let e1 = e1.map(|x| x / l1);
        let e2 = cross(u, e1);
        let raw = [0.0, 2.0, 4.0].map(|t: f64| {
            let (sn, cs) = (t * std::f64::consts::PI / 3.0).sin_cos();
            PointCP1::from_sphere([0, 1, 2].map(|i| h * u[i] + rad * (cs * e1[i] + sn * e2[i])))
        });
        let c = OrientedCircle::through(raw[0], raw[1], raw[2]).expect("distinct samples");
        if c.inversive_product(self) > 0.0 {
            raw
        } else {
            [raw[2], raw[1], raw[0]]
        }
    }

    /// Residual of the hyperbolic plane over this circle at the upper
    /// half-space point `(z, t)`: zero exactly on the plane.
    pub fn plane_residual(&self, z: Complex64, t: f64) -> f64 {
        self.a * (z.norm_sqr() + t * t) + 2.0 * (z.conj() * self.b).re + self.d
    }
}

impl RoundDisk {
    pub fn new(boundary: OrientedCircle) -> Self {
        RoundDisk { boundary }
    }

    pub fn contains(&self, p: PointCP1) -> bool {
        self.boundary.disk_contains(p)
    }

    pub fn transform(&self, m: &MoebiusMap) -> Self {
        RoundDisk::new(self.boundary.transform(m))
    }
}

/// Angle between the boundary circles of two round disks.
pub fn angle_between(c1: &OrientedCircle, c2: &OrientedCircle) -> Result<f64> {
    c1.angle_between(c2)
}
