use num_complex::Complex64;
use std::fmt;

use crate::tolerance::TOL_GEO;

/// A point of the Riemann sphere in homogeneous coordinates `(z0 : z1)`.
///
/// The affine value is `z0 / z1`; `(1 : 0)` is the point at infinity.
#[derive(Clone, Copy, PartialEq)]
pub struct PointCP1 {
    pub z0: Complex64,
    pub z1: Complex64,
}

impl PointCP1 {
    pub const INFINITY: PointCP1 = PointCP1 {
        z0: Complex64::new(1.0, 0.0),
        z1: Complex64::new(0.0, 0.0),
    };

    /// Homogeneous constructor. Returns `None` for the zero vector.
    pub fn new(z0: Complex64, z1: Complex64) -> Option<Self> {
        if z0.norm_sqr() + z1.norm_sqr() > 0.0 && (z0.is_finite() && z1.is_finite()) {
            Some(PointCP1 { z0, z1 })
        } else {
            None
        }
    }

    pub fn finite(z: Complex64) -> Self {
        PointCP1 {
            z0: z,
            z1: Complex64::new(1.0, 0.0),
        }
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    /// Scales the representative to unit Euclidean norm.
    pub fn normalized(self) -> Self {
        let n = (self.z0.norm_sqr() + self.z1.norm_sqr()).sqrt();
        PointCP1 {
            z0: self.z0 / n,
            z1: self.z1 / n,
        }
    }

    /// Affine coordinate, or `None` when the point is (numerically) infinity.
    pub fn to_complex(self) -> Option<Complex64> {
        let p = self.normalized();
        if p.z1.norm() <= 1e-300 {
            None
        } else {
            Some(p.z0 / p.z1)
        }
    }

    pub fn is_infinity(self) -> bool {
        let p = self.normalized();
        p.z1.norm() < TOL_GEO * 1e-3
    }

    /// Chordal distance on the unit sphere (diameter 2 normalization halved, so values lie in [0, 1]).
    pub fn chordal_distance(self, other: PointCP1) -> f64 {
        let a = self.normalized();
        let b = other.normalized();
        (a.z0 * b.z1 - a.z1 * b.z0).norm()
    }

    pub fn approx_eq(self, other: PointCP1, tol: f64) -> bool {
        self.chordal_distance(other) < tol
    }

    /// Image under the inverse stereographic projection onto the unit sphere.
    pub fn to_sphere(self) -> [f64; 3] {
        let p = self.normalized();
        // |z0|^2 + |z1|^2 = 1
        let w = p.z0 * p.z1.conj();
        let n0 = p.z0.norm_sqr();
        let n1 = p.z1.norm_sqr();
        [2.0 * w.re, 2.0 * w.im, n0 - n1]
    }

    pub fn from_sphere(s: [f64; 3]) -> Self {
        // inverse of to_sphere: z = (x + iy) / (1 - w)
        if s[2] > 0.0 {
            let denom = Complex64::new(s[0], -s[1]);
            // z = (1 + w) / (x - iy)
            PointCP1 {
                z0: Complex64::new(1.0 + s[2], 0.0),
                z1: denom,
            }
        } else {
            PointCP1 {
                z0: Complex64::new(s[0], s[1]),
                z1: Complex64::new(1.0 - s[2], 0.0),
            }
        }
    }
}

impl fmt::Debug for PointCP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_complex() {
            Some(z) => write!(f, "PointCP1({} {:+}i)", z.re, z.im),
            None => write!(f, "PointCP1(inf)"),
        }
    }
}

impl From<Complex64> for PointCP1 {
    fn from(z: Complex64) -> Self {
        PointCP1::finite(z)
    }
}

/// Cross-ratio `(a, b; c, d) = (a - c)(b - d) / ((a - d)(b - c))` in homogeneous form.
pub fn cross_ratio(a: PointCP1, b: PointCP1, c: PointCP1, d: PointCP1) -> Complex64 {
    let det = |p: PointCP1, q: PointCP1| p.z0 * q.z1 - p.z1 * q.z0;
    det(a, c) * det(b, d) / (det(a, d) * det(b, c))
}
