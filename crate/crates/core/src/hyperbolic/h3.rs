use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::{MoebiusMap, OrientedCircle, PointCP1};
use crate::tolerance::TOL_GEO;

/// A point `(z, t)` of upper half-space, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointH3 {
    pub z: Complex64,
    pub t: f64,
}

impl PointH3 {
    pub fn new(z: Complex64, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() || !z.is_finite() {
            return Err(Error::Degenerate(format!("height {t} is not positive")));
        }
        Ok(PointH3 { z, t })
    }

    /// Embeds a point of the upper half-plane as a point of the vertical plane over the real line.
    pub fn from_h2(w: Complex64) -> Self {
        PointH3 {
            z: Complex64::new(w.re, 0.0),
            t: w.im,
        }
    }

    /// Coordinates in the Poincare ball (unit ball in R^3).
    pub fn to_ball(&self) -> [f64; 3] {
        let (x, y, t) = (self.z.re, self.z.im, self.t);
        let den = x * x + y * y + (t + 1.0) * (t + 1.0);
        [
            2.0 * x / den,
            2.0 * y / den,
            (x * x + y * y + t * t - 1.0) / den,
        ]
    }

    /// Image under the isometric extension of `m` to upper half-space.
    pub fn transform(&self, m: &MoebiusMap) -> PointH3 {
        let (a, b, c, d) = (m.a, m.b, m.c, m.d);
        let w = c * self.z + d;
        let den = w.norm_sqr() + c.norm_sqr() * self.t * self.t;
        let num = (a * self.z + b) * w.conj() + a * c.conj() * self.t * self.t;
        PointH3 {
            z: num / den,
            t: self.t / den,
        }
    }

    pub fn distance(&self, other: &PointH3) -> f64 {
        h3_distance(self, other)
    }
}

/// Hyperbolic distance in upper half-space.
pub fn h3_distance(p: &PointH3, q: &PointH3) -> f64 {
    let num = (p.z - q.z).norm_sqr() + (p.t - q.t) * (p.t - q.t);
    // acosh(1 + x) written to keep precision for small x
    let x = num / (2.0 * p.t * q.t);
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// A geodesic of H^3, recorded by its ideal endpoints (ordered).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicH3 {
    pub start: PointCP1,
    pub end: PointCP1,
}

impl GeodesicH3 {
    pub fn new(start: PointCP1, end: PointCP1) -> Result<Self> {
        if start.chordal_distance(end) <= TOL_GEO {
            return Err(Error::Degenerate("geodesic endpoints coincide".into()));
        }
        Ok(GeodesicH3 { start, end })
    }

    pub fn reversed(&self) -> Self {
        GeodesicH3 {
            start: self.end,
            end: self.start,
        }
    }

    pub fn transform(&self, m: &MoebiusMap) -> Self {
        GeodesicH3 {
            start: m.apply(self.start),
            end: m.apply(self.end),
        }
    }

    /// Same unordered endpoint pair.
    pub fn same_unoriented(&self, other: &GeodesicH3, tol: f64) -> bool {
        (self.start.approx_eq(other.start, tol) && self.end.approx_eq(other.end, tol))
            || (self.start.approx_eq(other.end, tol) && self.end.approx_eq(other.start, tol))
    }

    /// Point of the geodesic closest to the vertical axis over its endpoints' frame.
    pub fn to_standard(&self) -> MoebiusMap {
        MoebiusMap::to_zero_infinity(self.start, self.end).expect("distinct endpoints")
    }
}

/// Elliptic rotation by `theta` about the oriented geodesic `g`.
///
/// Conjugate of `diag(e^{i theta / 2}, e^{-i theta / 2})` by the map sending
/// `g.start -> 0`, `g.end -> infinity`; a full turn is projectively trivial.
pub fn rotation_about_geodesic(g: &GeodesicH3, theta: f64) -> MoebiusMap {
    let t = g.to_standard();
    let r = MoebiusMap::diagonal(Complex64::from_polar(1.0, theta / 2.0));
    t.inverse() * r * t
}

/// A totally geodesic plane of H^3 bounded by an oriented circle; its normal
/// points towards the disk side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneH3 {
    pub boundary: OrientedCircle,
}

impl PlaneH3 {
    pub fn new(boundary: OrientedCircle) -> Self {
        PlaneH3 { boundary }
    }

    /// The vertical plane over the extended real line (normal towards the upper half-plane).
    pub fn real() -> Self {
        PlaneH3::new(OrientedCircle::real_line())
    }

    pub fn transform(&self, m: &MoebiusMap) -> Self {
        PlaneH3::new(self.boundary.transform(m))
    }

    /// Residual of the plane equation at `p` (zero on the plane).
    pub fn residual(&self, p: &PointH3) -> f64 {
        self.boundary.plane_residual(p.z, p.t)
    }

    /// Hyperbolic distance from `p` to the plane.
    pub fn distance(&self, p: &PointH3) -> f64 {
        let q = self.nearest_point(p);
        h3_distance(p, &q)
    }

    /// Orthogonal projection of an interior point onto the plane.
    pub fn nearest_point(&self, p: &PointH3) -> PointH3 {
        let s = self.boundary.standardizing_map();
        let q = p.transform(&s);
        // projection onto the vertical plane Im z = 0 along circles centered on it
        let r = (q.z.im * q.z.im + q.t * q.t).sqrt();
        PointH3 {
            z: Complex64::new(q.z.re, 0.0),
            t: r,
        }
        .transform(&s.inverse())
    }
}

/// Endpoint on `plane` of the geodesic orthogonal to it and asymptotic to the
/// ideal point `x`, which must lie strictly on the disk side.
pub fn nearest_point_projection(plane: &PlaneH3, x: PointCP1) -> Result<PointH3> {
    let f = plane.boundary.form(x);
    if !(f < -TOL_GEO * 1e-3) {
        return Err(Error::OutsideDisk(f));
    }
    let s = plane.boundary.standardizing_map();
    let w = s
        .apply(x)
        .to_complex()
        .ok_or_else(|| Error::Numeric("projection target mapped to infinity".into()))?;
    // the orthogonal geodesic from a + bi meets the vertical plane at height b
    let q = PointH3 {
        z: Complex64::new(w.re, 0.0),
        t: w.im,
    };
    Ok(q.transform(&s.inverse()))
}
