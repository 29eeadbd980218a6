use num_complex::Complex64;
use std::ops::Mul;

use super::point::PointCP1;
use crate::error::{Error, Result};
use crate::tolerance::{TOL_ALG, TOL_CLASS};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// An element of PSL(2, C), stored as an SL(2, C) lift with a canonical sign.
///
/// The sign is fixed so that the first entry (in the order a, b, c, d) with
/// magnitude above `TOL_ALG` has positive real part, or positive imaginary
/// part when the real part vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoebiusKind {
    Identity,
    Elliptic,
    Parabolic,
    /// Within the parabolic tolerance band of tr^2 = 4 but not reliably parabolic.
    ParabolicAmbiguous,
    Hyperbolic,
    Loxodromic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub kind: MoebiusKind,
    pub trace_sq: Complex64,
    /// Empty for the identity, one point for parabolics, two otherwise. For
    /// loxodromic elements the attracting point comes first.
    pub fixed_points: Vec<PointCP1>,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };

    /// Builds the map from arbitrary entries with nonzero determinant.
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 1e-300) || !det.is_finite() {
            return Err(Error::Degenerate(format!("singular matrix, det = {det}")));
        }
        Ok(Self::from_entries_unchecked(a, b, c, d))
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn from_entries_unchecked(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        let det = a * d - b * c;
        let k = det.sqrt().inv();
        MoebiusMap {
            a: a * k,
            b: b * k,
            c: c * k,
            d: d * k,
        }
        .canonical_sign()
    }

    fn canonical_sign(self) -> Self {
        for e in [self.a, self.b, self.c, self.d] {
            if e.norm() > TOL_ALG {
                let flip = if e.re.abs() > TOL_ALG * 1e-2 {
                    e.re < 0.0
                } else {
                    e.im < 0.0
                };
                return if flip { self.neg() } else { self };
            }
        }
        self
    }

    fn neg(self) -> Self {
        MoebiusMap {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn diagonal(lambda: Complex64) -> Self {
        Self::from_entries_unchecked(lambda, ZERO, ZERO, lambda.inv())
    }

    /// The map sending `p -> 0`, `q -> 1`, `r -> infinity`.
    pub fn to_zero_one_infinity(p: PointCP1, q: PointCP1, r: PointCP1) -> Result<Self> {
        let det = |u: PointCP1, v: PointCP1| u.z0 * v.z1 - u.z1 * v.z0;
        // rows annihilate p (numerator) and r (denominator); then rescale so q -> 1
        let (n0, n1) = (p.z1, -p.z0);
        let (d0, d1) = (r.z1, -r.z0);
        let num_q = n0 * q.z0 + n1 * q.z1;
        let den_q = d0 * q.z0 + d1 * q.z1;
        if det(p, q).norm() < 1e-300 || det(q, r).norm() < 1e-300 || det(p, r).norm() < 1e-300 {
            return Err(Error::Degenerate("coincident points".into()));
        }
        let s = den_q / num_q;
        Self::new(n0 * s, n1 * s, d0, d1)
    }

    /// A map sending `p -> 0` and `q -> infinity`.
    pub fn to_zero_infinity(p: PointCP1, q: PointCP1) -> Result<Self> {
        Self::new(p.z1, -p.z0, q.z1, -q.z0)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn trace_sq(&self) -> Complex64 {
        let t = self.trace();
        t * t
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
        .canonical_sign()
    }

    /// Raw product without renormalization of the determinant.
    pub fn compose(&self, rhs: &MoebiusMap) -> Self {
        let (u, v) = (self, rhs);
        MoebiusMap {
            a: u.a * v.a + u.b * v.c,
            b: u.a * v.b + u.b * v.d,
            c: u.c * v.a + u.d * v.c,
            d: u.c * v.b + u.d * v.d,
        }
    }

    pub fn conjugate_by(&self, g: &MoebiusMap) -> Self {
        *g * *self * g.inverse()
    }

    pub fn apply(&self, p: PointCP1) -> PointCP1 {
        PointCP1 {
            z0: self.a * p.z0 + self.b * p.z1,
            z1: self.c * p.z0 + self.d * p.z1,
        }
        .normalized()
    }

    pub fn apply_complex(&self, z: Complex64) -> PointCP1 {
        self.apply(PointCP1::finite(z))
    }

    /// Complex derivative of the action at a finite point.
    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let den = self.c * z + self.d;
        (den * den).inv()
    }

    /// Max entrywise distance to `other` up to the global sign.
    pub fn projective_distance(&self, other: &MoebiusMap) -> f64 {
        let plus = self.entrywise_distance(other);
        let minus = self.entrywise_distance(&other.neg());
        plus.min(minus)
    }

    fn entrywise_distance(&self, other: &MoebiusMap) -> f64 {
        [
            (self.a - other.a).norm(),
            (self.b - other.b).norm(),
            (self.c - other.c).norm(),
            (self.d - other.d).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &MoebiusMap, tol: f64) -> bool {
        self.projective_distance(other) < tol
    }

    pub fn max_imag(&self) -> f64 {
        [self.a.im, self.b.im, self.c.im, self.d.im]
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Eigenvector for eigenvalue `lambda`, as a point of CP1.
    fn eigen_point(&self, lambda: Complex64) -> PointCP1 {
        // rows of (M - lambda I) annihilate the eigenvector
        let r1 = (self.a - lambda, self.b);
        let r2 = (self.c, self.d - lambda);
        let n1 = r1.0.norm_sqr() + r1.1.norm_sqr();
        let n2 = r2.0.norm_sqr() + r2.1.norm_sqr();
        let (x, y) = if n1 >= n2 { r1 } else { r2 };
        if x.norm() + y.norm() < 1e-300 {
            return PointCP1::INFINITY;
        }
        PointCP1 { z0: -y, z1: x }.normalized()
    }

    pub fn classify(&self) -> Classification {
        self.classify_with(TOL_CLASS)
    }

    pub fn classify_with(&self, tol_class: f64) -> Classification {
        let tr = self.trace();
        let tr2 = tr * tr;
        let near_identity = self.approx_eq(&MoebiusMap::IDENTITY, tol_class.sqrt() * 1e-2);
        if near_identity {
            return Classification {
                kind: MoebiusKind::Identity,
                trace_sq: tr2,
                fixed_points: vec![],
            };
        }
        let delta = (tr2 - Complex64::new(4.0, 0.0)).norm();
        let disc = (tr2 - Complex64::new(4.0, 0.0)).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        if delta < tol_class {
            let p = self.eigen_point(tr / 2.0);
            let kind = if delta < 64.0 * f64::EPSILON {
                MoebiusKind::Parabolic
            } else {
                MoebiusKind::ParabolicAmbiguous
            };
            return Classification {
                kind,
                trace_sq: tr2,
                fixed_points: vec![p],
            };
        }
        // attracting fixed point = eigenvector of the larger eigenvalue
        let (big, small) = if l1.norm() >= l2.norm() {
            (l1, l2)
        } else {
            (l2, l1)
        };
        let fixed = vec![self.eigen_point(big), self.eigen_point(small)];
        let real = tr2.im.abs() < tol_class;
        let kind = if real && tr2.re >= 0.0 && tr2.re < 4.0 {
            MoebiusKind::Elliptic
        } else if real && tr2.re > 4.0 {
            MoebiusKind::Hyperbolic
        } else {
            MoebiusKind::Loxodromic
        };
        Classification {
            kind,
            trace_sq: tr2,
            fixed_points: fixed,
        }
    }

    /// Complex translation length `l` with `|tr| = 2 cosh(l / 2)` for the real part.
    pub fn translation_length(&self) -> f64 {
        let l1 = {
            let tr = self.trace();
            let disc = (tr * tr - Complex64::new(4.0, 0.0)).sqrt();
            let a = ((tr + disc) / 2.0).norm();
            let b = ((tr - disc) / 2.0).norm();
            a.max(b)
        };
        2.0 * l1.ln()
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;

    fn mul(self, rhs: MoebiusMap) -> MoebiusMap {
        let m = self.compose(&rhs);
        // renormalize to det 1 to stop drift over long products
        // a large deviation is cancellation noise, not drift, so it is left alone
        let dev = (m.det() - ONE).norm();
        if !(1e-14..=1e-6).contains(&dev) {
            m.canonical_sign()
        } else {
            MoebiusMap::from_entries_unchecked(m.a, m.b, m.c, m.d)
        }
    }
}

impl Mul<PointCP1> for MoebiusMap {
    type Output = PointCP1;

    fn mul(self, p: PointCP1) -> PointCP1 {
        self.apply(p)
    }
}
