use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::word::{GroupWord, Letter, SurfacePresentation};
use crate::error::{Error, Result};
use crate::hyperbolic::GeodesicH3;
use crate::moebius::{MoebiusKind, MoebiusMap, PointCP1};

/// Fenchel-Nielsen coordinates for genus 2.
///
/// The pants decomposition is cut along `a1`, `a2` and the separating curve
/// `[a1, b1]`: `lengths[0]` and `twists[0]` belong to `a1`, index 1 to `a2`
/// and index 2 to the separating curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FNCoordinates {
    pub lengths: [f64; 3],
    pub twists: [f64; 3],
}

impl FNCoordinates {
    pub fn new(lengths: [f64; 3], twists: [f64; 3]) -> Result<Self> {
        let fnc = FNCoordinates { lengths, twists };
        fnc.validate()?;
        Ok(fnc)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, l) in self.lengths.iter().enumerate() {
            if !(*l > 0.0) || !l.is_finite() {
                return Err(Error::InvalidCoordinates(format!(
                    "length {i} is {l}, must be > 0"
                )));
            }
        }
        for (i, t) in self.twists.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidCoordinates(format!("twist {i} is {t}")));
            }
        }
        Ok(())
    }

    /// Words of the three cuff curves, in the order of `lengths`.
    pub fn cuff_words() -> [GroupWord; 3] {
        [
            "a1".parse().unwrap(),
            "a2".parse().unwrap(),
            "a1 b1 A1 B1".parse().unwrap(),
        ]
    }
}

/// A representation of the genus-g surface group into PSL(2, C), given by
/// the images of `a1, b1, ..., ag, bg`.
#[derive(Debug, Clone, PartialEq)]
pub struct Holonomy {
    pub genus: usize,
    pub generators: Vec<MoebiusMap>,
}

impl Holonomy {
    pub fn new(genus: usize, generators: Vec<MoebiusMap>) -> Result<Self> {
        let pres = SurfacePresentation::new(genus)?;
        if generators.len() != pres.generator_count() {
            return Err(Error::InvalidCoordinates(format!(
                "expected {} generator images, got {}",
                pres.generator_count(),
                generators.len()
            )));
        }
        Ok(Holonomy { genus, generators })
    }

    pub fn letter(&self, l: Letter) -> MoebiusMap {
        let m = self.generators[l.generator()];
        if l.is_inverse() {
            m.inverse()
        } else {
            m
        }
    }

    /// Image of a word: the ordered product of its letters' images.
    pub fn eval(&self, w: &GroupWord) -> MoebiusMap {
        w.letters()
            .iter()
            .fold(MoebiusMap::IDENTITY, |acc, l| acc * self.letter(*l))
    }

    /// Projective distance of the relator's image from the identity.
    pub fn relation_residual(&self) -> f64 {
        self.eval(&GroupWord::surface_relator(self.genus))
            .projective_distance(&MoebiusMap::IDENTITY)
    }

    pub fn max_generator_deviation(&self, other: &Holonomy) -> f64 {
        self.generators
            .iter()
            .zip(&other.generators)
            .map(|(a, b)| a.projective_distance(b))
            .fold(0.0, f64::max)
    }

    pub fn conjugate_by(&self, g: &MoebiusMap) -> Holonomy {
        Holonomy {
            genus: self.genus,
            generators: self.generators.iter().map(|m| m.conjugate_by(g)).collect(),
        }
    }
}

/// A Fuchsian genus-2 representation together with the Fenchel-Nielsen data
/// it was built from and the base point used by downstream constructions.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianHolonomy {
    pub holonomy: Holonomy,
    pub coordinates: FNCoordinates,
    pub basepoint: Complex64,
}

impl FuchsianHolonomy {
    pub fn eval(&self, w: &GroupWord) -> MoebiusMap {
        self.holonomy.eval(w)
    }

    pub fn genus(&self) -> usize {
        self.holonomy.genus
    }
}

/// Real SL(2) matrices for the one-holed torus with interior curve of length
/// `len`, twist `twist` and boundary length `boundary`.
///
/// With `x = tr A = 2 cosh(len / 2)` the pair `(y, z) = (tr B, tr AB)` runs over
/// the branch of `y^2 + z^2 - x y z = 2 - x^2 - 2 cosh(boundary / 2)` with
/// `y = c cosh(s)`, `z = c cosh(s + len / 2)`. A full Dehn twist along `A`
/// shifts `s` by `len / 2`, so the twist in length units is `2 s`.
fn one_holed_torus(len: f64, twist: f64, boundary: f64) -> (MoebiusMap, MoebiusMap) {
    let h = len / 2.0;
    let x = 2.0 * h.cosh();
    let k = 2.0 - x * x - 2.0 * (boundary / 2.0).cosh();
    let c = (-k).sqrt() / h.sinh();
    let s = twist / 2.0;
    let y = c * s.cosh();
    let z = c * (s + h).cosh();
    let lambda = h.exp();
    let a = MoebiusMap::from_real(lambda, 0.0, 0.0, 1.0 / lambda).expect("diagonal");
    let p = (z - y / lambda) / (lambda - 1.0 / lambda);
    let d = y - p;
    let m = p * d - 1.0;
    let q = m.abs().sqrt();
    let r = if m >= 0.0 { q } else { -q };
    let b = MoebiusMap::from_real(p, q, r, d).expect("det 1 by construction");
    (a, b)
}

/// `a b a^-1 b^-1` with adjugate inverses, so its trace does not depend on
/// the signs of the lifts of `a` and `b`.
fn commutator(a: &MoebiusMap, b: &MoebiusMap) -> MoebiusMap {
    let adj = |m: &MoebiusMap| MoebiusMap {
        a: m.d,
        b: -m.b,
        c: -m.c,
        d: m.a,
    };
    a.compose(b).compose(&adj(a)).compose(&adj(b))
}

/// Real eigenbasis of a hyperbolic SL(2, R) matrix: columns are the
/// attracting and repelling eigenvectors, scaled to determinant 1.
fn eigenbasis(m: &MoebiusMap) -> Result<MoebiusMap> {
    let cls = m.classify();
    if cls.fixed_points.len() != 2 {
        return Err(Error::Numeric("commutator is not hyperbolic".into()));
    }
    let [p, q] = [cls.fixed_points[0], cls.fixed_points[1]];
    let (a, c) = (p.z0, p.z1);
    let (b, d) = (q.z0, q.z1);
    // remove the arbitrary complex phase of each homogeneous vector
    let phase = |u: Complex64, v: Complex64| {
        let w = if u.norm() > v.norm() { u } else { v };
        w.conj() / w.norm()
    };
    let (s1, s2) = (phase(a, c), phase(b, d));
    let (a, c, b, d) = (a * s1, c * s1, b * s2, d * s2);
    let det = (a * d - b * c).re;
    // flip the second column if needed so the basis is orientation preserving
    let (b, d) = if det < 0.0 { (-b, -d) } else { (b, d) };
    MoebiusMap::new(
        Complex64::new(a.re, 0.0),
        Complex64::new(b.re, 0.0),
        Complex64::new(c.re, 0.0),
        Complex64::new(d.re, 0.0),
    )
}

/// Builds a Fuchsian genus-2 representation from Fenchel-Nielsen data by
/// gluing two one-holed tori along their common boundary.
///
/// The second torus is conjugated so that its boundary commutator becomes the
/// inverse of the first one's, which makes `[a1, b1][a2, b2] = 1` exact; the
/// remaining translation along the common axis is the separating twist.
pub fn fuchsian_from_fn(fnc: &FNCoordinates) -> Result<FuchsianHolonomy> {
    fnc.validate()?;
    let [l1, l2, l3] = fnc.lengths;
    let [t1, t2, t3] = fnc.twists;
    let (a1, b1) = one_holed_torus(l1, t1, l3);
    let (a2, b2) = one_holed_torus(l2, t2, l3);
    let k1 = commutator(&a1, &b1);
    let k2 = commutator(&a2, &b2);
    let p1 = eigenbasis(&k1.inverse())?;
    let p2 = eigenbasis(&k2)?;
    let shift = MoebiusMap::from_real((t3 / 2.0).exp(), 0.0, 0.0, (-t3 / 2.0).exp())?;
    let g = p1 * shift * p2.inverse();
    let a2 = a2.conjugate_by(&g);
    let b2 = b2.conjugate_by(&g);
    let holonomy = balanced(Holonomy::new(2, vec![a1, b1, a2, b2])?);
    Ok(FuchsianHolonomy {
        holonomy,
        coordinates: *fnc,
        basepoint: Complex64::new(0.0, 1.0),
    })
}

/// Conjugates a real representation by an affine map so that `i` nearly
/// minimizes the summed displacement `sum cosh d(i, g i)` of the generators.
/// This keeps matrix entries small for long words.
fn balanced(rho: Holonomy) -> Holonomy {
    let cost = |u: f64, v: f64| {
        let s = affine(u, v);
        rho.generators
            .iter()
            .map(|g| {
                let m = g.conjugate_by(&s);
                m.entries().iter().map(|e| e.norm_sqr()).sum::<f64>()
            })
            .sum::<f64>()
    };
    let (mut u, mut v) = (0.0, 0.0);
    let mut best = cost(u, v);
    let mut step = 1.0;
    while step > 1e-9 {
        let mut moved = false;
        for (du, dv) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            // u is measured in units of the current height
            let (nu, nv) = (u + du * v.exp(), v + dv);
            let c = cost(nu, nv);
            if c < best {
                best = c;
                u = nu;
                v = nv;
                moved = true;
            }
        }
        if !moved {
            step /= 2.0;
        }
    }
    rho.conjugate_by(&affine(u, v))
}

/// The affine map sending `u + i e^v` to `i`.
fn affine(u: f64, v: f64) -> MoebiusMap {
    let h = (v / 2.0).exp();
    MoebiusMap::from_real(1.0 / h, -u / h, 0.0, h).expect("det 1")
}

/// Heuristic discreteness witness for a pair of generators:
/// `|tr^2 A - 4| + |tr [A, B] - 2|`. Jorgensen's inequality says values
/// below 1 cannot occur in a discrete non-elementary group.
pub fn jorgensen_witness(a: &MoebiusMap, b: &MoebiusMap) -> f64 {
    let tr_a2 = a.trace_sq();
    let comm = commutator(a, b);
    (tr_a2 - Complex64::new(4.0, 0.0)).norm() + (comm.trace() - Complex64::new(2.0, 0.0)).norm()
}

/// Axis of a loxodromic map, oriented from the repelling to the attracting fixed point.
pub fn axis(m: &MoebiusMap) -> Result<GeodesicH3> {
    let cls = m.classify();
    match cls.kind {
        MoebiusKind::Hyperbolic | MoebiusKind::Loxodromic => {
            GeodesicH3::new(cls.fixed_points[1], cls.fixed_points[0])
        }
        k => Err(Error::NotLoxodromic(format!("{k:?}"))),
    }
}

/// Attracting fixed point of a loxodromic map.
pub fn attracting_fixed_point(m: &MoebiusMap) -> Option<PointCP1> {
    let cls = m.classify();
    match cls.kind {
        MoebiusKind::Hyperbolic | MoebiusKind::Loxodromic => Some(cls.fixed_points[0]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FNCoordinates {
        FNCoordinates::new([1.5, 1.8, 2.0], [0.3, -0.2, 0.4]).unwrap()
    }

    #[test]
    fn relation_holds() {
        let rho = fuchsian_from_fn(&sample()).unwrap();
        assert!(rho.holonomy.relation_residual() < 1e-8);
    }

    #[test]
    fn generators_are_real_and_hyperbolic() {
        let rho = fuchsian_from_fn(&sample()).unwrap();
        for g in &rho.holonomy.generators {
            assert!(g.max_imag() < 1e-10);
            assert_eq!(g.classify().kind, MoebiusKind::Hyperbolic);
        }
    }

    #[test]
    fn cuff_traces_match_lengths() {
        let fnc = sample();
        let rho = fuchsian_from_fn(&fnc).unwrap();
        for (w, l) in FNCoordinates::cuff_words().iter().zip(fnc.lengths) {
            let tr = rho.eval(w).trace().norm();
            assert!((tr - 2.0 * (l / 2.0).cosh()).abs() < 1e-8, "{w}: {tr}");
        }
    }

    #[test]
    fn trace_three_cuff() {
        let l = 2.0 * 1.5f64.acosh();
        let fnc = FNCoordinates::new([l, 1.0, 1.2], [0.0; 3]).unwrap();
        let rho = fuchsian_from_fn(&fnc).unwrap();
        let a1 = rho.eval(&"a1".parse().unwrap());
        // matrix product oracle for the trace
        let direct = a1.a * Complex64::new(1.0, 0.0) + a1.d;
        assert!((direct.norm() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn witness_ignores_lift_signs() {
        let rho =
            fuchsian_from_fn(&FNCoordinates::new([0.5, 0.5, 0.5], [0.0; 3]).unwrap()).unwrap();
        let g = &rho.holonomy.generators;
        let neg = |m: &MoebiusMap| MoebiusMap {
            a: -m.a,
            b: -m.b,
            c: -m.c,
            d: -m.d,
        };
        let w = jorgensen_witness(&g[2], &g[3]);
        assert!(w >= 1.0, "{w}");
        assert!((jorgensen_witness(&neg(&g[2]), &g[3]) - w).abs() < 1e-9 * w);
        assert!((jorgensen_witness(&g[2], &neg(&g[3])) - w).abs() < 1e-9 * w);
        // both handles bound the same separating curve, lifted to SL(2, R)
        let k1 = commutator(&g[0], &g[1]).trace().re;
        let k2 = commutator(&g[2], &g[3]).trace().re;
        assert!(
            (k1 + 2.0 * 0.25f64.cosh()).abs() < 1e-6 && (k2 - k1).abs() < 1e-6,
            "{k1} {k2}"
        );
    }

    #[test]
    fn nonpositive_length_rejected() {
        assert!(FNCoordinates::new([0.0, 1.0, 1.0], [0.0; 3]).is_err());
        assert!(FNCoordinates::new([1.0, -1.0, 1.0], [0.0; 3]).is_err());
    }

    #[test]
    fn axis_orientation() {
        let m = MoebiusMap::diagonal(Complex64::new(2.0, 0.0));
        let g = axis(&m).unwrap();
        assert!(g.end.is_infinity());
        assert!(g.start.approx_eq(PointCP1::real(0.0), 1e-14));
        let gi = axis(&m.inverse()).unwrap();
        assert!(gi.same_unoriented(&g, 1e-12));
        assert!(gi.start.is_infinity());
        assert!(axis(&MoebiusMap::from_real(0.0, -1.0, 1.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn axis_is_natural() {
        let m = MoebiusMap::from_real(3.0, 1.0, 2.0, 1.0).unwrap();
        let g = MoebiusMap::new(
            Complex64::new(1.0, 0.3),
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.2, 0.1),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let lhs = axis(&m.conjugate_by(&g)).unwrap();
        let rhs = axis(&m).unwrap().transform(&g);
        assert!(lhs.start.approx_eq(rhs.start, 1e-10));
        assert!(lhs.end.approx_eq(rhs.end, 1e-10));
    }
}
