use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::leaves::{h2_distance, LeafSet};
use super::multicurve::WeightedMulticurve;
use crate::error::{Error, Result};
use crate::hyperbolic::{rotation_about_geodesic, PlaneH3, PointH3};
use crate::moebius::{MoebiusMap, OrientedCircle, PointCP1};
use crate::surface::{FuchsianHolonomy, Holonomy};
use crate::tolerance::TOL_GEO;

pub const DEFAULT_DEPTH: usize = 8;
/// Default radius around the base point within which leaves are lifted.
pub const DEFAULT_LEAF_RADIUS: f64 = 4.0;
const BASEPOINT_OFFSET: f64 = 1e-4;

/// Developing map of the standard crescent of angle `theta`: `exp(x + i y)`.
pub fn crescent_develop(theta: f64, x: f64, y: f64) -> Result<PointCP1> {
    if !(0.0..=theta).contains(&y) {
        return Err(Error::OutOfChart { y, theta });
    }
    Ok(PointCP1::finite(Complex64::new(x, y).exp()))
}

/// A point of the universal cover of a grafted surface: either a point of a
/// complementary stratum (a point of the upper half-plane off the leaves) or
/// a point `(x, y)` of the crescent inserted along a lifted leaf.
///
/// In the crescent of a leaf, `y = 0` is glued to the stratum on the leaf's
/// right and `y = weight` to the one on its left; `x` is the arclength
/// parameter along the leaf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GraftedPoint {
    Stratum { re: f64, im: f64 },
    Crescent { leaf: usize, x: f64, y: f64 },
}

impl GraftedPoint {
    pub fn stratum(z: Complex64) -> Self {
        GraftedPoint::Stratum { re: z.re, im: z.im }
    }
}

/// Frame of a leaf: the map `F` with `F(e^x)` the leaf point at parameter
/// `x` and `F(e^(x + i y)) = rot(leaf, y) F(e^x)`.
pub fn leaf_frame(leaf: &super::leaves::LiftedLeaf) -> MoebiusMap {
    let t = leaf.geodesic.to_standard();
    let (s, e) = (leaf.geodesic.start, leaf.geodesic.end);
    // a point of the leaf inside the upper half-plane
    let h = match (s.to_complex(), e.to_complex()) {
        (Some(a), Some(b)) => Complex64::new((a.re + b.re) / 2.0, (a.re - b.re).abs() / 2.0),
        (Some(a), None) | (None, Some(a)) => Complex64::new(a.re, 1.0),
        (None, None) => unreachable!("distinct endpoints"),
    };
    let beta = t.apply_complex(h).to_complex().expect("finite image").arg();
    t.inverse() * MoebiusMap::diagonal(Complex64::from_polar(1.0, beta / 2.0))
}

/// Chart of a crescent: developed point is `map(exp(x + i y))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrescentChart {
    pub leaf: usize,
    pub theta: f64,
    pub map: MoebiusMap,
    /// Chart of the stratum glued at `y = 0`.
    pub right: MoebiusMap,
}

impl CrescentChart {
    pub fn develop(&self, x: f64, y: f64) -> Result<PointCP1> {
        Ok(self.map.apply(crescent_develop(self.theta, x, y)?))
    }

    /// Chart of the stratum glued at `y = theta`.
    pub fn left(&self, leaves: &LeafSet) -> MoebiusMap {
        self.right * rotation_about_geodesic(&leaves.leaves[self.leaf].geodesic, self.theta)
    }

    /// Support disk of the crescent at height `y`: the image of the half-plane
    /// bisected by the ray of angle `y`.
    pub fn support_circle(&self, y: f64) -> OrientedCircle {
        let dir = Complex64::from_polar(1.0, y);
        let line = OrientedCircle::through(
            PointCP1::finite(Complex64::new(0.0, 0.0)),
            PointCP1::finite(dir * Complex64::new(0.0, -1.0)),
            PointCP1::INFINITY,
        )
        .expect("distinct points");
        // traversing 0 -> -i dir -> infinity keeps the ray direction on the left
        line.transform(&self.map)
    }
}

/// A Fuchsian structure grafted along a weighted multicurve.
#[derive(Debug)]
pub struct GraftedStructure {
    base: FuchsianHolonomy,
    multicurve: WeightedMulticurve,
    depth: usize,
    basepoint: Complex64,
    leaves: LeafSet,
    deformed: OnceLock<Result<Holonomy>>,
}

impl GraftedStructure {
    pub fn new(
        base: FuchsianHolonomy,
        multicurve: WeightedMulticurve,
        depth: usize,
    ) -> Result<Self> {
        Self::with_leaf_radius(base, multicurve, depth, DEFAULT_LEAF_RADIUS)
    }

    /// Lifts leaves within `radius` of the base point (never less than what
    /// the generator segments need).
    pub fn with_leaf_radius(
        base: FuchsianHolonomy,
        multicurve: WeightedMulticurve,
        depth: usize,
        radius: f64,
    ) -> Result<Self> {
        if !(1..=16).contains(&depth) {
            return Err(Error::Precondition(format!(
                "lift depth {depth} outside [1, 16]"
            )));
        }
        let generators = base.holonomy.generators.len();
        for e in &multicurve.entries {
            if e.word.letters().iter().any(|l| l.generator() >= generators) {
                return Err(Error::InvalidWord(format!(
                    "{} uses a handle the genus {} surface lacks",
                    e.word, base.holonomy.genus
                )));
            }
        }
        let center = base.basepoint;
        let reach = base
            .holonomy
            .generators
            .iter()
            .map(|g| {
                let q = g.apply_complex(center).to_complex().unwrap_or(center);
                h2_distance(center, q)
            })
            .fold(0.0, f64::max);
        let radius = radius.max(reach + 0.5);
        let leaves = LeafSet::build(&base.holonomy, &multicurve, depth, center, radius)?;
        let basepoint = Self::off_leaves(&leaves, center);
        Ok(GraftedStructure {
            base,
            multicurve,
            depth,
            basepoint,
            leaves,
            deformed: OnceLock::new(),
        })
    }

    /// Moves `x` by a fixed small offset when it sits on a leaf, trying a few
    /// directions in a fixed order.
    fn off_leaves(leaves: &LeafSet, x: Complex64) -> Complex64 {
        let clear = |z: Complex64| leaves.nearest_leaf(z).is_none_or(|(_, d)| d > 1e-6);
        if clear(x) {
            return x;
        }
        for k in 0..8 {
            let z =
                x + Complex64::from_polar(BASEPOINT_OFFSET, k as f64 * std::f64::consts::FRAC_PI_4);
            if clear(z) {
                return z;
            }
        }
        x + Complex64::new(BASEPOINT_OFFSET, BASEPOINT_OFFSET)
    }

    pub fn base(&self) -> &FuchsianHolonomy {
        &self.base
    }

    pub fn multicurve(&self) -> &WeightedMulticurve {
        &self.multicurve
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub fn leaves(&self) -> &LeafSet {
        &self.leaves
    }

    /// Bending cocycle `B(p, q)`: ordered product of the rotations about the
    /// leaves crossed by `[p, q]`.
    /// Both points must lie within the lifted-leaf radius of the base point.
    pub fn cocycle(&self, p: Complex64, q: Complex64) -> Result<MoebiusMap> {
        for z in [p, q] {
            if !(z.im > 0.0) {
                return Err(Error::Precondition(format!(
                    "{z} is not in the upper half-plane"
                )));
            }
            let d = h2_distance(self.base.basepoint, z);
            if d > self.leaves.radius + 1e-9 {
                return Err(Error::Precondition(format!(
                    "{z} lies at distance {d:.3} beyond the lifted-leaf radius {:.3}",
                    self.leaves.radius
                )));
            }
        }
        Ok(self
            .leaves
            .bending(p, q, &[])?
            .unwrap_or(MoebiusMap::IDENTITY))
    }

    /// The deformed holonomy `rho'(g) = B(x0, rho(g) x0) rho(g)`, computed once.
    pub fn holonomy(&self) -> Result<&Holonomy> {
        self.deformed
            .get_or_init(|| self.compute_holonomy())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_holonomy(&self) -> Result<Holonomy> {
        let x0 = self.basepoint;
        let gens = self
            .base
            .holonomy
            .generators
            .par_iter()
            .map(|g| {
                let q = g.apply_complex(x0).to_complex().ok_or_else(|| {
                    Error::Numeric("generator sends base point to infinity".into())
                })?;
                Ok(match self.leaves.bending(x0, q, &[])? {
                    Some(b) => b * *g,
                    None => *g,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let h = Holonomy::new(self.base.genus(), gens)?;
        let residual = h.relation_residual();
        if !residual.is_finite() {
            return Err(Error::Numeric("deformed holonomy is not finite".into()));
        }
        Ok(h)
    }

    /// Chart of the stratum containing `p`: developed point is `chart * p`.
    pub fn stratum_chart(&self, p: Complex64) -> Result<MoebiusMap> {
        self.cocycle(self.basepoint, p)
    }

    pub fn crescent_chart(&self, leaf: usize) -> Result<CrescentChart> {
        let l = self
            .leaves
            .leaves
            .get(leaf)
            .ok_or_else(|| Error::Domain(format!("no lifted leaf {leaf}")))?;
        let frame = leaf_frame(l);
        let m = frame
            .apply_complex(Complex64::new(1.0, 0.0))
            .to_complex()
            .expect("leaf point");
        let mut chart = self
            .leaves
            .bending(self.basepoint, m, &[leaf])?
            .unwrap_or(MoebiusMap::IDENTITY);
        if self.leaves.on_left(leaf, self.basepoint) {
            chart = chart * rotation_about_geodesic(&l.geodesic, -l.weight);
        }
        Ok(CrescentChart {
            leaf,
            theta: l.weight,
            map: chart * frame,
            right: chart,
        })
    }

    /// Leaf point at arclength parameter `x` along leaf `leaf`.
    pub fn leaf_point(&self, leaf: usize, x: f64) -> Result<Complex64> {
        let l = self
            .leaves
            .leaves
            .get(leaf)
            .ok_or_else(|| Error::Domain(format!("no lifted leaf {leaf}")))?;
        leaf_frame(l)
            .apply_complex(Complex64::new(x, 0.0).exp())
            .to_complex()
            .ok_or_else(|| Error::Numeric("leaf point at infinity".into()))
    }

    /// Developing map.
    pub fn develop(&self, pt: &GraftedPoint) -> Result<PointCP1> {
        match *pt {
            GraftedPoint::Stratum { re, im } => {
                let p = Complex64::new(re, im);
                Ok(self.stratum_chart(p)?.apply_complex(p))
            }
            GraftedPoint::Crescent { leaf, x, y } => self.crescent_chart(leaf)?.develop(x, y),
        }
    }

    /// Collapsing map to the hyperbolic surface.
    pub fn collapse(&self, pt: &GraftedPoint) -> Result<Complex64> {
        match *pt {
            GraftedPoint::Stratum { re, im } => Ok(Complex64::new(re, im)),
            GraftedPoint::Crescent { leaf, x, .. } => self.leaf_point(leaf, x),
        }
    }

    /// Pleated surface `beta` at a point of the hyperbolic surface.
    pub fn pleat(&self, p: Complex64) -> Result<PointH3> {
        if let Some((leaf, d)) = self.leaves.nearest_leaf(p) {
            if d < TOL_GEO {
                let chart = self.crescent_chart(leaf)?;
                return Ok(PointH3::from_h2(p).transform(&chart.right));
            }
        }
        Ok(PointH3::from_h2(p).transform(&self.stratum_chart(p)?))
    }

    /// Support plane of the stratum containing `p`.
    pub fn support_plane(&self, p: Complex64) -> Result<PlaneH3> {
        Ok(PlaneH3::real().transform(&self.stratum_chart(p)?))
    }

    /// Indices of the leaves lifted from entry `curve`.
    pub fn leaves_of(&self, curve: usize) -> impl Iterator<Item = usize> + '_ {
        self.leaves
            .leaves
            .iter()
            .enumerate()
            .filter(move |(_, l)| l.curve == curve)
            .map(|(i, _)| i)
    }
}

/// Deformed holonomy of `rho` grafted along `mc`, lifting leaves to `depth`.
pub fn grafted_holonomy(
    rho: &FuchsianHolonomy,
    mc: &WeightedMulticurve,
    depth: usize,
) -> Result<Holonomy> {
    let gs = GraftedStructure::new(rho.clone(), mc.clone(), depth)?;
    gs.holonomy().cloned()
}
