use num_complex::Complex64;
use rayon::prelude::*;

use super::multicurve::WeightedMulticurve;
use crate::error::{Error, Result};
use crate::hyperbolic::{rotation_about_geodesic, GeodesicH3, PointH3};
use crate::moebius::{MoebiusMap, PointCP1};
use crate::surface::{axis, GroupWord, Holonomy, Letter};
use crate::tolerance::TOL_GEO;

/// Angular tolerance for identifying two lifted leaves by their endpoints.
const LEAF_MERGE_TOL: f64 = 1e-6;

/// Klein-model chart of the upper half-plane centered at `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinChart {
    pub center: Complex64,
}

impl KleinChart {
    pub fn new(center: Complex64) -> Self {
        KleinChart { center }
    }

    /// Poincare-disk coordinate.
    pub fn disk(&self, z: Complex64) -> Complex64 {
        (z - self.center) / (z - self.center.conj())
    }

    pub fn klein(&self, z: Complex64) -> Complex64 {
        let w = self.disk(z);
        2.0 * w / (1.0 + w.norm_sqr())
    }

    /// Inverse of `klein`.
    pub fn from_klein(&self, k: Complex64) -> Complex64 {
        let w = k / (1.0 + (1.0 - k.norm_sqr()).max(0.0).sqrt());
        (self.center - self.center.conj() * w) / (1.0 - w)
    }

    /// Position of an ideal point on the unit circle.
    pub fn ideal(&self, p: PointCP1) -> Complex64 {
        let a = p.z0 - self.center * p.z1;
        let b = p.z0 - self.center.conj() * p.z1;
        let w = a / b;
        w / w.norm()
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn h2_distance(p: Complex64, q: Complex64) -> f64 {
    PointH3::from_h2(p).distance(&PointH3::from_h2(q))
}

/// Hyperbolic distance from a point of the upper half-plane to a geodesic
/// with real endpoints.
pub fn h2_distance_to_geodesic(z: Complex64, g: &GeodesicH3) -> f64 {
    let t = g.to_standard();
    match t.apply_complex(z).to_complex() {
        Some(w) => (w.re.abs() / w.im.abs()).asinh(),
        None => f64::INFINITY,
    }
}

/// One lift of a multicurve component to the universal cover: the axis of
/// `w gamma w^-1`, oriented from its repelling to its attracting point.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedLeaf {
    pub geodesic: GeodesicH3,
    pub weight: f64,
    /// Index of the multicurve entry.
    pub curve: usize,
    pub word: GroupWord,
    /// Endpoints (start, end) in the leaf set's Klein chart.
    pub ends: [Complex64; 2],
}

impl LiftedLeaf {
    /// Klein-chart distance of the chord from the chart center, as a hyperbolic length.
    pub fn distance_from_center(&self) -> f64 {
        ((self.ends[0] + self.ends[1]).norm() / 2.0)
            .min(1.0)
            .atanh()
    }

    /// Signed side of a Klein point: positive on the left of the oriented chord.
    pub fn side(&self, k: Complex64) -> f64 {
        cross(self.ends[1] - self.ends[0], k - self.ends[0])
    }
}

fn cross(u: Complex64, v: Complex64) -> f64 {
    u.re * v.im - u.im * v.re
}

/// A transversal intersection of a segment with a lifted leaf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub leaf: usize,
    /// Parameter along the segment in the Klein chart, in (0, 1).
    pub t: f64,
    /// +1 when the leaf's start lies on the left of the segment, so that the
    /// segment passes from the leaf's right side to its left side.
    pub sign: i8,
}

/// All lifted leaves of a multicurve meeting a ball around a chart center.
#[derive(Debug, Clone)]
pub struct LeafSet {
    pub chart: KleinChart,
    pub radius: f64,
    pub depth: usize,
    pub leaves: Vec<LiftedLeaf>,
}

struct Candidate {
    lo: f64,
    hi: f64,
    curve: usize,
    letters: Vec<Letter>,
    geodesic: GeodesicH3,
    ends: [Complex64; 2],
}

/// Group elements `w` of word length at most `depth` whose displacement
/// `d(c, w c)` stays below `bound` along the whole word, in depth-first
/// shortlex order.
fn orbit_elements(
    rho: &Holonomy,
    c: Complex64,
    depth: usize,
    bound: f64,
) -> Vec<(Vec<Letter>, MoebiusMap)> {
    let alphabet = 4 * rho.genus;
    let letters: Vec<MoebiusMap> = (0..alphabet).map(|l| rho.letter(Letter(l as u8))).collect();
    let x = PointH3::from_h2(c);
    fn rec(
        letters: &[MoebiusMap],
        x: &PointH3,
        depth: usize,
        bound: f64,
        stack: &mut Vec<Letter>,
        acc: &MoebiusMap,
        out: &mut Vec<(Vec<Letter>, MoebiusMap)>,
    ) {
        if stack.len() == depth {
            return;
        }
        let last = stack.last().copied();
        for (i, m) in letters.iter().enumerate() {
            let l = Letter(i as u8);
            if last == Some(l.inverse()) {
                continue;
            }
            let next = *acc * *m;
            if x.transform(&next).distance(x) > bound {
                continue;
            }
            stack.push(l);
            out.push((stack.clone(), next));
            rec(letters, x, depth, bound, stack, &next, out);
            stack.pop();
        }
    }
    let mut all = vec![(Vec::new(), MoebiusMap::IDENTITY)];
    let subtrees: Vec<Vec<(Vec<Letter>, MoebiusMap)>> = (0..alphabet)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            if depth == 0 {
                return out;
            }
            let first = letters[i];
            if x.transform(&first).distance(&x) > bound {
                return out;
            }
            let mut stack = vec![Letter(i as u8)];
            out.push((stack.clone(), first));
            rec(&letters, &x, depth, bound, &mut stack, &first, &mut out);
            out
        })
        .collect();
    for s in subtrees {
        all.extend(s);
    }
    all
}

impl LeafSet {
    /// Enumerates the lifts `rho(w) axis(rho(gamma))` for words `w` of length at
    /// most `depth` that come within `radius` of `center`, merges duplicates
    /// and checks that the result is a disjoint family.
    pub fn build(
        rho: &Holonomy,
        mc: &WeightedMulticurve,
        depth: usize,
        center: Complex64,
        radius: f64,
    ) -> Result<LeafSet> {
        let chart = KleinChart::new(center);
        if mc.is_empty() {
            return Ok(LeafSet {
                chart,
                radius,
                depth,
                leaves: Vec::new(),
            });
        }
        let mut axes = Vec::with_capacity(mc.len());
        let mut bound: f64 = 0.0;
        for e in &mc.entries {
            let m = rho.eval(&e.word);
            let g = axis(&m).map_err(|_| {
                Error::InvalidMulticurve(format!("image of {} is not hyperbolic", e.word))
            })?;
            let ell = m.translation_length();
            bound = bound.max(radius + ell + h2_distance_to_geodesic(center, &g));
            axes.push(g);
        }
        let x = PointH3::from_h2(center);
        let slack = rho
            .generators
            .iter()
            .map(|g| x.transform(g).distance(&x))
            .fold(0.0, f64::max);
        let elements = orbit_elements(rho, center, depth, bound + slack);

        let mut candidates: Vec<Candidate> = elements
            .par_iter()
            .flat_map_iter(|(letters, m)| {
                axes.iter().enumerate().filter_map(move |(ci, g)| {
                    let geodesic = g.transform(m);
                    let ends = [chart.ideal(geodesic.start), chart.ideal(geodesic.end)];
                    let dist = ((ends[0] + ends[1]).norm() / 2.0).min(1.0).atanh();
                    (dist <= radius).then(|| Candidate {
                        lo: 0.0,
                        hi: 0.0,
                        curve: ci,
                        letters: letters.clone(),
                        geodesic,
                        ends,
                    })
                })
            })
            .collect();

        // cut the circle inside the largest gap between endpoints so that no
        // cluster of coincident endpoints straddles the branch cut
        let mut angles: Vec<f64> = candidates
            .iter()
            .flat_map(|c| [c.ends[0].arg(), c.ends[1].arg()])
            .collect();
        angles.sort_by(f64::total_cmp);
        let mut cut = -std::f64::consts::PI;
        if let (Some(first), Some(last)) = (angles.first(), angles.last()) {
            let mut best = first + 2.0 * std::f64::consts::PI - last;
            cut = last + best / 2.0;
            for w in angles.windows(2) {
                if w[1] - w[0] > best {
                    best = w[1] - w[0];
                    cut = (w[0] + w[1]) / 2.0;
                }
            }
        }
        let unwrap = |a: f64| (a - cut).rem_euclid(2.0 * std::f64::consts::PI);
        for c in &mut candidates {
            let (u, v) = (unwrap(c.ends[0].arg()), unwrap(c.ends[1].arg()));
            c.lo = u.min(v);
            c.hi = u.max(v);
        }
        candidates.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));

        let mut kept: Vec<Candidate> = Vec::new();
        for c in candidates {
            let mut duplicate = None;
            for (j, k) in kept.iter().enumerate().rev() {
                if k.lo < c.lo - LEAF_MERGE_TOL {
                    break;
                }
                if (k.hi - c.hi).abs() < LEAF_MERGE_TOL {
                    duplicate = Some(j);
                    break;
                }
            }
            match duplicate {
                Some(j) => {
                    let k = &mut kept[j];
                    if k.curve != c.curve {
                        return Err(Error::InvalidMulticurve(format!(
                            "curves {} and {} have a common lift",
                            mc.entries[k.curve].word, mc.entries[c.curve].word
                        )));
                    }
                    let shorter = (c.letters.len(), &c.letters) < (k.letters.len(), &k.letters);
                    if shorter {
                        *k = c;
                    }
                }
                None => kept.push(c),
            }
        }

        // disjointness: chords cross iff exactly one endpoint of one lies
        // strictly between the endpoints of the other
        for i in 0..kept.len() {
            for j in i + 1..kept.len() {
                let (a, b) = (&kept[i], &kept[j]);
                if b.lo > a.hi {
                    break;
                }
                let inside = |x: f64| x > a.lo + LEAF_MERGE_TOL && x < a.hi - LEAF_MERGE_TOL;
                let outside = |x: f64| x < a.lo - LEAF_MERGE_TOL || x > a.hi + LEAF_MERGE_TOL;
                if (inside(b.lo) && outside(b.hi)) || (inside(b.hi) && outside(b.lo)) {
                    return Err(Error::InvalidMulticurve(format!(
                        "lifts of {} and {} intersect",
                        mc.entries[a.curve].word, mc.entries[b.curve].word
                    )));
                }
            }
        }

        let mut leaves: Vec<LiftedLeaf> = kept
            .into_iter()
            .map(|c| LiftedLeaf {
                geodesic: c.geodesic,
                weight: mc.entries[c.curve].weight.radians(),
                curve: c.curve,
                word: GroupWord::from_letters(c.letters),
                ends: c.ends,
            })
            .collect();
        leaves.sort_by(|a, b| {
            a.distance_from_center()
                .total_cmp(&b.distance_from_center())
                .then_with(|| a.word.shortlex_cmp(&b.word))
        });
        Ok(LeafSet {
            chart,
            radius,
            depth,
            leaves,
        })
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Smallest distance from `z` to a leaf, with the leaf index.
    pub fn nearest_leaf(&self, z: Complex64) -> Option<(usize, f64)> {
        self.leaves
            .iter()
            .enumerate()
            .map(|(i, l)| (i, h2_distance_to_geodesic(z, &l.geodesic)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Whether `z` lies on the left of leaf `i` (relative to its orientation).
    pub fn on_left(&self, i: usize, z: Complex64) -> bool {
        self.leaves[i].side(self.chart.klein(z)) > 0.0
    }

    /// Leaves crossed by the geodesic segment `[p, q]`, ordered from `p`.
    pub fn crossings(&self, p: Complex64, q: Complex64) -> Result<Vec<Crossing>> {
        self.crossings_excluding(p, q, &[])
    }

    /// Like `crossings`, ignoring the listed leaves (used for segments ending on a leaf).
    pub fn crossings_excluding(
        &self,
        p: Complex64,
        q: Complex64,
        skip: &[usize],
    ) -> Result<Vec<Crossing>> {
        if !(p.im > 0.0) || !(q.im > 0.0) {
            return Err(Error::Domain(
                "segment endpoint outside the upper half-plane".into(),
            ));
        }
        let (kp, kq) = (self.chart.klein(p), self.chart.klein(q));
        let mut out = Vec::new();
        for (i, leaf) in self.leaves.iter().enumerate() {
            if skip.contains(&i) {
                continue;
            }
            let (sp, sq) = (leaf.side(kp), leaf.side(kq));
            for (z, s) in [(p, sp), (q, sq)] {
                if s.abs() < 1e-3 && h2_distance_to_geodesic(z, &leaf.geodesic) < TOL_GEO {
                    return Err(Error::OnLeaf {
                        suggested_offset: 1e-4,
                    });
                }
            }
            if sp * sq < 0.0 {
                let t = sp / (sp - sq);
                let sign = if cross(kq - kp, leaf.ends[0] - kp) > 0.0 {
                    1
                } else {
                    -1
                };
                out.push(Crossing { leaf: i, t, sign });
            }
        }
        out.sort_by(|a, b| a.t.total_cmp(&b.t));
        Ok(out)
    }

    /// Rotation contributed by a crossing: about the leaf by `sign * weight`.
    pub fn rotation(&self, c: &Crossing) -> MoebiusMap {
        let leaf = &self.leaves[c.leaf];
        rotation_about_geodesic(&leaf.geodesic, c.sign as f64 * leaf.weight)
    }

    /// Ordered product of the crossing rotations along `[p, q]`, or `None`
    /// when no leaf of nonzero weight is crossed.
    pub fn bending(
        &self,
        p: Complex64,
        q: Complex64,
        skip: &[usize],
    ) -> Result<Option<MoebiusMap>> {
        let mut acc: Option<MoebiusMap> = None;
        for c in self.crossings_excluding(p, q, skip)? {
            if self.leaves[c.leaf].weight == 0.0 {
                continue;
            }
            let r = self.rotation(&c);
            acc = Some(match acc {
                Some(m) => m * r,
                None => r,
            });
        }
        Ok(acc)
    }
}

/// Leaves of `mc` lifted by words of length at most `depth` that cross the
/// segment `[p, q]`, ordered along it. The leaf set is taken in a ball
/// around `p` large enough to contain the segment.
pub fn lift_crossings(
    rho: &Holonomy,
    mc: &WeightedMulticurve,
    depth: usize,
    p: Complex64,
    q: Complex64,
) -> Result<(LeafSet, Vec<Crossing>)> {
    let set = LeafSet::build(rho, mc, depth, p, h2_distance(p, q) + 0.5)?;
    let c = set.crossings(p, q)?;
    Ok((set, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{fuchsian_from_fn, FNCoordinates};

    fn rho() -> Holonomy {
        fuchsian_from_fn(&FNCoordinates::new([1.3, 1.5, 1.7], [0.2, -0.1, 0.3]).unwrap())
            .unwrap()
            .holonomy
    }

    #[test]
    fn klein_chart_roundtrip() {
        let k = KleinChart::new(Complex64::new(0.3, 1.2));
        for z in [Complex64::new(1.0, 0.5), Complex64::new(-2.0, 3.0)] {
            assert!((k.from_klein(k.klein(z)) - z).norm() < 1e-12);
        }
        assert!(k.klein(k.center).norm() < 1e-15);
        let u = k.ideal(PointCP1::real(2.0));
        assert!((u.norm() - 1.0).abs() < 1e-15);
        let near = k.klein(Complex64::new(2.0, 1e-9));
        assert!((near - u).norm() < 1e-6);
    }

    #[test]
    fn distance_to_geodesic_examples() {
        let g = GeodesicH3::new(PointCP1::real(0.0), PointCP1::INFINITY).unwrap();
        assert!(h2_distance_to_geodesic(Complex64::new(0.0, 2.0), &g) < 1e-15);
        let d = h2_distance_to_geodesic(Complex64::new(1.0, 1.0), &g);
        assert!((d - 1f64.asinh()).abs() < 1e-14);
    }

    #[test]
    fn leaves_are_distinct_and_disjoint() {
        let mc =
            WeightedMulticurve::parse(&[("a1", "1"), ("a2", "1"), ("a1 b1 A1 B1", "1")]).unwrap();
        let set = LeafSet::build(&rho(), &mc, 6, Complex64::new(0.0, 1.0), 3.0).unwrap();
        assert!(set.len() > 3);
        for (i, a) in set.leaves.iter().enumerate() {
            for b in &set.leaves[i + 1..] {
                assert!(!a.geodesic.same_unoriented(&b.geodesic, 1e-9));
            }
        }
    }

    #[test]
    fn intersecting_curves_rejected() {
        let mc = WeightedMulticurve::parse(&[("a1", "1"), ("b1", "1")]).unwrap();
        let err = LeafSet::build(&rho(), &mc, 4, Complex64::new(0.0, 1.0), 3.0).unwrap_err();
        assert!(matches!(err, Error::InvalidMulticurve(_)));
        let dup = WeightedMulticurve::parse(&[("a1", "1"), ("A1", "1")]).unwrap();
        assert!(LeafSet::build(&rho(), &dup, 4, Complex64::new(0.0, 1.0), 3.0).is_err());
    }

    #[test]
    fn reversed_segment_reverses_crossings() {
        let mc = WeightedMulticurve::parse(&[("a1", "1"), ("a2", "1")]).unwrap();
        let set = LeafSet::build(&rho(), &mc, 6, Complex64::new(0.0, 1.0), 4.0).unwrap();
        let (p, q) = (Complex64::new(-1.3, 0.4), Complex64::new(2.1, 0.7));
        let fwd = set.crossings(p, q).unwrap();
        let mut bwd = set.crossings(q, p).unwrap();
        bwd.reverse();
        assert_eq!(fwd.len(), bwd.len());
        for (a, b) in fwd.iter().zip(&bwd) {
            assert_eq!(a.leaf, b.leaf);
            assert_eq!(a.sign, -b.sign);
            assert!((a.t - (1.0 - b.t)).abs() < 1e-9);
        }
    }

    #[test]
    fn segment_in_one_stratum_has_no_crossings() {
        let mc = WeightedMulticurve::parse(&[("a1", "1")]).unwrap();
        let set = LeafSet::build(&rho(), &mc, 6, Complex64::new(0.0, 1.0), 3.0).unwrap();
        let p = Complex64::new(0.05, 1.1);
        let (i, d) = set.nearest_leaf(p).unwrap();
        assert!(d > 0.0, "{i}");
        let q = p + Complex64::new(0.0, 1e-3 * d.min(1.0));
        assert!(set.crossings(p, q).unwrap().is_empty());
    }
}
