use std::collections::HashMap;

use rayon::prelude::*;

use super::fenchel_nielsen::{attracting_fixed_point, Holonomy};
use super::word::{GroupWord, Letter};
use crate::moebius::{MoebiusMap, PointCP1};
use crate::tolerance::TOL_GEO;

/// Every nonempty reduced word of length at most `radius` with its image, in
/// shortlex order.
pub fn word_images(rho: &Holonomy, radius: usize) -> Vec<(GroupWord, MoebiusMap)> {
    let alphabet = (4 * rho.genus) as u8;
    let letters: Vec<MoebiusMap> = (0..alphabet).map(|l| rho.letter(Letter(l))).collect();
    let mut out = Vec::new();
    let mut layer = vec![(GroupWord::identity(), MoebiusMap::IDENTITY)];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(layer.len() * (alphabet as usize - 1));
        for (w, m) in &layer {
            let last = w.letters().last().copied();
            for l in (0..alphabet).map(Letter) {
                if last == Some(l.inverse()) {
                    continue;
                }
                let word = GroupWord::from_letters(w.letters().iter().copied().chain([l]));
                next.push((word, *m * letters[l.0 as usize]));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Chordal-distance deduplication of points on CP¹ backed by a spatial hash
/// on the unit sphere. Insertion order is preserved.
#[derive(Debug, Clone)]
pub struct PointDedup {
    tol: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<PointCP1>,
}

impl PointDedup {
    pub fn new(tol: f64) -> Self {
        PointDedup {
            tol,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn cell(&self, s: [f64; 3]) -> [i64; 3] {
        // chordal distance is half the euclidean distance on the unit sphere
        let h = 2.0 * self.tol;
        s.map(|c| (c / h).floor() as i64)
    }

    /// Inserts `p` unless a stored point lies within the tolerance; returns
    /// whether it was inserted.
    pub fn insert(&mut self, p: PointCP1) -> bool {
        let s = p.to_sphere();
        let c = self.cell(s);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.cells.get(&[c[0] + dx, c[1] + dy, c[2] + dz]) {
                        if ids
                            .iter()
                            .any(|&i| self.points[i].chordal_distance(p) < self.tol)
                        {
                            return false;
                        }
                    }
                }
            }
        }
        self.cells.entry(c).or_default().push(self.points.len());
        self.points.push(p);
        true
    }

    pub fn contains(&self, p: PointCP1) -> bool {
        let c = self.cell(p.to_sphere());
        (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                (-1..=1).any(|dz| {
                    self.cells
                        .get(&[c[0] + dx, c[1] + dy, c[2] + dz])
                        .is_some_and(|ids| {
                            ids.iter()
                                .any(|&i| self.points[i].chordal_distance(p) < self.tol)
                        })
                })
            })
        })
    }

    pub fn into_points(self) -> Vec<PointCP1> {
        self.points
    }
}

/// Attracting fixed points of the loxodromic images of all words of length
/// at most `depth`, deduplicated to `TOL_GEO` in the chordal metric and
/// listed in shortlex order of the first word producing them.
pub fn limit_set_sample(rho: &Holonomy, depth: usize) -> Vec<PointCP1> {
    let images = word_images(rho, depth);
    let fixed: Vec<Option<PointCP1>> = images
        .par_iter()
        .map(|(_, m)| attracting_fixed_point(m))
        .collect();
    let mut dedup = PointDedup::new(TOL_GEO);
    for p in fixed.into_iter().flatten() {
        dedup.insert(p);
    }
    dedup.into_points()
}

/// Chordal Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[PointCP1], b: &[PointCP1]) -> f64 {
    let directed = |x: &[PointCP1], y: &[PointCP1]| {
        x.par_iter()
            .map(|p| {
                y.iter()
                    .map(|q| p.chordal_distance(*q))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}
