use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x5eed_d15c;

/// Closed Euclidean disk in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnclosingDisk {
    pub center: Complex64,
    pub radius: f64,
}

impl EnclosingDisk {
    fn contains(&self, p: Complex64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-14
    }

    fn from_two(a: Complex64, b: Complex64) -> Self {
        EnclosingDisk {
            center: (a + b) / 2.0,
            radius: (a - b).norm() / 2.0,
        }
    }

    fn from_three(a: Complex64, b: Complex64, c: Complex64) -> Option<Self> {
        circumcircle(a, b, c).map(|(center, radius)| EnclosingDisk { center, radius })
    }
}

/// Circumcircle of three points, `None` if collinear.
pub fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    let bp = b - a;
    let cp = c - a;
    let d = 2.0 * (bp.re * cp.im - bp.im * cp.re);
    let scale = bp.norm_sqr().max(cp.norm_sqr());
    if d.abs() <= 1e-14 * scale {
        return None;
    }
    let b2 = bp.norm_sqr();
    let c2 = cp.norm_sqr();
    let ux = (cp.im * b2 - bp.im * c2) / d;
    let uy = (bp.re * c2 - cp.re * b2) / d;
    let u = Complex64::new(ux, uy);
    Some((a + u, u.norm()))
}

/// Smallest closed disk containing all `points`, with the default seed.
pub fn minimal_enclosing_disk(points: &[Complex64]) -> Result<EnclosingDisk> {
    minimal_enclosing_disk_seeded(points, DEFAULT_SEED)
}

/// Randomized incremental construction (expected linear time). The shuffle
/// is driven by `seed`, so results are reproducible bit-for-bit.
pub fn minimal_enclosing_disk_seeded(points: &[Complex64], seed: u64) -> Result<EnclosingDisk> {
    if points.is_empty() {
        return Err(Error::Empty("minimal enclosing disk of no points"));
    }
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Degenerate("non-finite point".into()));
    }
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pts.shuffle(&mut rng);

    let mut disk = EnclosingDisk {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if disk.contains(pts[i]) {
            continue;
        }
        disk = EnclosingDisk {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if disk.contains(pts[j]) {
                continue;
            }
            disk = EnclosingDisk::from_two(pts[i], pts[j]);
            for k in 0..j {
                if disk.contains(pts[k]) {
                    continue;
                }
                disk = EnclosingDisk::from_three(pts[i], pts[j], pts[k]).unwrap_or_else(|| {
                    // collinear: the farthest pair spans the disk
                    let cands = [
                        EnclosingDisk::from_two(pts[i], pts[j]),
                        EnclosingDisk::from_two(pts[i], pts[k]),
                        EnclosingDisk::from_two(pts[j], pts[k]),
                    ];
                    cands
                        .into_iter()
                        .max_by(|x, y| x.radius.total_cmp(&y.radius))
                        .unwrap()
                });
            }
        }
    }
    Ok(disk)
}

/// Points of `points` lying on the boundary of `disk` within `rel_tol * radius`.
pub fn support_points(points: &[Complex64], disk: &EnclosingDisk, rel_tol: f64) -> Vec<usize> {
    let band = rel_tol * disk.radius.max(f64::MIN_POSITIVE);
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| ((**p - disk.center).norm() - disk.radius).abs() <= band)
        .map(|(i, _)| i)
        .collect()
}
