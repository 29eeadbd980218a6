use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::measure::{angle_sum, MAX_REFINEMENTS, TOL_MEASURE};
use super::report::Report;
use crate::error::{Error, Result};
use crate::grafting::{leaf_frame, lift_loop, lifts_of, GraftedStructure, LoopLift};
use crate::moebius::{MoebiusMap, OrientedCircle, PointCP1};
use crate::surface::{axis, GroupWord};

const MIN_LEVELS: usize = 4;

/// Weight read off a grafting cylinder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveredWeight {
    pub curve: String,
    pub configured: f64,
    pub recovered: f64,
    /// Angle sums over the dyadic refinements of the transversal.
    pub trace: Vec<f64>,
}

impl RecoveredWeight {
    /// Distance from the recovered weight to the nearest multiple of `2 pi`.
    pub fn two_pi_defect(&self) -> f64 {
        let k = (self.recovered / TAU).round();
        (self.recovered - k * TAU).abs()
    }
}

/// Lifted leaf of `curve` nearest to the base point: a leaf of an entry with
/// the same word (or its inverse), else any leaf on the axis of the curve.
fn leaf_of(gs: &GraftedStructure, curve: &GroupWord) -> Result<Option<usize>> {
    let mc = gs.multicurve();
    let inv = curve.inverse();
    if let Some(entry) = mc
        .entries
        .iter()
        .position(|e| e.word == *curve || e.word == inv)
    {
        return Ok(gs.leaves_of(entry).next());
    }
    let ax = axis(&gs.base().eval(curve))?;
    Ok(gs
        .leaves()
        .leaves
        .iter()
        .position(|l| l.geodesic.same_unoriented(&ax, 1e-8)))
}

/// Total angle across the grafting cylinder of `curve`, integrated along a
/// transversal that runs from the stratum on the right of a lifted leaf
/// through its crescent into the stratum on its left.
pub fn recover_weight_from_grafted(
    gs: &GraftedStructure,
    curve: &GroupWord,
) -> Result<RecoveredWeight> {
    let name = curve.to_string();
    if gs.multicurve().is_empty() {
        return Ok(RecoveredWeight {
            curve: name,
            configured: 0.0,
            recovered: 0.0,
            trace: vec![0.0],
        });
    }
    let Some(leaf) = leaf_of(gs, curve)? else {
        return Err(Error::CurveNotInMulticurve(name));
    };
    let leaves = gs.leaves();
    let l = &leaves.leaves[leaf];
    let frame = leaf_frame(l);
    let chart = gs.crescent_chart(leaf)?;
    let at = frame
        .apply_complex(Complex64::new(1.0, 0.0))
        .to_complex()
        .expect("leaf point");
    // transversal endpoints close to the leaf, with no other leaf in between
    let mut phi = 0.05;
    let side = |phi: f64| -> Result<[Complex64; 2]> {
        let pt = |s: f64| {
            frame
                .apply_complex(Complex64::from_polar(1.0, s * phi))
                .to_complex()
                .ok_or_else(|| Error::Numeric("transversal point at infinity".into()))
        };
        Ok([pt(-1.0)?, pt(1.0)?])
    };
    let [p_r, p_l] = loop {
        let [p_r, p_l] = side(phi)?;
        let clear = leaves.crossings_excluding(p_r, at, &[leaf])?.is_empty()
            && leaves.crossings_excluding(at, p_l, &[leaf])?.is_empty();
        if clear && leaves.on_left(leaf, p_l) && !leaves.on_left(leaf, p_r) {
            break [p_r, p_l];
        }
        phi /= 2.0;
        if phi < 1e-9 {
            return Err(Error::Numeric(
                "no clear transversal beside the leaf".into(),
            ));
        }
    };
    let disk = |p: Complex64| -> Result<OrientedCircle> {
        Ok(OrientedCircle::real_line().transform(&gs.stratum_chart(p)?))
    };
    let (d_r, d_l) = (disk(p_r)?, disk(p_l)?);
    let theta = chart.theta;
    let base = ((theta / FRAC_PI_2).ceil() as usize).max(1);
    let mut trace = Vec::new();
    for level in 0..=MAX_REFINEMENTS {
        let n = base << level;
        let mut disks = Vec::with_capacity(n + 3);
        disks.push(d_r);
        disks.extend((0..=n).map(|k| chart.support_circle(theta * k as f64 / n as f64)));
        disks.push(d_l);
        let sum = angle_sum(&disks)
            .ok_or_else(|| Error::Transversality("support disks along the cylinder miss".into()))?;
        trace.push(sum);
        if level + 1 >= MIN_LEVELS && (sum - trace[level - 1]).abs() < TOL_MEASURE {
            break;
        }
    }
    Ok(RecoveredWeight {
        curve: name,
        configured: l.weight,
        recovered: *trace.last().unwrap(),
        trace,
    })
}

/// Recovers every weight of the multicurve and checks it against the
/// configuration and, when `fuchsian`, against `2 pi Z`.
pub fn verify_goldman(gs: &GraftedStructure, fuchsian: bool, tol: f64) -> Result<Report> {
    let mut report = Report::new();
    let mut values = Vec::new();
    for e in &gs.multicurve().entries {
        let r = recover_weight_from_grafted(gs, &e.word)?;
        let configured = e.weight.radians();
        let err = (r.recovered - configured).abs();
        report.check(
            &format!("weight of {} recovered", e.word),
            err < tol,
            format!("error {err:e}"),
        );
        if fuchsian {
            let defect = r.two_pi_defect();
            report.check(
                &format!("weight of {} is a 2pi multiple", e.word),
                defect < tol,
                format!("defect {defect:e}"),
            );
        }
        if err >= tol {
            report.violation(format!(
                "{}: configured {configured}, recovered {}",
                e.word, r.recovered
            ));
        }
        values.push(r);
    }
    if fuchsian {
        let h = gs.holonomy()?;
        let imag = h
            .generators
            .iter()
            .map(MoebiusMap::max_imag)
            .fold(0.0, f64::max);
        report.value("holonomy_max_imag", imag);
    }
    report.value("weights", values);
    Ok(report)
}

/// Chordal step used when checking a loop against the limit-set margin.
const MARGIN_STEP: f64 = 5e-3;

fn densify(points: &[Complex64]) -> Vec<PointCP1> {
    let n = points.len();
    let mut out = Vec::new();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        let k = ((PointCP1::finite(a).chordal_distance(PointCP1::finite(b)) / MARGIN_STEP).ceil()
            as usize)
            .max(1);
        out.extend((0..k).map(|j| PointCP1::finite(a + (b - a) * (j as f64 / k as f64))));
    }
    out
}

/// Smallest chordal distance from `p` to the sample, both on the unit sphere.
fn nearest(p: [f64; 3], sphere: &[[f64; 3]]) -> f64 {
    let d2 = sphere
        .iter()
        .map(|q| (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2))
        .fold(f64::INFINITY, f64::min);
    0.5 * d2.sqrt()
}

fn margin_on_sphere(points: &[Complex64], sphere: &[[f64; 3]]) -> f64 {
    densify(points)
        .par_iter()
        .map(|p| nearest(p.to_sphere(), sphere))
        .reduce(|| f64::INFINITY, f64::min)
}

/// Smallest chordal distance from the closed polygon to the sample points.
pub fn loop_margin(points: &[Complex64], limit: &[PointCP1]) -> f64 {
    let sphere: Vec<[f64; 3]> = limit.iter().map(|q| q.to_sphere()).collect();
    margin_on_sphere(points, &sphere)
}

/// Random small round loops (as polygons) whose spherical disks stay at
/// chordal distance at least `margin` from the sample points.
pub fn random_loops<R: Rng>(
    rng: &mut R,
    limit: &[PointCP1],
    margin: f64,
    count: usize,
    sides: usize,
) -> Vec<Vec<Complex64>> {
    let sphere: Vec<[f64; 3]> = limit.iter().map(|q| q.to_sphere()).collect();
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(0.1..=1.0).contains(&n) || v[2] / n > 0.9 {
            continue;
        }
        let c = PointCP1::from_sphere(v.map(|x| x / n));
        let d = nearest(c.to_sphere(), &sphere);
        if d < 2.0 * margin {
            continue;
        }
        let r = rng.gen_range(0.2..0.8) * (d - margin - 1e-3);
        let rho = r / (1.0 - r * r).sqrt();
        let p = c.normalized();
        // rotation of the sphere taking 0 to c
        let rot = MoebiusMap::new(p.z0, -p.z1.conj(), p.z1, p.z0.conj()).expect("unitary");
        let pts: Option<Vec<Complex64>> = (0..sides)
            .map(|k| {
                rot.apply_complex(Complex64::from_polar(rho, TAU * k as f64 / sides as f64))
                    .to_complex()
            })
            .collect();
        let Some(pts) = pts else { continue };
        if pts.iter().any(|z| z.norm() > 1e3) || margin_on_sphere(&pts, &sphere) < margin {
            continue;
        }
        out.push(pts);
    }
    out
}

/// Covering check: every loop is lifted from every starting lift near the
/// base point; null-homotopic loops must close and the local chart disks
/// must keep a positive distance from the loop.
pub fn verify_covering(
    gs: &GraftedStructure,
    loops: &[Vec<Complex64>],
    margin: f64,
    limit: &[PointCP1],
    lift_leaf_distance: f64,
    closure_tol: f64,
) -> Result<Report> {
    let sphere: Vec<[f64; 3]> = limit.iter().map(|q| q.to_sphere()).collect();
    for (i, l) in loops.iter().enumerate() {
        let m = margin_on_sphere(l, &sphere);
        if m <= margin {
            return Err(Error::Precondition(format!(
                "loop {i} comes within {m:e} of the limit set sample (margin {margin})"
            )));
        }
    }
    let starts: Vec<Vec<_>> = loops
        .iter()
        .map(|l| lifts_of(gs, l[0], lift_leaf_distance))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, crate::grafting::GraftedPoint)> = starts
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |p| (i, *p)))
        .collect();
    let lifts: Vec<(usize, LoopLift)> = jobs
        .par_iter()
        .map(|(i, s)| lift_loop(gs, s, &loops[*i]).map(|r| (*i, r)))
        .collect::<Result<_>>()?;
    let mut report = Report::new();
    let unlifted = starts.iter().filter(|s| s.is_empty()).count();
    report.check(
        "every loop has a starting lift",
        unlifted == 0,
        format!("{unlifted} loops without lifts"),
    );
    let failures: Vec<&(usize, LoopLift)> =
        lifts.iter().filter(|(_, r)| r.failure.is_some()).collect();
    for (i, r) in &failures {
        report.violation(format!(
            "loop {i} from {:?}: {}",
            r.start,
            r.failure.as_deref().unwrap_or("")
        ));
    }
    report.check(
        "every lift completed",
        failures.is_empty(),
        format!("{} of {} lifts failed", failures.len(), lifts.len()),
    );
    let open: Vec<&(usize, LoopLift)> = lifts
        .iter()
        .filter(|(_, r)| r.failure.is_none() && !(r.closing_error < closure_tol))
        .collect();
    for (i, r) in &open {
        report.violation(format!(
            "loop {i} from {:?} does not close (error {:e})",
            r.start, r.closing_error
        ));
    }
    report.check(
        "null-homotopic loops close",
        open.is_empty(),
        format!("{} open lifts", open.len()),
    );
    let radius = lifts
        .iter()
        .map(|(_, r)| r.min_embedding_radius)
        .fold(f64::INFINITY, f64::min);
    report.check(
        "embedding radius positive",
        radius > 0.0,
        format!("minimum {radius:e}"),
    );
    let closing = lifts
        .iter()
        .filter(|(_, r)| r.failure.is_none())
        .map(|(_, r)| r.closing_error)
        .fold(0.0, f64::max);
    report.value("loops", loops.len());
    report.value("lifts", lifts.len());
    report.value("limit_points", limit.len());
    report.value("margin", margin);
    report.value("max_closing_error", closing);
    report.value("min_embedding_radius", radius);
    let per_loop: Vec<f64> = (0..loops.len())
        .map(|i| {
            lifts
                .iter()
                .filter(|(j, _)| *j == i)
                .map(|(_, r)| r.min_embedding_radius)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    report.value("embedding_radius_per_loop", per_loop);
    Ok(report)
}
