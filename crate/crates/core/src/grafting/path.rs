use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::leaves::h2_distance;
use super::structure::{leaf_frame, GraftedPoint, GraftedStructure};
use crate::error::{Error, Result};
use crate::hyperbolic::rotation_about_geodesic;
use crate::moebius::{MoebiusMap, OrientedCircle, PointCP1};

/// Largest chordal step taken when following a loop in CP^1.
const MAX_STEP: f64 = 2e-3;
const MAX_TRANSITIONS: usize = 16;

/// Result of developing a path of the grafted surface by analytic continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct PathDevelopment {
    pub points: Vec<PointCP1>,
    /// Largest chordal gap between the continued and the directly developed vertex.
    pub max_gap: f64,
    pub success: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy)]
enum Chart {
    Stratum(MoebiusMap),
    /// Chart of the stratum on the right of the leaf.
    Crescent {
        leaf: usize,
        right: MoebiusMap,
    },
}

fn rot(gs: &GraftedStructure, leaf: usize, sign: f64) -> MoebiusMap {
    let l = &gs.leaves().leaves[leaf];
    rotation_about_geodesic(&l.geodesic, sign * l.weight)
}

fn leg(
    gs: &GraftedStructure,
    chart: Chart,
    from: &GraftedPoint,
    to: &GraftedPoint,
) -> Result<Chart> {
    let leaves = gs.leaves();
    let bend = |p, q, skip: &[usize]| -> Result<MoebiusMap> {
        Ok(leaves.bending(p, q, skip)?.unwrap_or(MoebiusMap::IDENTITY))
    };
    // leave the current crescent towards `target`, returning the chart of the
    // stratum entered, the exit point and the leaf to skip
    let exit = |target: Complex64| -> Result<(MoebiusMap, Complex64, Vec<usize>)> {
        match (chart, *from) {
            (Chart::Stratum(m), GraftedPoint::Stratum { re, im }) => {
                Ok((m, Complex64::new(re, im), vec![]))
            }
            (Chart::Crescent { leaf, right }, GraftedPoint::Crescent { x, .. }) => {
                let m = if leaves.on_left(leaf, target) {
                    right * rot(gs, leaf, 1.0)
                } else {
                    right
                };
                Ok((m, gs.leaf_point(leaf, x)?, vec![leaf]))
            }
            _ => Err(Error::Domain("path vertex does not match its chart".into())),
        }
    };
    match *to {
        GraftedPoint::Stratum { re, im } => {
            let q = Complex64::new(re, im);
            let (m, p, skip) = exit(q)?;
            Ok(Chart::Stratum(m * bend(p, q, &skip)?))
        }
        GraftedPoint::Crescent { leaf, x, .. } => {
            if matches!(chart, Chart::Crescent { leaf: l0, .. } if l0 == leaf) {
                return Ok(chart);
            }
            let target = gs.leaf_point(leaf, x)?;
            let (m, p, mut skip) = exit(target)?;
            skip.push(leaf);
            let m = m * bend(p, target, &skip)?;
            let right = if leaves.on_left(leaf, p) {
                m * rot(gs, leaf, -1.0)
            } else {
                m
            };
            Ok(Chart::Crescent { leaf, right })
        }
    }
}

fn develop_in(gs: &GraftedStructure, chart: Chart, pt: &GraftedPoint) -> Result<PointCP1> {
    match (chart, *pt) {
        (Chart::Stratum(m), GraftedPoint::Stratum { re, im }) => {
            Ok(m.apply_complex(Complex64::new(re, im)))
        }
        (Chart::Crescent { leaf, right }, GraftedPoint::Crescent { x, y, .. }) => {
            let theta = gs.leaves().leaves[leaf].weight;
            let p = super::structure::crescent_develop(theta, x, y)?;
            Ok((right * leaf_frame(&gs.leaves().leaves[leaf])).apply(p))
        }
        _ => Err(Error::Domain("path vertex does not match its chart".into())),
    }
}

/// Develops a path of the grafted surface given by its vertices.
///
/// Consecutive stratum vertices are joined by geodesic segments of the
/// hyperbolic surface that traverse every crescent they meet; a crescent
/// vertex is reached through the leaf point at its `x` parameter. The chart
/// is continued leaf by leaf along the path; a crescent vertex with `y`
/// outside `[0, weight]` is reported as a lift failure.
pub fn develop_path(gs: &GraftedStructure, vertices: &[GraftedPoint]) -> Result<PathDevelopment> {
    let first = vertices.first().ok_or(Error::Empty("path"))?;
    let mut chart = match *first {
        GraftedPoint::Stratum { re, im } => {
            Chart::Stratum(gs.stratum_chart(Complex64::new(re, im))?)
        }
        GraftedPoint::Crescent { leaf, .. } => Chart::Crescent {
            leaf,
            right: gs.crescent_chart(leaf)?.right,
        },
    };
    let mut out = PathDevelopment {
        points: Vec::new(),
        max_gap: 0.0,
        success: true,
        failure: None,
    };
    for (i, v) in vertices.iter().enumerate() {
        if i > 0 {
            chart = leg(gs, chart, &vertices[i - 1], v)?;
        }
        match develop_in(gs, chart, v) {
            Ok(p) => {
                let direct = gs.develop(v)?;
                out.max_gap = out.max_gap.max(p.chordal_distance(direct));
                out.points.push(p);
            }
            Err(e @ Error::OutOfChart { .. }) => {
                out.success = false;
                out.failure = Some(format!("vertex {i}: {e}"));
                return Ok(out);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Outcome of lifting a closed loop of CP^1 through the developing map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopLift {
    pub start: GraftedPoint,
    pub end: GraftedPoint,
    pub closed: bool,
    pub closing_error: f64,
    pub failure: Option<String>,
    /// Smallest chordal distance from the loop to the boundary of the local
    /// chart disk along the lift.
    pub min_embedding_radius: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy)]
enum Lift {
    Stratum {
        m: MoebiusMap,
        inv: MoebiusMap,
        p: Complex64,
        on_leaf: Option<usize>,
    },
    Crescent {
        leaf: usize,
        right: MoebiusMap,
        inv: MoebiusMap,
        map: MoebiusMap,
        w: Complex64,
    },
}

impl Lift {
    fn point(&self) -> GraftedPoint {
        match *self {
            Lift::Stratum { p, .. } => GraftedPoint::stratum(p),
            Lift::Crescent { leaf, w, .. } => GraftedPoint::Crescent {
                leaf,
                x: w.re,
                y: w.im,
            },
        }
    }

    fn stratum(m: MoebiusMap, p: Complex64, on_leaf: Option<usize>) -> Lift {
        Lift::Stratum {
            m,
            inv: m.inverse(),
            p,
            on_leaf,
        }
    }

    fn crescent(gs: &GraftedStructure, leaf: usize, right: MoebiusMap, w: Complex64) -> Lift {
        let map = right * leaf_frame(&gs.leaves().leaves[leaf]);
        Lift::Crescent {
            leaf,
            right,
            inv: map.inverse(),
            map,
            w,
        }
    }
}

fn lift_of(gs: &GraftedStructure, pt: &GraftedPoint) -> Result<Lift> {
    Ok(match *pt {
        GraftedPoint::Stratum { re, im } => {
            let p = Complex64::new(re, im);
            Lift::stratum(gs.stratum_chart(p)?, p, None)
        }
        GraftedPoint::Crescent { leaf, x, y } => {
            let c = gs.crescent_chart(leaf)?;
            if !(0.0..=c.theta).contains(&y) {
                return Err(Error::OutOfChart { y, theta: c.theta });
            }
            Lift::crescent(gs, leaf, c.right, Complex64::new(x, y))
        }
    })
}

/// Moves the lift so that it develops to `z`, switching charts at leaves.
fn advance(gs: &GraftedStructure, lift: Lift, z: PointCP1) -> std::result::Result<Lift, String> {
    let leaves = gs.leaves();
    let mut lift = lift;
    for _ in 0..MAX_TRANSITIONS {
        match lift {
            Lift::Stratum { m, inv, p, on_leaf } => {
                let q = inv.apply(z).to_complex().ok_or("lift reached infinity")?;
                if !(q.im > 0.0) {
                    return Err(format!("lift left the hyperbolic plane at {q}"));
                }
                if h2_distance(gs.basepoint(), q) > leaves.radius - 0.25 {
                    return Err("lift left the region of lifted leaves".into());
                }
                let skip: Vec<usize> = on_leaf.into_iter().collect();
                let crossings = leaves
                    .crossings_excluding(p, q, &skip)
                    .map_err(|e| e.to_string())?;
                let hit = crossings
                    .iter()
                    .find(|c| leaves.leaves[c.leaf].weight > 0.0);
                let Some(c) = hit else {
                    lift = Lift::stratum(m, q, None);
                    return Ok(lift);
                };
                let leaf = c.leaf;
                let theta = leaves.leaves[leaf].weight;
                let kp = leaves.chart.klein(p);
                let kq = leaves.chart.klein(q);
                let at = leaves.chart.from_klein(kp + (kq - kp) * c.t);
                let frame = leaf_frame(&leaves.leaves[leaf]);
                let x = frame
                    .inverse()
                    .apply_complex(at)
                    .to_complex()
                    .ok_or("bad leaf point")?
                    .norm()
                    .ln();
                // a positive crossing goes from the right side (y = 0) to the left (y = theta)
                let (right, y) = if c.sign > 0 {
                    (m, 0.0)
                } else {
                    (m * rot(gs, leaf, -1.0), theta)
                };
                lift = Lift::crescent(gs, leaf, right, Complex64::new(x, y));
            }
            Lift::Crescent {
                leaf,
                right,
                inv,
                w,
                ..
            } => {
                let u = inv
                    .apply(z)
                    .to_complex()
                    .ok_or("lift reached a leaf endpoint")?;
                if u.norm() == 0.0 {
                    return Err("lift reached a leaf endpoint".into());
                }
                let lw = u.ln();
                let k = ((w.im - lw.im) / (2.0 * PI)).round();
                let wn = Complex64::new(lw.re, lw.im + 2.0 * PI * k);
                let theta = leaves.leaves[leaf].weight;
                if wn.im >= 0.0 && wn.im <= theta {
                    return Ok(Lift::crescent(gs, leaf, right, wn));
                }
                let m = if wn.im < 0.0 {
                    right
                } else {
                    right * rot(gs, leaf, 1.0)
                };
                let exit = gs.leaf_point(leaf, wn.re).map_err(|e| e.to_string())?;
                lift = Lift::stratum(m, exit, Some(leaf));
            }
        }
    }
    Err("too many chart transitions in one step".into())
}

fn embedding_radius(lift: &Lift, z: PointCP1) -> f64 {
    match *lift {
        Lift::Stratum { m, .. } => OrientedCircle::real_line()
            .transform(&m)
            .chordal_distance_to(z),
        Lift::Crescent { map, w, .. } => {
            let dir = Complex64::from_polar(1.0, w.im);
            OrientedCircle::through(
                PointCP1::finite(Complex64::new(0.0, 0.0)),
                PointCP1::finite(dir * Complex64::new(0.0, -1.0)),
                PointCP1::INFINITY,
            )
            .map(|c| c.transform(&map).chordal_distance_to(z))
            .unwrap_or(0.0)
        }
    }
}

fn point_distance(a: &GraftedPoint, b: &GraftedPoint) -> f64 {
    match (*a, *b) {
        (GraftedPoint::Stratum { re: a0, im: a1 }, GraftedPoint::Stratum { re: b0, im: b1 }) => {
            (Complex64::new(a0, a1) - Complex64::new(b0, b1)).norm()
        }
        (
            GraftedPoint::Crescent {
                leaf: l0,
                x: x0,
                y: y0,
            },
            GraftedPoint::Crescent {
                leaf: l1,
                x: x1,
                y: y1,
            },
        ) if l0 == l1 => (x0 - x1).abs().max((y0 - y1).abs()),
        _ => f64::INFINITY,
    }
}

/// Lifts the closed polygonal loop `points` of CP^1 (last vertex joined to the
/// first) through the developing map, starting at `start`, which must develop
/// to the first vertex.
pub fn lift_loop(
    gs: &GraftedStructure,
    start: &GraftedPoint,
    points: &[Complex64],
) -> Result<LoopLift> {
    let z0 = *points.first().ok_or(Error::Empty("loop"))?;
    let dev = gs.develop(start)?;
    if dev.chordal_distance(PointCP1::finite(z0)) > 1e-9 {
        return Err(Error::Precondition(
            "start does not develop to the first loop vertex".into(),
        ));
    }
    let mut lift = lift_of(gs, start)?;
    let mut out = LoopLift {
        start: *start,
        end: *start,
        closed: false,
        closing_error: f64::INFINITY,
        failure: None,
        min_embedding_radius: embedding_radius(&lift, PointCP1::finite(z0)),
        steps: 0,
    };
    let n = points.len();
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        let (pa, pb) = (PointCP1::finite(a), PointCP1::finite(b));
        let k = ((pa.chordal_distance(pb) / MAX_STEP).ceil() as usize).max(1);
        for j in 1..=k {
            let z = PointCP1::finite(a + (b - a) * (j as f64 / k as f64));
            match advance(gs, lift, z) {
                Ok(l) => lift = l,
                Err(msg) => {
                    out.failure = Some(msg);
                    out.end = lift.point();
                    return Ok(out);
                }
            }
            out.steps += 1;
            out.min_embedding_radius = out.min_embedding_radius.min(embedding_radius(&lift, z));
        }
    }
    out.end = lift.point();
    out.closing_error = point_distance(&out.start, &out.end);
    out.closed = out.closing_error < 1e-6;
    Ok(out)
}

/// Points of the grafted surface developing to `z`: the stratum point when
/// the stratum chart is the identity there, and one crescent point per full
/// turn in each crescent of a leaf within `leaf_distance` of the base point.
pub fn lifts_of(
    gs: &GraftedStructure,
    z: Complex64,
    leaf_distance: f64,
) -> Result<Vec<GraftedPoint>> {
    let mut out = Vec::new();
    let target = PointCP1::finite(z);
    if z.im > 0.0 {
        let p = GraftedPoint::stratum(z);
        if let Ok(d) = gs.develop(&p) {
            if d.chordal_distance(target) < 1e-10 {
                out.push(p);
            }
        }
    }
    for (i, leaf) in gs.leaves().leaves.iter().enumerate() {
        if leaf.weight <= 0.0 || leaf.distance_from_center() > leaf_distance {
            continue;
        }
        let chart = gs.crescent_chart(i)?;
        let Some(u) = chart.map.inverse().apply(target).to_complex() else {
            continue;
        };
        if u.norm() == 0.0 {
            continue;
        }
        let lw = u.ln();
        let base = lw.im.rem_euclid(2.0 * PI);
        let mut y = base;
        while y < chart.theta {
            if y > 1e-9 && y < chart.theta - 1e-9 {
                out.push(GraftedPoint::Crescent {
                    leaf: i,
                    x: lw.re,
                    y,
                });
            }
            y += 2.0 * PI;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grafting::WeightedMulticurve;
    use crate::surface::{fuchsian_from_fn, FNCoordinates};

    fn gs(weight: &str) -> GraftedStructure {
        let base =
            fuchsian_from_fn(&FNCoordinates::new([1.3, 1.5, 1.7], [0.2, -0.1, 0.3]).unwrap())
                .unwrap();
        let mc = WeightedMulticurve::parse(&[("a1", weight)]).unwrap();
        GraftedStructure::with_leaf_radius(base, mc, 8, 5.0).unwrap()
    }

    fn square(c: Complex64, h: f64) -> Vec<Complex64> {
        [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
            .iter()
            .map(|&(a, b)| c + Complex64::new(a * h, b * h))
            .collect()
    }

    #[test]
    fn constant_path_is_trivial() {
        let g = gs("0.8");
        let p = GraftedPoint::stratum(g.basepoint());
        let d = develop_path(&g, &[p, p]).unwrap();
        assert!(d.success);
        assert!(d.points[0].chordal_distance(d.points[1]) < 1e-15);
    }

    #[test]
    fn closed_paths_return() {
        let g = gs("0.8");
        let x0 = g.basepoint();
        let pts: Vec<GraftedPoint> = [x0, x0 + 1.7, x0 + Complex64::new(1.0, 2.0), x0 - 1.4, x0]
            .into_iter()
            .map(GraftedPoint::stratum)
            .collect();
        let d = develop_path(&g, &pts).unwrap();
        assert!(d.success);
        assert!(d.points[0].chordal_distance(*d.points.last().unwrap()) < 1e-9);
        assert!(d.max_gap < 1e-9, "{}", d.max_gap);
    }

    #[test]
    fn crescent_vertex_outside_chart_fails() {
        let g = gs("0.8");
        let x0 = g.basepoint();
        let bad = GraftedPoint::Crescent {
            leaf: 0,
            x: 0.0,
            y: 1.0,
        };
        let d = develop_path(&g, &[GraftedPoint::stratum(x0), bad]).unwrap();
        assert!(!d.success);
    }

    #[test]
    fn loops_in_two_pi_structure_close() {
        let g = gs("2*pi");
        for c in [Complex64::new(0.1, 1.3), Complex64::new(0.4, -0.9)] {
            let lifts = lifts_of(&g, square(c, 0.15)[0], 3.0).unwrap();
            assert!(!lifts.is_empty());
            for s in &lifts {
                let r = lift_loop(&g, s, &square(c, 0.15)).unwrap();
                assert!(r.failure.is_none(), "{:?}", r.failure);
                assert!(r.closed, "{}", r.closing_error);
                assert!(r.min_embedding_radius > 0.0);
            }
        }
    }
}
