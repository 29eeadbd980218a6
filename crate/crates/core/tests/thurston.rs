mod common;

use std::f64::consts::PI;

use common::{c, oracle_maximal_disk, random_sphere_point};
use cp1graft::error::Error;
use cp1graft::hyperbolic::{dome, PointH3};
use cp1graft::moebius::{OrientedCircle, PointCP1};
use cp1graft::thurston::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zero_one_inf() -> DiskComplementDomain {
    DiskComplementDomain::finite(&[PointCP1::real(0.0), PointCP1::real(1.0), PointCP1::INFINITY])
        .unwrap()
}

fn samples(dom: &DiskComplementDomain, n: usize, seed: u64) -> Vec<PointCP1> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let x = random_sphere_point(&mut rng);
        let far = dom
            .complement_points()
            .iter()
            .all(|p| p.chordal_distance(x) > 1e-3);
        if far && dom.contains(x) && x.to_complex().is_some() {
            out.push(x);
        }
    }
    out
}

#[test]
fn three_points_give_half_planes_over_ideal_triangles() {
    let dom = zero_one_inf();
    let up = maximal_disk_at(&dom, c(0.5, 1.0).into()).unwrap();
    assert!(up
        .disk
        .boundary
        .approx_eq(&OrientedCircle::real_line(), 1e-12));
    assert_eq!(up.ideal_points.len(), 3);
    assert_eq!(up.core.len(), 3);
    let down = maximal_disk_at(&dom, c(0.5, -0.9).into()).unwrap();
    assert!(down
        .disk
        .boundary
        .approx_eq(&OrientedCircle::real_line().flipped(), 1e-12));
    // below the segment [0, 1] but outside the lower ideal triangle: a lune point
    let lune = maximal_disk_at(&dom, c(0.5, -0.1).into()).unwrap();
    assert_eq!(lune.ideal_points.len(), 2);
    assert!(lune.core_contains_point);
}

#[test]
fn sampled_real_line_gives_upper_half_plane() {
    let pts: Vec<PointCP1> = (-50..=50)
        .map(|k| PointCP1::real((k as f64 * 0.03).tan()))
        .chain([PointCP1::INFINITY])
        .collect();
    let dom = DiskComplementDomain::finite(&pts).unwrap();
    let rec = maximal_disk_at(&dom, c(0.0, 1.0).into()).unwrap();
    assert!(rec
        .disk
        .boundary
        .approx_eq(&OrientedCircle::real_line(), 1e-9));
    assert!(rec.ideal_points.len() > 50);
    for (a, b) in [(0.01, 0.3), (0.02, 2.0), (-0.01, 0.7)] {
        let psi = projection_psi(&dom, c(a, b).into()).unwrap();
        assert!(
            (psi.z - c(a, 0.0)).norm() < 1e-9 && (psi.t - b).abs() < 1e-9,
            "{psi:?}"
        );
    }
}

#[test]
fn rejects_degenerate_queries() {
    let dom = zero_one_inf();
    assert!(matches!(
        maximal_disk_at(&dom, c(1e-9, 0.0).into()),
        Err(Error::TooCloseToComplement(_))
    ));
    assert!(matches!(
        DiskComplementDomain::finite(&[PointCP1::real(2.0)]),
        Err(Error::Domain(_))
    ));
    let square =
        DiskComplementDomain::polygon(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)], 16)
            .unwrap();
    assert!(maximal_disk_at(&square, c(0.5, 0.5).into()).is_err());
}

#[test]
fn maximal_disks_match_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let pts: Vec<PointCP1> = (0..6).map(|_| random_sphere_point(&mut rng)).collect();
    let dom = DiskComplementDomain::finite(&pts).unwrap();
    for x in samples(&dom, 100, 3) {
        let rec = maximal_disk_at(&dom, x).unwrap();
        let oracle = oracle_maximal_disk(&pts, x.to_complex().unwrap());
        assert!(rec.disk.boundary.approx_eq(&oracle, 1e-8), "{x:?}");
        for p in &rec.ideal_points {
            assert!(rec.disk.boundary.chordal_distance_to(*p) < 1e-7);
        }
        assert!(rec.ideal_points.len() >= 2 && !rec.core.is_empty());
    }
}

#[test]
fn three_point_stratification_has_no_violations() {
    let dom = zero_one_inf();
    let report = stratification_check(&dom, &samples(&dom, 300, 5));
    assert!(report.passed(), "{:?}", report.violations);
}

#[test]
fn tetrahedron_strata_match_dome_faces() {
    let dom = DiskComplementDomain::regular_tetrahedron();
    let mesh = dome(dom.complement_points()).unwrap();
    assert_eq!(mesh.faces.len(), 4);
    let mut seen = [false; 4];
    for x in samples(&dom, 400, 11) {
        let rec = maximal_disk_at(&dom, x).unwrap();
        if rec.ideal_points.len() == 3 {
            let f = (0..4).find(|&f| mesh.face_circle(f).approx_eq(&rec.disk.boundary, 1e-9));
            seen[f.expect("face disk")] = true;
        } else {
            assert_eq!(rec.ideal_points.len(), 2);
        }
    }
    assert_eq!(seen, [true; 4]);
    let centers: Vec<PointCP1> = (0..4).map(|f| face_center(&mesh, f).unwrap()).collect();
    let report = stratification_check(&dom, &centers);
    assert!(report.passed());
    assert_eq!(report.values["disk_classes"], 4);
}

#[test]
fn psi_lands_on_the_dome() {
    let dom = DiskComplementDomain::regular_tetrahedron();
    let mesh = dome(dom.complement_points()).unwrap();
    for x in samples(&dom, 50, 23) {
        let psi: PointH3 = projection_psi(&dom, x).unwrap();
        assert!(mesh.distance_to(&psi) < 1e-6, "{x:?}");
    }
}

#[test]
fn measure_across_edges_matches_dihedral_angles() {
    for dom in [DiskComplementDomain::regular_tetrahedron(), {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        DiskComplementDomain::finite(
            &(0..6)
                .map(|_| random_sphere_point(&mut rng))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }] {
        let mesh = dome(dom.complement_points()).unwrap();
        for (i, e) in mesh.edges.iter().enumerate() {
            let path = edge_crossing_path(&mesh, i, 8).unwrap();
            let m = transverse_measure(&dom, &path, MAX_REFINEMENTS).unwrap();
            assert!(m.converged);
            assert!(
                (m.value - e.weight).abs() < 1e-5,
                "edge {i}: {} vs {}",
                m.value,
                e.weight
            );
        }
    }
}

#[test]
fn refinement_converges_monotonically() {
    let dom = DiskComplementDomain::regular_tetrahedron();
    let mesh = dome(dom.complement_points()).unwrap();
    for i in 0..mesh.edges.len() {
        let path = edge_crossing_path(&mesh, i, 8).unwrap();
        let m = transverse_measure(&dom, &path, MAX_REFINEMENTS).unwrap();
        let levels: Vec<f64> = m.trace.iter().flatten().copied().collect();
        assert!(levels.len() >= 4, "edge {i}: {:?}", m.trace);
        let steps: Vec<f64> = levels.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in steps[steps.len() - 3..].windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "edge {i}: {steps:?}");
        }
    }
}

#[test]
fn measure_inside_one_stratum_vanishes() {
    let dom = zero_one_inf();
    let path = [c(0.3, 1.0), c(0.6, 2.0), c(0.5, 0.9)].map(PointCP1::from);
    let m = transverse_measure(&dom, &path, 8).unwrap();
    assert!(m.value.abs() < 1e-12);
}

#[test]
fn measure_is_additive_over_two_edges() {
    let dom = DiskComplementDomain::regular_tetrahedron();
    let mesh = dome(dom.complement_points()).unwrap();
    let (e1, e2) = (0..mesh.edges.len())
        .flat_map(|i| (0..mesh.edges.len()).map(move |j| (i, j)))
        .find(|&(i, j)| mesh.edges[i].faces[1] == mesh.edges[j].faces[0])
        .expect("consecutive edges");
    let mut path = edge_crossing_path(&mesh, e1, 8).unwrap();
    path.extend(edge_crossing_path(&mesh, e2, 8).unwrap());
    let m = transverse_measure(&dom, &path, MAX_REFINEMENTS).unwrap();
    let expect = mesh.edges[e1].weight + mesh.edges[e2].weight;
    assert!((m.value - expect).abs() < 1e-5, "{} vs {expect}", m.value);
}

#[test]
fn tetrahedron_edges_bend_equally() {
    let mesh = dome(DiskComplementDomain::regular_tetrahedron().complement_points()).unwrap();
    // exterior angle of the regular ideal tetrahedron: pi minus pi / 3
    for e in &mesh.edges {
        assert!((e.weight - 2.0 * PI / 3.0).abs() < 1e-8);
    }
}

#[test]
fn polygon_domain_is_stratified() {
    let dom =
        DiskComplementDomain::polygon(&[c(0.0, 0.0), c(2.0, 0.0), c(2.5, 1.0), c(0.5, 1.5)], 32)
            .unwrap();
    let report = stratification_check(&dom, &samples(&dom, 300, 31));
    assert!(report.passed(), "{:?}", report.violations);
}

#[test]
fn overlapping_cores_are_detected() {
    let a = zero_one_inf();
    let b =
        DiskComplementDomain::finite(&[c(0.0, 0.0), c(1.0, 0.0), c(0.3, 5.0)].map(PointCP1::from))
            .unwrap();
    let x: PointCP1 = c(0.5, 1.5).into();
    let (ra, rb) = (
        maximal_disk_at(&a, x).unwrap(),
        maximal_disk_at(&b, x).unwrap(),
    );
    assert!(ra.core_contains_point && rb.core_contains_point);
    assert!(
        !ra.disk.boundary.approx_eq(&rb.disk.boundary, 1e-6),
        "{:?} {:?}",
        ra.disk,
        rb.disk
    );
    assert!(!cores_disjoint(&ra, &rb));
    let far = maximal_disk_at(&a, c(0.5, -2.0).into()).unwrap();
    assert!(cores_disjoint(&ra, &far));
}
