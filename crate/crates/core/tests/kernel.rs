mod common;

use common::{brute_force_med, c};
use cp1graft::hyperbolic::{
    dome, nearest_point_projection, rotation_about_geodesic, GeodesicH3, PlaneH3,
};
use cp1graft::moebius::{
    cross_ratio, minimal_enclosing_disk, MoebiusMap, OrientedCircle, PointCP1,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| c(a, b))
}

fn map() -> impl Strategy<Value = MoebiusMap> {
    [complex(2.0), complex(2.0), complex(2.0), complex(2.0)]
        .prop_filter("non-degenerate", |[a, b, cc, d]| {
            (a * d - b * cc).norm() > 0.2
        })
        .prop_map(|[a, b, cc, d]| MoebiusMap::new(a, b, cc, d).unwrap())
}

/// Point on the sphere from spherical angles, so that infinity and its
/// neighbourhood are sampled too.
fn point() -> impl Strategy<Value = PointCP1> {
    (-1.0f64..1.0, 0.0..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        PointCP1::from_sphere([r * phi.cos(), r * phi.sin(), z])
    })
}

fn distinct(points: &[PointCP1], gap: f64) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, p)| points[i + 1..].iter().all(|q| p.chordal_distance(*q) > gap))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sign_quotient(m in map(), p in point()) {
        let neg = MoebiusMap::new(-m.a, -m.b, -m.c, -m.d).unwrap();
        prop_assert!(m.apply(p).chordal_distance(neg.apply(p)) < 1e-12);
        prop_assert!(m.projective_distance(&neg) < 1e-12);
    }

    #[test]
    fn inverse_undoes_apply(m in map(), p in point()) {
        prop_assert!(m.inverse().apply(m.apply(p)).chordal_distance(p) < 1e-10);
    }

    #[test]
    fn cross_ratio_is_invariant(m in map(), pts in [point(), point(), point(), point()]) {
        prop_assume!(distinct(&pts, 0.05));
        let before = cross_ratio(pts[0], pts[1], pts[2], pts[3]);
        let image = pts.map(|p| m.apply(p));
        let after = cross_ratio(image[0], image[1], image[2], image[3]);
        prop_assert!((before - after).norm() < 1e-10 * (1.0 + before.norm()), "{before} {after}");
    }

    #[test]
    fn circle_transport_is_natural(m in map(), pts in [point(), point(), point()]) {
        prop_assume!(distinct(&pts, 0.05));
        let circle = OrientedCircle::through(pts[0], pts[1], pts[2]).unwrap();
        let image = OrientedCircle::through(m.apply(pts[0]), m.apply(pts[1]), m.apply(pts[2])).unwrap();
        prop_assert!(circle.transform(&m).approx_eq(&image, 1e-9));
    }

    #[test]
    fn angles_are_moebius_invariant(m in map(), p in [point(), point(), point()], q in [point(), point(), point()]) {
        prop_assume!(distinct(&p, 0.05) && distinct(&q, 0.05));
        let (c1, c2) = (OrientedCircle::through(p[0], p[1], p[2]).unwrap(), OrientedCircle::through(q[0], q[1], q[2]).unwrap());
        let Ok(before) = c1.angle_between(&c2) else { return Ok(()) };
        prop_assume!(before > 1e-3 && before < std::f64::consts::PI - 1e-3);
        let after = c1.transform(&m).angle_between(&c2.transform(&m)).unwrap();
        prop_assert!((before - after).abs() < 1e-7, "{before} {after}");
    }

    #[test]
    fn enclosing_disk_matches_brute_force(pts in prop::collection::vec(complex(5.0), 10)) {
        let d = minimal_enclosing_disk(&pts).unwrap();
        let (z, r) = brute_force_med(&pts);
        prop_assert!((d.radius - r).abs() < 1e-9, "{} {r}", d.radius);
        prop_assert!((d.center - z).norm() < 1e-8);
    }

    #[test]
    fn rotations_compose(a in point(), b in point(), s in -7.0f64..7.0, t in -7.0f64..7.0) {
        prop_assume!(a.chordal_distance(b) > 0.05);
        let g = GeodesicH3::new(a, b).unwrap();
        let lhs = rotation_about_geodesic(&g, s) * rotation_about_geodesic(&g, t);
        prop_assert!(lhs.projective_distance(&rotation_about_geodesic(&g, s + t)) < 1e-10);
    }

    #[test]
    fn projection_lies_on_the_plane(pts in [point(), point(), point()], x in point()) {
        prop_assume!(distinct(&pts, 0.05));
        let plane = PlaneH3::new(OrientedCircle::through(pts[0], pts[1], pts[2]).unwrap());
        prop_assume!(plane.boundary.signed_depth(x) > 1e-3);
        let psi = nearest_point_projection(&plane, x).unwrap();
        prop_assert!(plane.residual(&psi).abs() < 1e-7, "{}", plane.residual(&psi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dome_invariants(pts in prop::collection::vec(point(), 5..9), m in map()) {
        prop_assume!(distinct(&pts, 0.1));
        let mesh = dome(&pts).unwrap();
        for (f, face) in mesh.faces.iter().enumerate() {
            for &v in &face.vertices {
                prop_assert!(mesh.face_circle(f).chordal_distance_to(mesh.vertices[v]) < 1e-7);
            }
        }
        prop_assert_eq!(mesh.euler_characteristic(), 2);
        // weights follow the vertices under a Moebius map
        let moved = mesh.transform(&m).unwrap();
        let index = |p: PointCP1| (0..moved.vertices.len()).find(|&k| moved.vertices[k].chordal_distance(m.apply(p)) < 1e-8);
        for e in &mesh.edges {
            let ends = [index(mesh.vertices[e.ends[0]]).unwrap(), index(mesh.vertices[e.ends[1]]).unwrap()];
            let other = moved
                .edges
                .iter()
                .find(|o| (o.ends == ends) || (o.ends == [ends[1], ends[0]]))
                .expect("corresponding edge");
            prop_assert!((other.weight - e.weight).abs() < 1e-7, "{} {}", other.weight, e.weight);
        }
    }
}
