//! Acceptance suite: one line per criterion with its pinned tolerance,
//! the measured residual and the runtime.

mod common;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use common::*;
use cp1graft::grafting::{
    grafted_holonomy, pleated_surface, GraftedPoint, GraftedStructure, WeightedMulticurve,
};
use cp1graft::hyperbolic::{
    dome, nearest_point_projection, rotation_about_geodesic, GeodesicH3, PointH3,
};
use cp1graft::moebius::{minimal_enclosing_disk, OrientedCircle, PointCP1};
use cp1graft::surface::{
    fuchsian_from_fn, limit_set_sample, FNCoordinates, FuchsianHolonomy, GroupWord,
};
use cp1graft::thurston::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TWO_PI_TOL: f64 = 1e-9;
const WEIGHT_TOL: f64 = 1e-6;
const DISK_TOL: f64 = 1e-8;
const MEASURE_TOL: f64 = 1e-5;
const TETRA_TOL: f64 = 1e-8;
const PLEAT_TOL: f64 = 1e-6;
const EQUIVARIANCE_TOL: f64 = 1e-7;
const CLOSURE_TOL: f64 = 1e-6;
const LOOP_MARGIN: f64 = 0.05;
const KERNEL_TOL: f64 = 1e-8;

struct Outcome {
    passed: bool,
    detail: String,
}

fn fn_instances(n: usize, seed: u64) -> Vec<FuchsianHolonomy> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let lengths = [(); 3].map(|_| rng.gen_range(0.9..2.2));
            let twists = [(); 3].map(|_| rng.gen_range(-0.8..0.8));
            fuchsian_from_fn(&FNCoordinates::new(lengths, twists).unwrap()).unwrap()
        })
        .collect()
}

fn multicurves() -> Vec<WeightedMulticurve> {
    [
        vec![("a1", "2*pi")],
        vec![("a1", "2*pi"), ("a2", "4*pi")],
        vec![("a1", "4*pi"), ("a2", "2*pi"), ("a1 b1 A1 B1", "2*pi")],
    ]
    .iter()
    .map(|m| WeightedMulticurve::parse(m).unwrap())
    .collect()
}

fn two_pi_invariance() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for rho in fn_instances(5, 101) {
        for mc in multicurves() {
            let h = grafted_holonomy(&rho, &mc, 8).unwrap();
            worst = worst.max(h.max_generator_deviation(&rho.holonomy));
            runs += 1;
        }
    }
    Outcome {
        passed: runs == 15 && worst < TWO_PI_TOL,
        detail: format!("{runs} grafts, max deviation {worst:.3e}"),
    }
}

fn goldman_recovery() -> Outcome {
    let (mut err, mut defect, mut n) = (0.0f64, 0.0f64, 0);
    let mut failures = Vec::new();
    for rho in fn_instances(3, 202) {
        let mc = multicurves().pop().unwrap();
        let words: Vec<GroupWord> = mc.entries.iter().map(|e| e.word.clone()).collect();
        let gs = GraftedStructure::new(rho, mc, 8).unwrap();
        for w in &words {
            match recover_weight_from_grafted(&gs, w) {
                Ok(r) => {
                    err = err.max((r.recovered - r.configured).abs());
                    defect = defect.max(r.two_pi_defect());
                    n += 1;
                }
                Err(e) => failures.push(format!("{w}: {e}")),
            }
        }
    }
    Outcome {
        passed: failures.is_empty() && err < WEIGHT_TOL && defect < WEIGHT_TOL,
        detail: format!(
            "{n} weights, max error {err:.3e}, max 2pi defect {defect:.3e}, failures {failures:?}"
        ),
    }
}

fn domain_samples(dom: &DiskComplementDomain, n: usize, seed: u64) -> Vec<PointCP1> {
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

fn six_points() -> DiskComplementDomain {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    DiskComplementDomain::finite(
        &(0..6)
            .map(|_| random_sphere_point(&mut rng))
            .collect::<Vec<_>>(),
    )
    .unwrap()
}

fn stratification() -> Outcome {
    let mut lines = Vec::new();
    let mut passed = true;
    for (name, dom) in [
        ("tetrahedron", DiskComplementDomain::regular_tetrahedron()),
        ("six points", six_points()),
    ] {
        let samples = domain_samples(&dom, 500, 7);
        let report = stratification_check(&dom, &samples);
        let mut worst = 0.0f64;
        let mut missing = 0;
        for x in &samples {
            match maximal_disk_at(&dom, *x) {
                Ok(rec) => {
                    let oracle =
                        oracle_maximal_disk(dom.complement_points(), x.to_complex().unwrap());
                    // distance between the Hermitian forms
                    let (a, b) = (rec.disk.boundary, oracle);
                    let d = (a.a - b.a)
                        .abs()
                        .max((a.b - b.b).norm())
                        .max((a.d - b.d).abs());
                    worst = worst.max(d);
                }
                Err(_) => missing += 1,
            }
        }
        let ok = report.passed() && missing == 0 && worst < DISK_TOL;
        passed &= ok;
        lines.push(format!(
            "{name}: {} samples, {} classes, {} core violations, oracle max {worst:.3e}",
            samples.len(),
            report.values["disk_classes"],
            report.violations.len()
        ));
    }
    Outcome {
        passed,
        detail: lines.join("; "),
    }
}

/// Exterior dihedral angles of the dome edges from the brute-force hull,
/// matched to the mesh edges by their ideal endpoints.
fn oracle_angles(mesh: &cp1graft::hyperbolic::DomeMesh) -> Vec<f64> {
    let pts: Vec<[f64; 3]> = mesh.vertices.iter().map(|v| v.to_sphere()).collect();
    let faces = brute_force_hull(&pts);
    mesh.edges
        .iter()
        .map(|e| {
            let adj: Vec<[f64; 4]> = faces
                .iter()
                .filter(|(f, _)| e.ends.iter().all(|v| f.contains(v)))
                .map(|(_, n)| *n)
                .collect();
            assert_eq!(
                adj.len(),
                2,
                "edge {:?} in {} hull faces",
                e.ends,
                adj.len()
            );
            minkowski_exterior_angle(adj[0], adj[1])
        })
        .collect()
}

fn measure_vs_dome() -> Outcome {
    let mut passed = true;
    let mut lines = Vec::new();
    for (name, dom) in [
        ("tetrahedron", DiskComplementDomain::regular_tetrahedron()),
        ("six points", six_points()),
    ] {
        let mesh = dome(dom.complement_points()).unwrap();
        let oracle = oracle_angles(&mesh);
        let (mut theta_err, mut oracle_err) = (0.0f64, 0.0f64);
        for (i, e) in mesh.edges.iter().enumerate() {
            let path = edge_crossing_path(&mesh, i, 8).unwrap();
            let m = transverse_measure(&dom, &path, MAX_REFINEMENTS).unwrap();
            passed &= m.converged;
            theta_err = theta_err.max((m.value - e.weight).abs());
            oracle_err = oracle_err.max((oracle[i] - e.weight).abs());
        }
        passed &= theta_err < MEASURE_TOL && oracle_err < TETRA_TOL;
        let mut line = format!(
            "{name}: {} edges, max |theta - angle| {theta_err:.3e}, oracle {oracle_err:.3e}",
            mesh.edges.len()
        );
        if name == "tetrahedron" {
            let w: Vec<f64> = mesh.edges.iter().map(|e| e.weight).collect();
            let spread = w.iter().cloned().fold(f64::MIN, f64::max)
                - w.iter().cloned().fold(f64::MAX, f64::min);
            let analytic = (w[0] - 2.0 * PI / 3.0).abs();
            passed &= mesh.edges.len() == 6 && spread < TETRA_TOL && analytic < TETRA_TOL;
            line += &format!(", weight spread {spread:.3e}");
        }
        lines.push(line);
    }
    Outcome {
        passed,
        detail: lines.join("; "),
    }
}

fn pleated_relation() -> Outcome {
    let rho =
        fuchsian_from_fn(&FNCoordinates::new([1.3, 1.5, 1.7], [0.2, -0.1, 0.3]).unwrap()).unwrap();
    let mc = WeightedMulticurve::parse(&[("a1", "pi/2")]).unwrap();
    // leaves must cover the generator translates of the samples too
    let gs = GraftedStructure::with_leaf_radius(rho, mc, 8, 10.0).unwrap();
    let mesh = pleated_surface(&gs, 3.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let x0 = gs.basepoint();
    let mut samples = Vec::new();
    while samples.len() < 100 {
        let p = h2_point_at(x0, rng.gen_range(0.0..2.8), rng.gen_range(0.0..TAU));
        if gs.leaves().nearest_leaf(p).is_none_or(|(_, d)| d > 1e-3) {
            samples.push(p);
        }
    }
    let mut proj = 0.0f64;
    for &p in &samples {
        let f = mesh.face_containing(p).expect("sample inside the mesh");
        let dev = gs.develop(&GraftedPoint::stratum(p)).unwrap();
        let psi = nearest_point_projection(&mesh.faces[f].plane, dev).unwrap();
        proj = proj.max(psi.distance(&mesh.image(p).unwrap()));
    }
    let base = &gs.base().holonomy;
    let deformed = gs.holonomy().unwrap();
    let mut equi = 0.0f64;
    for &p in samples.iter().take(25) {
        let beta_p: PointH3 = gs.pleat(p).unwrap();
        for (g, g2) in base.generators.iter().zip(&deformed.generators) {
            for (m, m2) in [(*g, *g2), (g.inverse(), g2.inverse())] {
                let q = m.apply_complex(p).to_complex().unwrap();
                equi = equi.max(gs.pleat(q).unwrap().distance(&beta_p.transform(&m2)));
            }
        }
    }
    let bends = mesh
        .edges
        .iter()
        .all(|e| (e.weight - FRAC_PI_2).abs() < 1e-12)
        && !mesh.edges.is_empty();
    Outcome {
        passed: bends && proj < PLEAT_TOL && equi < EQUIVARIANCE_TOL,
        detail: format!(
            "{} faces, {} bending edges, projection max {proj:.3e}, equivariance max {equi:.3e}",
            mesh.faces.len(),
            mesh.edges.len()
        ),
    }
}

fn path_lifting() -> Outcome {
    let rho =
        fuchsian_from_fn(&FNCoordinates::new([1.3, 1.5, 1.7], [0.2, -0.1, 0.3]).unwrap()).unwrap();
    let mc = WeightedMulticurve::parse(&[("a1", "2*pi"), ("a2", "4*pi")]).unwrap();
    let gs = GraftedStructure::with_leaf_radius(rho, mc, 8, 6.0).unwrap();
    let limit = limit_set_sample(gs.holonomy().unwrap(), 6);
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let loops = random_loops(&mut rng, &limit, LOOP_MARGIN, 50, 48);
    if loops.len() < 50 {
        return Outcome {
            passed: false,
            detail: format!("only {} loops respect the margin", loops.len()),
        };
    }
    match verify_covering(&gs, &loops, LOOP_MARGIN, &limit, 2.5, CLOSURE_TOL) {
        Ok(report) => Outcome {
            passed: report.passed(),
            detail: format!(
                "{} loops, {} lifts, {} violations, max closing error {:.3e}, min embedding radius {:.3e}",
                report.values["loops"],
                report.values["lifts"],
                report.violations.len(),
                report.values["max_closing_error"].as_f64().unwrap_or(f64::NAN),
                report.values["min_embedding_radius"].as_f64().unwrap_or(f64::NAN),
            ),
        },
        Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
    }
}

fn kernel_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut med = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..14);
        let pts: Vec<_> = (0..n).map(|_| random_complex(&mut rng, 3.0)).collect();
        let d = minimal_enclosing_disk(&pts).unwrap();
        let (z, r) = brute_force_med(&pts);
        med = med.max((d.center - z).norm()).max((d.radius - r).abs());
    }
    let mut transport = 0.0f64;
    for _ in 0..200 {
        let m = random_map(&mut rng);
        let [p, q, r] = [(); 3].map(|_| random_sphere_point(&mut rng));
        let Ok(circle) = OrientedCircle::through(p, q, r) else {
            continue;
        };
        let Ok(image) = OrientedCircle::through(m.apply(p), m.apply(q), m.apply(r)) else {
            continue;
        };
        let t = circle.transform(&m);
        let d = (t.a - image.a)
            .abs()
            .max((t.b - image.b).norm())
            .max((t.d - image.d).abs());
        let scale = 1.0 + t.a.abs().max(t.b.norm()).max(t.d.abs());
        transport = transport.max(d / scale);
    }
    let mut rotation = 0.0f64;
    for _ in 0..200 {
        let (a, b) = (random_sphere_point(&mut rng), random_sphere_point(&mut rng));
        let Ok(g) = GeodesicH3::new(a, b) else {
            continue;
        };
        let (s, t) = (rng.gen_range(-TAU..TAU), rng.gen_range(-TAU..TAU));
        let lhs = rotation_about_geodesic(&g, s) * rotation_about_geodesic(&g, t);
        rotation = rotation.max(lhs.projective_distance(&rotation_about_geodesic(&g, s + t)));
    }
    Outcome {
        passed: med < KERNEL_TOL && transport < KERNEL_TOL && rotation < KERNEL_TOL,
        detail: format!(
            "med {med:.3e}, circle transport {transport:.3e}, rotation law {rotation:.3e}"
        ),
    }
}

/// Name, pinned tolerance, runtime limit and the check itself.
type Criterion = (&'static str, String, Duration, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        (
            "1 two-pi invariance",
            format!("deviation < {TWO_PI_TOL:e}"),
            Duration::from_secs(30),
            two_pi_invariance,
        ),
        (
            "2 goldman recovery",
            format!("weight and 2pi defect < {WEIGHT_TOL:e}"),
            Duration::from_secs(60),
            goldman_recovery,
        ),
        (
            "3 stratification",
            format!("oracle disks < {DISK_TOL:e}, 500 samples"),
            Duration::from_secs(30),
            stratification,
        ),
        (
            "4 transverse measure vs dome",
            format!("theta < {MEASURE_TOL:e}, tetrahedron spread < {TETRA_TOL:e}"),
            Duration::from_secs(30),
            measure_vs_dome,
        ),
        (
            "5 pleated relation",
            format!("projection < {PLEAT_TOL:e}, equivariance < {EQUIVARIANCE_TOL:e}"),
            Duration::from_secs(60),
            pleated_relation,
        ),
        (
            "6 path lifting",
            format!("closure < {CLOSURE_TOL:e}, margin {LOOP_MARGIN}"),
            Duration::from_secs(60),
            path_lifting,
        ),
        (
            "7 kernel oracles",
            format!("residuals < {KERNEL_TOL:e}"),
            Duration::from_secs(10),
            kernel_oracles,
        ),
    ];
    let mut all = true;
    for (name, tol, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.passed && took < limit;
        all &= ok;
        println!(
            "{} criterion {name} [{tol}; runtime {:.2}s < {}s]: {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
    }
    assert!(all, "acceptance criteria failed");
}
