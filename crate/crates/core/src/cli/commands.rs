use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{random_sphere_point, RunConfig};
use super::output::{
    complex_pair, generator_name, holonomy_csv, matrix, points_csv, to_json, write_atomic, MeshJson,
};
use crate::error::{Error, Result};
use crate::grafting::{pleated_surface, CurveEntry, GraftedStructure};
use crate::hyperbolic::dome;
use crate::moebius::PointCP1;
use crate::surface::{limit_set_sample, Holonomy};
use crate::thurston::{
    edge_crossing_path, random_loops, stratification_check, transverse_measure, verify_covering,
    verify_goldman, DiskComplementDomain, Report, MAX_REFINEMENTS,
};

/// Checks run by `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    TwoPi,
    Goldman,
    Stratification,
    Covering,
    DomeMeasure,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::TwoPi => "two-pi",
            Check::Goldman => "goldman",
            Check::Stratification => "stratification",
            Check::Covering => "covering",
            Check::DomeMeasure => "dome-measure",
        }
    }
}

/// Targets of `export`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Pleat,
    Dome,
    Limitset,
    Holonomy,
}

/// Files written by a command and whether its checks passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub passed: bool,
}

/// Process exit code for an error: 2 for invalid input or a violated
/// precondition, 3 for numerical failure.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Precondition(_)
        | Error::InvalidCoordinates(_)
        | Error::InvalidWord(_)
        | Error::InvalidMulticurve(_)
        | Error::Domain(_)
        | Error::CurveNotInMulticurve(_)
        | Error::TruncationTooSmall(_)
        | Error::OnLeaf { .. }
        | Error::TooCloseToComplement(_)
        | Error::OutOfChart { .. } => 2,
        _ => 3,
    }
}

#[derive(Serialize)]
struct GeneratorRow {
    name: String,
    matrix: [[f64; 2]; 4],
}

fn generator_rows(h: &Holonomy) -> Vec<GeneratorRow> {
    h.generators
        .iter()
        .enumerate()
        .map(|(i, g)| GeneratorRow {
            name: generator_name(i),
            matrix: matrix(g),
        })
        .collect()
}

#[derive(Serialize)]
struct GraftFile<'a> {
    genus: usize,
    lengths: [f64; 3],
    twists: [f64; 3],
    depth: usize,
    basepoint: [f64; 2],
    multicurve: &'a [CurveEntry],
    lifted_leaves: usize,
    base: Vec<GeneratorRow>,
    grafted: Vec<GeneratorRow>,
    residuals: Value,
}

pub fn graft(cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    let gs = cfg.structure()?;
    let base = &gs.base().holonomy;
    let deformed = gs.holonomy()?;
    let fnc = &gs.base().coordinates;
    let file = GraftFile {
        genus: base.genus,
        lengths: fnc.lengths,
        twists: fnc.twists,
        depth: gs.depth(),
        basepoint: complex_pair(gs.basepoint()),
        multicurve: &gs.multicurve().entries,
        lifted_leaves: gs.leaves().leaves.len(),
        base: generator_rows(base),
        grafted: generator_rows(deformed),
        residuals: json!({
            "base_relation": base.relation_residual(),
            "grafted_relation": deformed.relation_residual(),
            "max_generator_deviation": deformed.max_generator_deviation(base),
            "all_two_pi": gs.multicurve().all_two_pi(1e-12),
        }),
    };
    let path = out.join("grafted.json");
    write_atomic(&path, &to_json(&file)?)?;
    Ok(Outcome {
        files: vec![path],
        passed: true,
    })
}

/// Points of the domain away from its complement, drawn from the run seed.
pub fn domain_samples(dom: &DiskComplementDomain, n: usize, seed: u64) -> Result<Vec<PointCP1>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 10_000 * n.max(1) {
            return Err(Error::Domain(
                "could not sample points of the domain".into(),
            ));
        }
        let x = random_sphere_point(&mut rng);
        let far = dom
            .complement_points()
            .iter()
            .all(|p| p.chordal_distance(x) > 1e-3);
        if far && x.to_complex().is_some() && dom.contains(x) {
            out.push(x);
        }
    }
    Ok(out)
}

fn two_pi_report(cfg: &RunConfig, gs: &GraftedStructure) -> Result<Report> {
    let tol = cfg.tolerances;
    let mut report = Report::new();
    let mc = gs.multicurve();
    report.check(
        "weights are 2pi multiples",
        mc.all_two_pi(1e-12),
        format!("{} curves", mc.len()),
    );
    let base = &gs.base().holonomy;
    let deformed = gs.holonomy()?;
    let dev = deformed.max_generator_deviation(base);
    report.check(
        "holonomy unchanged",
        dev < tol.two_pi,
        format!("max deviation {dev:e}"),
    );
    let rel = deformed.relation_residual();
    report.check(
        "surface relation",
        rel < tol.rep,
        format!("residual {rel:e}"),
    );
    for (i, (a, b)) in deformed.generators.iter().zip(&base.generators).enumerate() {
        let d = a.projective_distance(b);
        if d >= tol.two_pi {
            report.violation(format!("generator {} moved by {d:e}", generator_name(i)));
        }
    }
    report.value("max_generator_deviation", dev);
    report.value("relation_residual", rel);
    report.value("tolerance", tol.two_pi);
    Ok(report)
}

fn dome_measure_report(cfg: &RunConfig) -> Result<Report> {
    let (dom, _) = cfg.domain()?;
    if !matches!(dom, DiskComplementDomain::Finite { .. }) {
        return Err(Error::Precondition(
            "dome-measure needs a finite domain complement".into(),
        ));
    }
    let mesh = dome(dom.complement_points())?;
    let tol = cfg.tolerances.measure;
    let mut report = Report::new();
    let mut rows = Vec::new();
    for (i, e) in mesh.edges.iter().enumerate() {
        let path = edge_crossing_path(&mesh, i, 8)?;
        let m = transverse_measure(&dom, &path, MAX_REFINEMENTS)?;
        let err = (m.value - e.weight).abs();
        if !m.converged || err >= tol {
            report.violation(format!(
                "edge {i}: measure {} vs dihedral angle {}",
                m.value, e.weight
            ));
        }
        rows.push(json!({ "edge": i, "ends": e.ends, "dihedral": e.weight, "measure": m.value, "converged": m.converged }));
    }
    let worst = rows
        .iter()
        .map(|r| {
            (r["measure"].as_f64().unwrap_or(f64::NAN) - r["dihedral"].as_f64().unwrap_or(f64::NAN))
                .abs()
        })
        .fold(0.0, f64::max);
    report.check(
        "measure equals dihedral angle",
        report.violations.is_empty(),
        format!("max error {worst:e}"),
    );
    report.value("faces", mesh.faces.len());
    report.value("edges", rows);
    report.value("tolerance", tol);
    Ok(report)
}

pub fn verify(cfg: &RunConfig, check: Check, out: &Path) -> Result<Outcome> {
    let report = match check {
        Check::TwoPi => two_pi_report(cfg, &cfg.structure()?)?,
        Check::Goldman => {
            let gs = cfg.structure()?;
            verify_goldman(
                &gs,
                gs.multicurve().all_two_pi(1e-12),
                cfg.tolerances.weight,
            )?
        }
        Check::Stratification => {
            let (dom, n) = cfg.domain()?;
            let samples = domain_samples(&dom, n, cfg.seed)?;
            stratification_check(&dom, &samples)
        }
        Check::Covering => {
            let gs = cfg.structure()?;
            let cov = &cfg.covering;
            let limit = limit_set_sample(gs.holonomy()?, cov.limit_depth);
            let loops: Vec<Vec<Complex64>> = match &cov.polygons {
                Some(p) => p
                    .iter()
                    .map(|l| l.iter().map(|[a, b]| Complex64::new(*a, *b)).collect())
                    .collect(),
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    let loops = random_loops(&mut rng, &limit, cov.margin, cov.loops, 48);
                    if loops.len() < cov.loops {
                        return Err(Error::Precondition(format!(
                            "only {} of {} loops fit the limit-set margin",
                            loops.len(),
                            cov.loops
                        )));
                    }
                    loops
                }
            };
            if loops.iter().any(|l| l.len() < 3) {
                return Err(Error::Precondition("loops need at least 3 vertices".into()));
            }
            verify_covering(
                &gs,
                &loops,
                cov.margin,
                &limit,
                cov.lift_leaf_distance,
                cfg.tolerances.closure,
            )?
        }
        Check::DomeMeasure => dome_measure_report(cfg)?,
    };
    let passed = report.passed();
    let doc =
        json!({ "check": check.name(), "passed": passed, "seed": cfg.seed, "report": report });
    let path = out.join(format!("verify-{}.json", check.name()));
    write_atomic(&path, &to_json(&doc)?)?;
    Ok(Outcome {
        files: vec![path],
        passed,
    })
}

pub fn export(cfg: &RunConfig, target: Target, out: &Path) -> Result<Outcome> {
    let mut files = Vec::new();
    let mut emit = |name: &str, text: String| -> Result<()> {
        let path = out.join(name);
        write_atomic(&path, &text)?;
        files.push(path);
        Ok(())
    };
    match target {
        Target::Pleat => {
            let gs = cfg.structure()?;
            let mesh = pleated_surface(&gs, cfg.truncation_radius)?;
            let json = MeshJson::from_pleated(&mesh);
            emit("pleat.obj", json.to_obj())?;
            emit("pleat.json", to_json(&json)?)?;
        }
        Target::Dome => {
            let (dom, _) = cfg.domain()?;
            let mesh = dome(dom.complement_points())?;
            let json = MeshJson::from_dome(&mesh);
            emit("dome.obj", json.to_obj())?;
            emit("dome.json", to_json(&json)?)?;
        }
        Target::Limitset => {
            let depth = cfg.limit_depth.unwrap_or(cfg.covering.limit_depth);
            let gs = cfg.structure()?;
            emit(
                "limitset.csv",
                points_csv(&limit_set_sample(gs.holonomy()?, depth)),
            )?;
        }
        Target::Holonomy => {
            let gs = cfg.structure()?;
            let rows = [("base", &gs.base().holonomy), ("grafted", gs.holonomy()?)];
            emit("holonomy.csv", holonomy_csv(&rows))?;
        }
    }
    Ok(Outcome {
        files,
        passed: true,
    })
}
