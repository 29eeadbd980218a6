use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grafting::{
    CurveEntry, GraftedStructure, WeightedMulticurve, DEFAULT_DEPTH, DEFAULT_LEAF_RADIUS,
};
use crate::moebius::PointCP1;
use crate::surface::{fuchsian_from_fn, FNCoordinates, FuchsianHolonomy};
use crate::thurston::{DiskComplementDomain, DEFAULT_EDGE_SAMPLES};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    #[serde(default = "default_genus")]
    pub genus: usize,
    pub lengths: [f64; 3],
    pub twists: [f64; 3],
}

fn default_genus() -> usize {
    2
}

/// A point of CP^1 in a config: `[re, im]` or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigPoint {
    Finite([f64; 2]),
    Named(InfinityTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InfinityTag {
    #[serde(rename = "inf")]
    Inf,
}

impl ConfigPoint {
    pub fn point(&self) -> PointCP1 {
        match self {
            ConfigPoint::Finite([re, im]) => PointCP1::finite(Complex64::new(*re, *im)),
            ConfigPoint::Named(InfinityTag::Inf) => PointCP1::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainPreset {
    Tetrahedron,
    /// `count` points drawn uniformly on the sphere from the run seed.
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    #[serde(default)]
    pub preset: Option<DomainPreset>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub points: Option<Vec<ConfigPoint>>,
    #[serde(default)]
    pub polygon: Option<Vec<[f64; 2]>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    500
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveringConfig {
    #[serde(default = "default_loops")]
    pub loops: usize,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default = "default_limit_depth")]
    pub limit_depth: usize,
    #[serde(default = "default_lift_distance")]
    pub lift_leaf_distance: f64,
    /// Explicit loops as polygons; random loops are drawn when absent.
    #[serde(default)]
    pub polygons: Option<Vec<Vec<[f64; 2]>>>,
}

fn default_loops() -> usize {
    50
}
fn default_margin() -> f64 {
    0.05
}
fn default_limit_depth() -> usize {
    6
}
fn default_lift_distance() -> f64 {
    2.5
}

impl Default for CoveringConfig {
    fn default() -> Self {
        CoveringConfig {
            loops: default_loops(),
            margin: default_margin(),
            limit_depth: default_limit_depth(),
            lift_leaf_distance: default_lift_distance(),
            polygons: None,
        }
    }
}

/// A run configuration as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub surface: Option<SurfaceConfig>,
    #[serde(default)]
    pub multicurve: Vec<CurveEntry>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default)]
    pub leaf_radius: Option<f64>,
    #[serde(default = "default_truncation")]
    pub truncation_radius: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    #[serde(default)]
    pub covering: CoveringConfig,
    #[serde(default)]
    pub limit_depth: Option<usize>,
}

fn default_depth() -> usize {
    DEFAULT_DEPTH
}
fn default_truncation() -> f64 {
    2.0
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Precondition(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.depth) {
            return Err(Error::Precondition(format!(
                "depth {} outside [1, 16]",
                self.depth
            )));
        }
        for e in &self.multicurve {
            if !(e.weight.radians() > 0.0) {
                return Err(Error::InvalidMulticurve(format!(
                    "weight of {} must be positive",
                    e.word
                )));
            }
        }
        if let Some(s) = &self.surface {
            if s.genus != 2 {
                return Err(Error::InvalidCoordinates(format!(
                    "genus {} not supported (only 2)",
                    s.genus
                )));
            }
            FNCoordinates::new(s.lengths, s.twists)?;
        }
        if !(self.truncation_radius > 0.0) {
            return Err(Error::TruncationTooSmall(self.truncation_radius));
        }
        if let Some(r) = self.leaf_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Precondition(format!(
                    "leaf radius {r} must be positive"
                )));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> Result<FuchsianHolonomy> {
        let s = self
            .surface
            .as_ref()
            .ok_or_else(|| Error::Precondition("config has no surface".into()))?;
        fuchsian_from_fn(&FNCoordinates::new(s.lengths, s.twists)?)
    }

    pub fn multicurve(&self) -> Result<WeightedMulticurve> {
        WeightedMulticurve::new(self.multicurve.clone())
    }

    pub fn structure(&self) -> Result<GraftedStructure> {
        GraftedStructure::with_leaf_radius(
            self.base()?,
            self.multicurve()?,
            self.depth,
            self.leaf_radius.unwrap_or(DEFAULT_LEAF_RADIUS),
        )
    }

    pub fn domain(&self) -> Result<(DiskComplementDomain, usize)> {
        let d = self
            .domain
            .as_ref()
            .ok_or_else(|| Error::Precondition("config has no domain".into()))?;
        let dom = match (&d.preset, &d.points, &d.polygon) {
            (Some(DomainPreset::Tetrahedron), None, None) => {
                DiskComplementDomain::regular_tetrahedron()
            }
            (Some(DomainPreset::Random), None, None) => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
                let n = d.count.unwrap_or(6);
                let pts: Vec<PointCP1> = (0..n).map(|_| random_sphere_point(&mut rng)).collect();
                DiskComplementDomain::finite(&pts)?
            }
            (None, Some(p), None) => {
                DiskComplementDomain::finite(&p.iter().map(ConfigPoint::point).collect::<Vec<_>>())?
            }
            (None, None, Some(v)) => DiskComplementDomain::polygon(
                &v.iter()
                    .map(|[a, b]| Complex64::new(*a, *b))
                    .collect::<Vec<_>>(),
                DEFAULT_EDGE_SAMPLES,
            )?,
            _ => {
                return Err(Error::Precondition(
                    "domain needs exactly one of preset, points, polygon".into(),
                ))
            }
        };
        Ok((dom, d.samples))
    }
}

/// Uniform point on the unit sphere by rejection from the cube.
pub fn random_sphere_point<R: rand::Rng>(rng: &mut R) -> PointCP1 {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if (0.1..=1.0).contains(&n) {
            return PointCP1::from_sphere(v.map(|x| x / n));
        }
    }
}
