use serde::{Deserialize, Serialize};

/// Numerical tolerances shared across the crate.
///
/// `alg` bounds algebraic residuals, `geo` geometric coincidence, `class`
/// the parabolic band of the trace classifier, `rep` representation
/// residuals, `contact` the relative band for ideal-point detection and
/// `measure` the Cauchy threshold of transverse-measure refinement. The last
/// three are acceptance thresholds: `two_pi` for holonomy deviation after a
/// 2pi graft, `weight` for recovered weights and `closure` for lifted loops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub alg: f64,
    pub geo: f64,
    pub class: f64,
    pub rep: f64,
    pub contact: f64,
    pub measure: f64,
    pub two_pi: f64,
    pub weight: f64,
    pub closure: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            alg: 1e-10,
            geo: 1e-7,
            class: 1e-8,
            rep: 1e-8,
            contact: 1e-6,
            measure: 1e-5,
            two_pi: 1e-9,
            weight: 1e-6,
            closure: 1e-6,
        }
    }
}

impl Tolerances {
    /// Applies a `key=value` override as accepted on the command line.
    pub fn set(&mut self, key: &str, value: f64) -> Result<(), String> {
        let slot = match key {
            "alg" | "tol_alg" => &mut self.alg,
            "geo" | "tol_geo" => &mut self.geo,
            "class" | "tol_class" => &mut self.class,
            "rep" | "tol_rep" => &mut self.rep,
            "contact" | "tol_contact" => &mut self.contact,
            "measure" | "tol_measure" => &mut self.measure,
            "two_pi" => &mut self.two_pi,
            "weight" => &mut self.weight,
            "closure" => &mut self.closure,
            _ => return Err(format!("unknown tolerance key `{key}`")),
        };
        if !(value > 0.0 && value.is_finite()) {
            return Err(format!("tolerance `{key}` must be positive, got {value}"));
        }
        *slot = value;
        Ok(())
    }
}

pub const TOL_ALG: f64 = 1e-10;
pub const TOL_GEO: f64 = 1e-7;
pub const TOL_CLASS: f64 = 1e-8;
pub const TOL_REP: f64 = 1e-8;
