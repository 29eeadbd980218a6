use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surface::GroupWord;

/// A grafting weight in radians. Rational multiples of pi are kept exactly
/// so that 2 pi multiplicity can be decided without rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    PiMultiple { num: i64, den: i64 },
    Radians(f64),
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Weight {
    pub fn pi_multiple(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidMulticurve(
                "zero denominator in weight".into(),
            ));
        }
        let g = gcd(num, den).max(1);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Weight::PiMultiple {
            num: s * num / g,
            den: s * den / g,
        })
    }

    pub fn radians(&self) -> f64 {
        match *self {
            Weight::PiMultiple { num, den } => num as f64 / den as f64 * PI,
            Weight::Radians(r) => r,
        }
    }

    /// Exact for symbolic weights, within `tol` for float weights.
    pub fn is_two_pi_multiple(&self, tol: f64) -> bool {
        match *self {
            Weight::PiMultiple { num, den } => num % (2 * den) == 0,
            Weight::Radians(r) => {
                let k = (r / (2.0 * PI)).round();
                (r - 2.0 * PI * k).abs() < tol
            }
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Weight::PiMultiple { num, den: 1 } => write!(f, "{num}*pi"),
            Weight::PiMultiple { num, den } => write!(f, "{num}/{den}*pi"),
            Weight::Radians(r) => write!(f, "{r:?}"),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Accepts `pi`, `2*pi`, `2pi`, `3/4*pi`, `pi/2` and plain radians.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidMulticurve(format!("cannot parse weight `{s}`"));
        let t: String = s
            .trim()
            .to_lowercase()
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        let t = t.replace('π', "pi");
        if let Some(pos) = t.find("pi") {
            let (head, tail) = (&t[..pos], &t[pos + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let ratio = |r: &str| -> Result<(i64, i64)> {
                match r.split_once('/') {
                    Some((n, d)) => {
                        Ok((n.parse().map_err(|_| bad())?, d.parse().map_err(|_| bad())?))
                    }
                    None => Ok((r.parse().map_err(|_| bad())?, 1)),
                }
            };
            let (num, den) = if head.is_empty() {
                (1, 1)
            } else {
                ratio(head)?
            };
            let den2 = match tail.strip_prefix('/') {
                Some(d) => d.parse::<i64>().map_err(|_| bad())?,
                None if tail.is_empty() => 1,
                None => return Err(bad()),
            };
            return Weight::pi_multiple(num, den * den2);
        }
        let r: f64 = t.parse().map_err(|_| bad())?;
        if !r.is_finite() {
            return Err(bad());
        }
        Ok(Weight::Radians(r))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Weight::Radians(r) => s.serialize_f64(*r),
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(r) => Ok(Weight::Radians(r)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One curve of a multicurve: a word naming a closed geodesic and its weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry {
    #[serde(with = "word_string")]
    pub word: GroupWord,
    pub weight: Weight,
}

mod word_string {
    use super::GroupWord;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &GroupWord, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&w.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GroupWord, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Disjoint simple closed geodesics with nonnegative weights. Disjointness
/// is checked against a concrete representation when leaves are lifted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedMulticurve {
    pub entries: Vec<CurveEntry>,
}

impl WeightedMulticurve {
    pub fn new(entries: Vec<CurveEntry>) -> Result<Self> {
        for e in &entries {
            if e.word.is_empty() {
                return Err(Error::InvalidMulticurve("empty curve word".into()));
            }
            let r = e.weight.radians();
            if !(r >= 0.0) || !r.is_finite() {
                return Err(Error::InvalidMulticurve(format!(
                    "weight {} of {} is negative",
                    e.weight, e.word
                )));
            }
        }
        Ok(WeightedMulticurve { entries })
    }

    /// Parses `(word, weight)` string pairs.
    pub fn parse(pairs: &[(&str, &str)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|(w, t)| {
                Ok(CurveEntry {
                    word: w.parse()?,
                    weight: t.parse()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        WeightedMulticurve::new(entries)
    }

    pub fn empty() -> Self {
        WeightedMulticurve::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn all_two_pi(&self, tol: f64) -> bool {
        self.entries
            .iter()
            .all(|e| e.weight.is_two_pi_multiple(tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_parsing() {
        assert_eq!(
            "2*pi".parse::<Weight>().unwrap(),
            Weight::PiMultiple { num: 2, den: 1 }
        );
        assert_eq!(
            "4pi".parse::<Weight>().unwrap(),
            Weight::PiMultiple { num: 4, den: 1 }
        );
        assert_eq!(
            "pi/2".parse::<Weight>().unwrap(),
            Weight::PiMultiple { num: 1, den: 2 }
        );
        assert_eq!(
            "2/4*pi".parse::<Weight>().unwrap(),
            Weight::PiMultiple { num: 1, den: 2 }
        );
        assert_eq!(
            "pi".parse::<Weight>().unwrap(),
            Weight::PiMultiple { num: 1, den: 1 }
        );
        assert_eq!("0.5".parse::<Weight>().unwrap(), Weight::Radians(0.5));
        assert!("two pi".parse::<Weight>().is_err());
        assert!("1/0*pi".parse::<Weight>().is_err());
    }

    #[test]
    fn two_pi_multiples() {
        assert!("4*pi".parse::<Weight>().unwrap().is_two_pi_multiple(0.0));
        assert!(!"3*pi".parse::<Weight>().unwrap().is_two_pi_multiple(1e-6));
        assert!(!"1/2*pi".parse::<Weight>().unwrap().is_two_pi_multiple(1e-6));
        assert!(Weight::Radians(2.0 * PI + 1e-9).is_two_pi_multiple(1e-6));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["2*pi", "1/2*pi", "0.25"] {
            let w: Weight = s.parse().unwrap();
            assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
        }
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(WeightedMulticurve::parse(&[("a1", "-1")]).is_err());
        assert!(WeightedMulticurve::parse(&[("1", "1")]).is_err());
        assert!(WeightedMulticurve::parse(&[("a1", "2*pi"), ("a2", "0")]).is_ok());
    }

    #[test]
    fn serde_roundtrip() {
        let mc = WeightedMulticurve::parse(&[("a1", "2*pi"), ("a1 b1 A1 B1", "0.5")]).unwrap();
        let s = serde_json::to_string(&mc).unwrap();
        let back: WeightedMulticurve = serde_json::from_str(&s).unwrap();
        assert_eq!(back, mc);
    }
}
