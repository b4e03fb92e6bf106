//! JSON file formats. Rationals are written as `"p/q"` or `"p"` strings.

use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::chambers::ChamberSet;
use crate::error::{Error, Result};
use crate::exact::{serde_rational, AffineForm, Rational};
use crate::flag::Flag;
use crate::partition::GaussPoint;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(with = "serde_rational::vec")]
    pub linear: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub constant: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub dim: usize,
    pub hyperplanes: Vec<HyperplaneEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    #[serde(with = "serde_rational::vec")]
    pub linear: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub constant: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagFile {
    pub forms: Vec<FormEntry>,
}

/// One line of the chamber report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChamberRecord {
    pub id: usize,
    pub signs: String,
    #[serde(with = "serde_rational::vec")]
    pub interior_point: Vec<Rational>,
}

impl ArrangementFile {
    pub fn from_arrangement(arr: &Arrangement) -> Self {
        ArrangementFile {
            dim: arr.dim(),
            hyperplanes: arr
                .hyperplanes()
                .iter()
                .zip(arr.names())
                .map(|(h, n)| HyperplaneEntry {
                    name: Some(n.clone()),
                    linear: h.linear().to_vec(),
                    constant: h.constant().clone(),
                })
                .collect(),
        }
    }

    pub fn to_arrangement(&self) -> Result<Arrangement> {
        let mut forms = Vec::with_capacity(self.hyperplanes.len());
        let mut names = Vec::with_capacity(self.hyperplanes.len());
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if h.linear.len() != self.dim {
                return Err(Error::InvalidArgument(format!(
                    "hyperplanes[{i}].linear has {} entries, expected {}",
                    h.linear.len(),
                    self.dim
                )));
            }
            forms.push(AffineForm::new(h.linear.clone(), h.constant.clone()));
            names.push(h.name.clone().unwrap_or_else(|| format!("H{}", i + 1)));
        }
        Arrangement::with_names(self.dim, forms, names)
    }
}

impl FlagFile {
    pub fn from_flag(flag: &Flag) -> Self {
        FlagFile {
            forms: flag
                .forms()
                .iter()
                .map(|f| FormEntry { linear: f.linear().to_vec(), constant: f.constant().clone() })
                .collect(),
        }
    }

    pub fn to_flag(&self, dim: usize) -> Result<Flag> {
        for (i, f) in self.forms.iter().enumerate() {
            if f.linear.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "forms[{i}].linear has {} entries, expected {dim}",
                    f.linear.len()
                )));
            }
        }
        Flag::new(dim, self.forms.iter().map(|f| AffineForm::new(f.linear.clone(), f.constant.clone())).collect())
    }
}

pub fn parse_arrangement(json: &str) -> Result<Arrangement> {
    serde_json::from_str::<ArrangementFile>(json)?.to_arrangement()
}

pub fn arrangement_to_json(arr: &Arrangement) -> String {
    serde_json::to_string_pretty(&ArrangementFile::from_arrangement(arr)).expect("serializable")
}

pub fn parse_flag(json: &str, dim: usize) -> Result<Flag> {
    serde_json::from_str::<FlagFile>(json)?.to_flag(dim)
}

pub fn flag_to_json(flag: &Flag) -> String {
    serde_json::to_string_pretty(&FlagFile::from_flag(flag)).expect("serializable")
}

pub fn parse_gauss_point(json: &str, dim: usize) -> Result<GaussPoint> {
    let p: GaussPoint = serde_json::from_str(json)?;
    for (field, part) in [("x", &p.x), ("v", &p.v)] {
        if part.len() != dim {
            return Err(Error::InvalidArgument(format!("{field} has {} entries, expected {dim}", part.len())));
        }
    }
    Ok(p)
}

pub fn chamber_records(chambers: &ChamberSet) -> Vec<ChamberRecord> {
    chambers
        .chambers()
        .iter()
        .map(|c| ChamberRecord { id: c.id, signs: c.signs.to_string(), interior_point: c.interior_point.clone() })
        .collect()
}

/// The chamber report as JSON lines.
pub fn chamber_lines(chambers: &ChamberSet) -> String {
    let mut out = String::new();
    for r in chamber_records(chambers) {
        out.push_str(&serde_json::to_string(&r).expect("serializable"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_vector;
    use crate::fixtures;
    use crate::random::random_arrangement;
    use proptest::prelude::*;

    #[test]
    fn parses_documented_format() {
        let json = r#"{"dim": 2, "hyperplanes": [
            {"name": "H1", "linear": ["1", "-1"], "constant": "0"},
            {"linear": ["1/2", "1/2"], "constant": "-5"}
        ]}"#;
        let arr = parse_arrangement(json).unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr.name(1), "H2");
        assert_eq!(arr.hyperplane(1).constant(), &crate::exact::int(-5));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_arrangement(r#"{"dim": 2, "hyperplanes": [{"linear": ["1"], "constant": "0"}]}"#),
            Err(Error::InvalidArgument(m)) if m.contains("hyperplanes[0]")));
        assert!(matches!(parse_arrangement(r#"{"dim": 1, "hyperplanes": [{"linear": ["1/0"], "constant": "0"}]}"#),
            Err(Error::Json(_))));
        assert!(matches!(parse_arrangement(r#"{"dim": 1, "hyperplanes": [{"linear": ["0"], "constant": "1"}]}"#),
            Err(Error::ZeroLinearPart { index: 0 })));
        assert!(parse_flag(r#"{"forms": [{"linear": ["1", "1"], "constant": "0"}, {"linear": ["2", "2"], "constant": "1"}]}"#, 2).is_err());
        assert!(parse_gauss_point(r#"{"x": ["1"], "v": ["0", "1"]}"#, 1).is_err());
    }

    #[test]
    fn fixture_round_trip() {
        for name in fixtures::NAMES {
            let fx = fixtures::load_fixture(name).unwrap();
            assert_eq!(parse_arrangement(&arrangement_to_json(&fx.arrangement)).unwrap(), fx.arrangement);
            assert_eq!(parse_flag(&flag_to_json(&fx.flag), fx.arrangement.dim()).unwrap(), fx.flag);
        }
    }

    #[test]
    fn gauss_point_json() {
        let p = parse_gauss_point(r#"{"x": ["1/2", "3"], "v": ["0", "-1"]}"#, 2).unwrap();
        assert_eq!(p.v, int_vector(&[0, -1]));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"x":["1/2","3"],"v":["0","-1"]}"#);
    }

    proptest! {
        #[test]
        fn arrangement_round_trip(dim in 1usize..=4, n in 0usize..=6, seed in any::<u64>()) {
            let arr = random_arrangement(dim, n, seed);
            prop_assert_eq!(parse_arrangement(&arrangement_to_json(&arr)).unwrap(), arr);
        }
    }
}
