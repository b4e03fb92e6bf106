//! Built-in example arrangements with hand-chosen flags.

use crate::arrangement::Arrangement;
use crate::chambers::SignVector;
use crate::error::{Error, Result};
use crate::exact::AffineForm;
use crate::flag::Flag;

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub arrangement: Arrangement,
    pub flag: Flag,
    /// Conventional chamber names and their sign vectors.
    pub chamber_labels: Vec<(String, SignVector)>,
}

impl Fixture {
    pub fn signs_of(&self, label: &str) -> SignVector {
        self.chamber_labels
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| panic!("fixture {} has no chamber {label}", self.name))
    }

    pub fn label_of(&self, signs: &SignVector) -> Option<&str> {
        self.chamber_labels.iter().find(|(_, s)| s == signs).map(|(l, _)| l.as_str())
    }
}

pub const NAMES: [&str; 2] = ["point-in-line", "three-lines"];

fn labels(pairs: &[(&str, &str)]) -> Vec<(String, SignVector)> {
    pairs
        .iter()
        .map(|(l, s)| (l.to_string(), SignVector::parse(s).expect("valid sign literal")))
        .collect()
}

/// The origin in the real line, with `F^0 = {-1}` and `h_1 = x + 1`.
pub fn point_in_line() -> Fixture {
    Fixture {
        name: "point-in-line",
        arrangement: Arrangement::new(1, vec![AffineForm::from_ints(&[1], 0)]).expect("valid"),
        flag: Flag::new(1, vec![AffineForm::from_ints(&[1], 1)]).expect("valid"),
        chamber_labels: labels(&[("C_0", "-"), ("C_1", "+")]),
    }
}

/// Three lines in the plane: `H1 = {x = y}` crossing the parallel pair
/// `H2 = {x + y = 10}`, `H3 = {x + y = 14}`.
///
/// The flag is `F^1 = {y = 2}` (`h_2 = y - 2`) and `F^0 = (-4, 2)` (`h_1 = x + 4`).
/// Walking along `F^1` from `F^0` one crosses `H1`, `H2`, `H3` in that order;
/// the vertices `H1 ∩ H2 = (5, 5)` and `H1 ∩ H3 = (7, 7)` lie above `F^1`.
pub fn three_lines() -> Fixture {
    let arrangement = Arrangement::new(
        2,
        vec![
            AffineForm::from_ints(&[1, -1], 0),
            AffineForm::from_ints(&[1, 1], -10),
            AffineForm::from_ints(&[1, 1], -14),
        ],
    )
    .expect("valid");
    let flag = Flag::new(2, vec![AffineForm::from_ints(&[1, 0], 4), AffineForm::from_ints(&[0, 1], -2)]).expect("valid");
    Fixture {
        name: "three-lines",
        arrangement,
        flag,
        chamber_labels: labels(&[
            ("C_0", "---"),
            ("C_1", "+--"),
            ("C_2", "++-"),
            ("C_3", "+++"),
            ("C_4", "-++"),
            ("C_5", "-+-"),
        ]),
    }
}

pub fn load_fixture(name: &str) -> Result<Fixture> {
    match name {
        "point-in-line" => Ok(point_in_line()),
        "three-lines" => Ok(three_lines()),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}
