//! Chambers as sign vectors with certified interior points.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::exact::lp::{interior_point, StrictConstraint};
use crate::exact::{AffineForm, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn of(r: &Rational) -> Option<Sign> {
        if r.is_positive() {
            Some(Sign::Pos)
        } else if r.is_negative() {
            Some(Sign::Neg)
        } else {
            None
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Pos => '+',
        }
    }

    /// The form that is positive exactly on this side of `{form = 0}`.
    pub fn orient(self, form: &AffineForm) -> AffineForm {
        match self {
            Sign::Pos => form.clone(),
            Sign::Neg => form.negated(),
        }
    }
}

/// A strict sign vector over an ordered list of hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn of_point(forms: &[AffineForm], x: &[Rational]) -> Option<SignVector> {
        forms.iter().map(|f| Sign::of(&f.eval(x))).collect::<Option<Vec<_>>>().map(SignVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn parse(s: &str) -> Result<SignVector> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Pos),
                '-' | '\u{2212}' => Ok(Sign::Neg),
                other => Err(Error::InvalidArgument(format!("bad sign character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.as_char()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub id: usize,
    pub signs: SignVector,
    pub interior_point: Vec<Rational>,
}

impl Chamber {
    pub fn constraints(&self, arr: &Arrangement) -> Vec<StrictConstraint> {
        self.signs
            .0
            .iter()
            .zip(arr.hyperplanes())
            .map(|(s, h)| StrictConstraint::gt(s.orient(h)))
            .collect()
    }
}

/// A chamber of the subarrangement on `subset`, given by its signs there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubChamber {
    pub subset: Vec<usize>,
    pub signs: Vec<Sign>,
}

impl SubChamber {
    /// The unique chamber of the empty subarrangement, all of `R^ℓ`.
    pub fn whole_space() -> Self {
        SubChamber { subset: Vec::new(), signs: Vec::new() }
    }

    /// The chamber of the subarrangement on `subset` that contains `chamber`.
    pub fn restriction(signs: &SignVector, subset: &[usize]) -> Self {
        SubChamber { subset: subset.to_vec(), signs: subset.iter().map(|&i| signs.get(i)).collect() }
    }

    /// True iff a full chamber with these signs lies inside this subchamber.
    pub fn contains(&self, signs: &SignVector) -> bool {
        self.subset.iter().zip(&self.signs).all(|(&i, &s)| signs.get(i) == s)
    }

    pub fn constraints(&self, arr: &Arrangement) -> Vec<StrictConstraint> {
        self.subset
            .iter()
            .zip(&self.signs)
            .map(|(&i, s)| StrictConstraint::gt(s.orient(arr.hyperplane(i))))
            .collect()
    }

    /// Membership of a point; `None` if it lies on one of the subset's hyperplanes.
    pub fn contains_point(&self, arr: &Arrangement, x: &[Rational]) -> Option<bool> {
        let mut inside = true;
        for (&i, &s) in self.subset.iter().zip(&self.signs) {
            inside &= Sign::of(&arr.hyperplane(i).eval(x))? == s;
        }
        Some(inside)
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.as_char()).collect()
    }
}

/// Test whether chamber `c` lies inside the subarrangement chamber `d`.
pub fn contained_in(c: &Chamber, d: &SubChamber) -> bool {
    d.contains(&c.signs)
}

/// Where a real point sits relative to an arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointLocation<T> {
    Interior(T),
    OnBoundary(Vec<usize>),
}

/// Locates `x` among the chambers of the subarrangement on `subset`.
pub fn locate_in_subarrangement(arr: &Arrangement, subset: &[usize], x: &[Rational]) -> PointLocation<SubChamber> {
    let mut signs = Vec::with_capacity(subset.len());
    let mut zeros = Vec::new();
    for &i in subset {
        match Sign::of(&arr.hyperplane(i).eval(x)) {
            Some(s) => signs.push(s),
            None => zeros.push(i),
        }
    }
    if zeros.is_empty() {
        PointLocation::Interior(SubChamber { subset: subset.to_vec(), signs })
    } else {
        PointLocation::OnBoundary(zeros)
    }
}

/// The complete chamber list `ch(A)`.
#[derive(Clone, Debug)]
pub struct ChamberSet {
    chambers: Vec<Chamber>,
    lookup: HashMap<SignVector, usize>,
}

impl ChamberSet {
    pub fn chambers(&self) -> &[Chamber] {
        &self.chambers
    }

    pub fn get(&self, id: usize) -> &Chamber {
        &self.chambers[id]
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn find(&self, signs: &SignVector) -> Option<&Chamber> {
        self.lookup.get(signs).map(|&i| &self.chambers[i])
    }

    /// The chamber containing `x`, or the hyperplanes `x` lies on.
    pub fn chamber_of_point(&self, arr: &Arrangement, x: &[Rational]) -> PointLocation<usize> {
        let all: Vec<usize> = (0..arr.len()).collect();
        match locate_in_subarrangement(arr, &all, x) {
            PointLocation::Interior(sub) => {
                let id = self.lookup[&SignVector(sub.signs)];
                PointLocation::Interior(id)
            }
            PointLocation::OnBoundary(z) => PointLocation::OnBoundary(z),
        }
    }

    /// Chambers lying inside the given subarrangement chamber.
    pub fn inside<'a>(&'a self, d: &'a SubChamber) -> impl Iterator<Item = &'a Chamber> + 'a {
        self.chambers.iter().filter(move |c| contained_in(c, d))
    }
}

/// Enumerates `ch(A)` by inserting hyperplanes one at a time.
///
/// A chamber of the first `i` hyperplanes keeps the side of `H_i` its interior
/// point is on; the opposite side costs one LP.
pub fn enumerate_chambers(arr: &Arrangement) -> Result<ChamberSet> {
    let dim = arr.dim();
    let mut cells: Vec<(Vec<Sign>, Vec<Rational>)> = vec![(Vec::new(), vec![Rational::zero(); dim])];
    for (i, h) in arr.hyperplanes().iter().enumerate() {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for (signs, point) in cells {
            let known = Sign::of(&h.eval(&point));
            let mut base: Vec<StrictConstraint> = signs
                .iter()
                .zip(arr.hyperplanes())
                .map(|(s, g)| StrictConstraint::gt(s.orient(g)))
                .collect();
            for side in [Sign::Neg, Sign::Pos] {
                let mut extended = signs.clone();
                extended.push(side);
                if known == Some(side) {
                    next.push((extended, point.clone()));
                    continue;
                }
                base.push(StrictConstraint::gt(side.orient(h)));
                if let Some(p) = interior_point(dim, &base)? {
                    next.push((extended, p));
                }
                base.pop();
            }
        }
        cells = next;
        debug_assert!(cells.iter().all(|(s, _)| s.len() == i + 1));
    }
    let chambers: Vec<Chamber> = cells
        .into_iter()
        .enumerate()
        .map(|(id, (signs, interior_point))| Chamber { id, signs: SignVector(signs), interior_point })
        .collect();
    let lookup = chambers.iter().map(|c| (c.signs.clone(), c.id)).collect();
    Ok(ChamberSet { chambers, lookup })
}
