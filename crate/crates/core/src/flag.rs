//! Generic flags `F^0 ⊂ F^1 ⊂ … ⊂ F^ℓ = R^ℓ` and their verification.
//!
//! A flag is stored as its defining forms `h_1, …, h_ℓ`, with
//! `F^q = {h_{q+1} = … = h_ℓ = 0}`. Two properties are checked:
//!
//! * genericity: `dim(F^q ∩ X) = q + dim X - ℓ` for every flat `X` (empty when negative);
//! * positivity and distinct heights: every chamber whose lowest level is `q`
//!   meets `F^q` only where `h_q > 0`, and the points `X ∩ F^q` for flats of
//!   dimension `ℓ - q` have pairwise distinct `h_q`-values.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::{Arrangement, Flat, IntersectionPoset};
use crate::chambers::ChamberSet;
use crate::error::{Error, Result};
use crate::exact::lp::{is_open_feasible, lp_optimize, Constraint, LpOutcome, Sense, StrictConstraint};
use crate::exact::{int, rank, serde_rational, solve_affine, AffineForm, AffineSubspace, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    forms: Vec<AffineForm>,
}

impl Flag {
    /// `forms` are `h_1, …, h_ℓ`; their linear parts must be independent.
    pub fn new(dim: usize, forms: Vec<AffineForm>) -> Result<Self> {
        if forms.len() != dim {
            return Err(Error::DegenerateFlag { expected: dim });
        }
        for f in &forms {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
            }
        }
        let linear: Vec<_> = forms.iter().map(|f| f.linear().to_vec()).collect();
        if rank(&linear)? != dim {
            return Err(Error::DegenerateFlag { expected: dim });
        }
        Ok(Flag { forms })
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    /// `h_q` for `1 <= q <= ℓ`.
    pub fn height_form(&self, q: usize) -> &AffineForm {
        &self.forms[q - 1]
    }

    /// The equations `h_{q+1}, …, h_ℓ` cutting out `F^q`.
    pub fn equations(&self, q: usize) -> &[AffineForm] {
        &self.forms[q..]
    }

    pub fn equation_constraints(&self, q: usize) -> Vec<StrictConstraint> {
        self.equations(q).iter().cloned().map(StrictConstraint::eq).collect()
    }

    pub fn subspace(&self, q: usize) -> AffineSubspace {
        solve_affine(self.dim(), self.equations(q))
            .expect("flag forms have ambient length")
            .expect("independent forms are consistent")
    }

    /// `X ∩ F^q`, if nonempty.
    pub fn meet(&self, arr: &Arrangement, flat: &Flat, q: usize) -> Option<AffineSubspace> {
        let mut forms: Vec<AffineForm> = flat.support.iter().map(|&i| arr.hyperplane(i).clone()).collect();
        forms.extend_from_slice(self.equations(q));
        solve_affine(self.dim(), &forms).expect("consistent lengths")
    }

    /// Whether the open region meets `F^q`.
    pub fn meets(&self, region: &[StrictConstraint], q: usize) -> Result<bool> {
        let mut cs = region.to_vec();
        cs.extend(self.equation_constraints(q));
        is_open_feasible(self.dim(), &cs)
    }

    /// The least `q` such that the open region meets `F^q`.
    ///
    /// Meeting `F^q` implies meeting `F^{q+1}`, so this bisects.
    pub fn level_of(&self, region: &[StrictConstraint]) -> Result<usize> {
        let (mut lo, mut hi) = (0, self.dim());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.meets(region, mid)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo)
    }

    /// Minimizes `h_q` over the closure of the region intersected with `F^q`.
    pub fn minimize_height(&self, region: &[StrictConstraint], q: usize) -> Result<LpOutcome> {
        let mut cs: Vec<Constraint> = region.iter().map(StrictConstraint::relaxed).collect();
        cs.extend(self.equations(q).iter().cloned().map(Constraint::eq));
        lp_optimize(self.dim(), self.height_form(q), &cs, Sense::Minimize)
    }
}

/// The first reason a flag fails verification, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `F^q ∩ X` has the wrong dimension (`None` means empty).
    NotGeneric { flat: Vec<usize>, q: usize, expected: isize, actual: Option<usize> },
    /// A chamber first meeting `F^q` reaches `h_q <= 0` there (`None` minimum means unbounded).
    Positivity {
        chamber: usize,
        signs: String,
        q: usize,
        #[serde(with = "serde_rational::option")]
        minimum: Option<Rational>,
    },
    /// Two flats of dimension `ℓ - q` meet `F^q` at the same height.
    HeightCollision {
        q: usize,
        first: Vec<usize>,
        second: Vec<usize>,
        #[serde(with = "serde_rational")]
        height: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotGeneric { flat, q, expected, actual } => {
                let actual = actual.map(|d| d.to_string()).unwrap_or_else(|| "empty".into());
                write!(f, "flat {flat:?} meets F^{q} in dimension {actual}, expected {expected}")
            }
            Violation::Positivity { chamber, signs, q, minimum } => match minimum {
                Some(m) => write!(f, "chamber {chamber} ({signs}) reaches h_{q} = {m} <= 0 on F^{q}"),
                None => write!(f, "chamber {chamber} ({signs}) is unbounded below in h_{q} on F^{q}"),
            },
            Violation::HeightCollision { q, first, second, height } => {
                write!(f, "flats {first:?} and {second:?} both meet F^{q} at height {height}")
            }
        }
    }
}

/// Checks `dim(F^q ∩ X) = q + dim X - ℓ` for every flat and level.
pub fn check_generic(arr: &Arrangement, poset: &IntersectionPoset, flag: &Flag) -> Result<Option<Violation>> {
    if flag.dim() != arr.dim() {
        return Err(Error::DimensionMismatch { expected: arr.dim(), found: flag.dim() });
    }
    let l = arr.dim() as isize;
    for x in poset.flats() {
        for q in 0..=arr.dim() {
            let expected = q as isize + x.dim() as isize - l;
            let actual = flag.meet(arr, x, q).map(|s| s.dim());
            let ok = match actual {
                None => expected < 0,
                Some(d) => expected >= 0 && d as isize == expected,
            };
            if !ok {
                return Ok(Some(Violation::NotGeneric { flat: x.support.clone(), q, expected, actual }));
            }
        }
    }
    Ok(None)
}

/// Checks positivity and distinct heights. Assumes [`check_generic`] passed.
pub fn check_assumption(
    arr: &Arrangement,
    poset: &IntersectionPoset,
    chambers: &ChamberSet,
    flag: &Flag,
) -> Result<Option<Violation>> {
    if flag.dim() != arr.dim() {
        return Err(Error::DimensionMismatch { expected: arr.dim(), found: flag.dim() });
    }
    // Distinct heights first: it is pure linear algebra.
    for q in 1..=arr.dim() {
        let mut heights: Vec<(Rational, &Flat)> = Vec::new();
        for x in poset.flats_of_dim(arr.dim() - q) {
            let Some(meet) = flag.meet(arr, x, q) else {
                return Err(Error::Precondition("flag is not generic".into()));
            };
            heights.push((flag.height_form(q).eval(&meet.point), x));
        }
        heights.sort_by(|a, b| a.0.cmp(&b.0));
        for w in heights.windows(2) {
            if w[0].0 == w[1].0 {
                return Ok(Some(Violation::HeightCollision {
                    q,
                    first: w[0].1.support.clone(),
                    second: w[1].1.support.clone(),
                    height: w[0].0.clone(),
                }));
            }
        }
    }
    for c in chambers.chambers() {
        let region = c.constraints(arr);
        let q = flag.level_of(&region)?;
        if q == 0 {
            continue;
        }
        let minimum = match flag.minimize_height(&region, q)? {
            LpOutcome::Optimal { value, .. } if value.is_positive() => continue,
            LpOutcome::Optimal { value, .. } => Some(value),
            LpOutcome::Unbounded => None,
            LpOutcome::Infeasible => return Err(Error::Internal("chamber misses its own level".into())),
        };
        return Ok(Some(Violation::Positivity { chamber: c.id, signs: c.signs.to_string(), q, minimum }));
    }
    Ok(None)
}

/// Both checks; the first violation wins.
pub fn verify_flag(
    arr: &Arrangement,
    poset: &IntersectionPoset,
    chambers: &ChamberSet,
    flag: &Flag,
) -> Result<Option<Violation>> {
    match check_generic(arr, poset, flag)? {
        Some(v) => Ok(Some(v)),
        None => check_assumption(arr, poset, chambers, flag),
    }
}

pub const MAX_ROUNDS: usize = 64;
const CANDIDATES_PER_ROUND: usize = 4;

/// Generates a verified flag, deterministically from `seed`.
///
/// Linear parts are sampled uniformly from `[-M, M]`, top level first. The
/// constant of `h_q` is then chosen so that every point `X ∩ F^q` with
/// `dim X = ℓ - q` has `h_q` between 1 and `M` plus the spread of the sampled
/// linear part, which keeps `F^{q-1}` from separating them. `M` starts at
/// `10·n·ℓ` and doubles each round; every candidate is verified.
pub fn generate_flag(
    arr: &Arrangement,
    poset: &IntersectionPoset,
    chambers: &ChamberSet,
    seed: u64,
) -> Result<Flag> {
    let dim = arr.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bound: i64 = 10 * (arr.len().max(1) as i64) * (dim.max(1) as i64);
    let mut last = None;
    for _round in 0..MAX_ROUNDS {
        for _ in 0..CANDIDATES_PER_ROUND {
            let Some(flag) = sample_candidate(arr, poset, &mut rng, bound) else {
                continue;
            };
            match verify_flag(arr, poset, chambers, &flag)? {
                None => return Ok(flag),
                Some(v) => last = Some(v),
            }
        }
        bound = bound.saturating_mul(2);
    }
    Err(Error::FlagGenerationFailed { rounds: MAX_ROUNDS, last: last.map(Box::new) })
}

fn sample_candidate(arr: &Arrangement, poset: &IntersectionPoset, rng: &mut ChaCha8Rng, bound: i64) -> Option<Flag> {
    let dim = arr.dim();
    let mut forms: Vec<AffineForm> = Vec::with_capacity(dim);
    for q in (1..=dim).rev() {
        // `forms` currently holds h_{q+1}, …, h_ℓ in reverse.
        let higher: Vec<AffineForm> = forms.iter().rev().cloned().collect();
        let linear: Vec<Rational> = (0..dim).map(|_| int(rng.gen_range(-bound..=bound))).collect();
        let probe = AffineForm::new(linear.clone(), Rational::zero());
        let mut values = Vec::new();
        for x in poset.flats_of_dim(dim - q) {
            let mut eqs: Vec<AffineForm> = x.support.iter().map(|&i| arr.hyperplane(i).clone()).collect();
            eqs.extend(higher.iter().cloned());
            let meet = solve_affine(dim, &eqs).ok()??;
            if meet.dim() != 0 {
                return None;
            }
            values.push(probe.eval(&meet.point));
        }
        let offset = int(rng.gen_range(1..=bound));
        let constant = match values.iter().min() {
            Some(lowest) => offset - lowest,
            None => int(rng.gen_range(-bound..=bound)),
        };
        forms.push(AffineForm::new(linear, constant));
    }
    forms.reverse();
    Flag::new(dim, forms).ok()
}
