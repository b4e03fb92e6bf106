//! Borel-Moore classes of piece closures, their pairing with the cells `σ_C`
//! of the minimal CW structure, and the map from Orlik-Solomon generators.
//!
//! Cells `σ_{C'}` are never built as maps. They enter only through two rules:
//! `cl S(C)` meets `σ_{C'}` with sign `(-1)^{q(ℓ-q)}` exactly when `C' ⊂ C̃`,
//! and `ω_I` integrates over `σ_{C'}` to `ε(I)` exactly when `C' ⊂ C_0(I)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::analysis::Analysis;
use crate::arrangement::{Arrangement, IntersectionPoset};
use crate::chambers::{enumerate_chambers, Sign, SubChamber};
use crate::error::{Error, Result};
use crate::exact::{determinant, rank, solve_affine, solve_square, Rational};
use crate::flag::{verify_flag, Flag};
use crate::stratify::Stratum;

/// An ordered tuple `(i_1, …, i_q)` of distinct hyperplane indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexTuple {
    indices: Vec<usize>,
    independent: bool,
    /// Poset id of `X(I)` when independent.
    flat: Option<usize>,
}

impl IndexTuple {
    pub fn new(arr: &Arrangement, poset: &IntersectionPoset, indices: Vec<usize>) -> Result<Self> {
        for (k, &i) in indices.iter().enumerate() {
            if i >= arr.len() {
                return Err(Error::IndexOutOfRange { index: i, len: arr.len() });
            }
            if indices[..k].contains(&i) {
                return Err(Error::RepeatedIndex(i));
            }
        }
        let linear: Vec<_> = indices.iter().map(|&i| arr.hyperplane(i).linear().to_vec()).collect();
        let independent = rank(&linear)? == indices.len();
        let flat = if independent {
            let forms: Vec<_> = indices.iter().map(|&i| arr.hyperplane(i).clone()).collect();
            let x = solve_affine(arr.dim(), &forms)?
                .ok_or_else(|| Error::Internal("independent hyperplanes with empty intersection".into()))?;
            let support: Vec<usize> = (0..arr.len())
                .filter(|&h| {
                    let f = arr.hyperplane(h);
                    f.eval(&x.point).is_zero() && x.direction.basis().iter().all(|b| f.eval_linear(b).is_zero())
                })
                .collect();
            let flat = poset
                .by_support(&support)
                .ok_or_else(|| Error::Internal(format!("support {support:?} missing from the poset")))?;
            Some(flat.id)
        } else {
            None
        };
        Ok(IndexTuple { indices, independent, flat })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    /// Poset id of `X(I)`, for independent tuples.
    pub fn flat(&self) -> Option<usize> {
        self.flat
    }
}

/// Increasing index tuples of length `k` drawn from `0..n`.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// `(-1)^{q(ℓ-q)}`.
pub fn orientation_sign(q: usize, dim: usize) -> i64 {
    if (q * (dim - q)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `C_0(I)`: the unique chamber of `A(I)` that misses `F^{q-1}`.
///
/// The flag is re-verified on `A(I)` and uniqueness is checked rather than assumed.
pub fn c_zero(arr: &Arrangement, flag: &Flag, tuple: &IndexTuple) -> Result<SubChamber> {
    if !tuple.independent {
        return Err(Error::DependentIndices(tuple.indices.clone()));
    }
    let q = tuple.len();
    if q == 0 {
        return Ok(SubChamber::whole_space());
    }
    let sub = arr.restrict(&tuple.indices)?;
    let sub_poset = IntersectionPoset::build(&sub);
    let sub_chambers = enumerate_chambers(&sub)?;
    if sub_chambers.len() != 1 << q {
        return Err(Error::Internal(format!("{} chambers for {q} independent hyperplanes", sub_chambers.len())));
    }
    if let Some(v) = verify_flag(&sub, &sub_poset, &sub_chambers, flag)? {
        return Err(Error::FlagViolation(Box::new(v)));
    }
    let mut missing = Vec::new();
    for c in sub_chambers.chambers() {
        if !flag.meets(&c.constraints(&sub), q - 1)? {
            missing.push(c);
        }
    }
    match missing.as_slice() {
        [c] => Ok(SubChamber { subset: tuple.indices.clone(), signs: c.signs.0.clone() }),
        other => Err(Error::Precondition(format!(
            "{} chambers of A({:?}) miss F^{}; the flag needs re-verification",
            other.len(),
            tuple.indices,
            q - 1
        ))),
    }
}

/// Basis `e_1, …, e_ℓ` dual to the flag forms: `dh_j(e_k) = δ_jk`.
/// The first `q` vectors span `τ(F^q)` with coordinates `∂_{h_1}, …, ∂_{h_q}`.
pub fn flag_frame(flag: &Flag) -> Vec<Vec<Rational>> {
    let dim = flag.dim();
    let rows: Vec<Vec<Rational>> = flag.forms().iter().map(|h| h.linear().to_vec()).collect();
    (0..dim)
        .map(|k| {
            let unit: Vec<Rational> =
                (0..dim).map(|j| if j == k { Rational::one() } else { Rational::zero() }).collect();
            solve_square(&rows, &unit).expect("flag forms are independent")
        })
        .collect()
}

/// `ε(I) ∈ {-1, 0, 1}`.
///
/// The Euclidean normals `w_k = ±∇α_{i_k}`, pointing into `C_0(I)`, are
/// projected along `τ(X(I))` onto `τ(F^q)`; `ε` is the sign of the determinant
/// of the projections in the coordinates `∂_{h_1}, …, ∂_{h_q}`.
pub fn epsilon(arr: &Arrangement, flag: &Flag, tuple: &IndexTuple) -> Result<i64> {
    if !tuple.independent {
        return Ok(0);
    }
    let q = tuple.len();
    if q == 0 {
        return Ok(1);
    }
    let c0 = c_zero(arr, flag, tuple)?;
    let frame = flag_frame(flag);
    let alphas: Vec<&[Rational]> = tuple.indices.iter().map(|&i| arr.hyperplane(i).linear()).collect();
    // w - Σ c_k e_k ∈ τ(X(I)) ⟺ dα_m(w) = Σ_k c_k dα_m(e_k) for every m.
    let m: Vec<Vec<Rational>> = alphas
        .iter()
        .map(|a| frame[..q].iter().map(|e| crate::exact::dot(a, e)).collect())
        .collect();
    let mut coords = vec![Vec::with_capacity(q); q];
    for (a, s) in alphas.iter().zip(&c0.signs) {
        let w: Vec<Rational> = match s {
            Sign::Pos => a.to_vec(),
            Sign::Neg => a.iter().map(|x| -x).collect(),
        };
        let rhs: Vec<Rational> = alphas.iter().map(|b| crate::exact::dot(b, &w)).collect();
        let c = solve_square(&m, &rhs)
            .ok_or_else(|| Error::Internal("τ(F^q) and τ(X(I)) are not complementary".into()))?;
        for (j, cj) in c.into_iter().enumerate() {
            coords[j].push(cj);
        }
    }
    let det = determinant(&coords);
    Ok(if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    })
}

/// Intersection number of `cl S(C)` with `σ_{C'}`.
pub fn pairing_sigma_piece(dim: usize, c: &Stratum, c_prime: &Stratum) -> Result<i64> {
    if c.level != c_prime.level {
        return Err(Error::LevelMismatch { left: c.level, right: c_prime.level });
    }
    Ok(if c.tilde.contains(&c_prime.signs) { orientation_sign(c.level, dim) } else { 0 })
}

/// `∫_{σ_{C'}} ω_I`.
pub fn pairing_sigma_omega(arr: &Arrangement, flag: &Flag, c_prime: &Stratum, tuple: &IndexTuple) -> Result<i64> {
    if tuple.len() != c_prime.level {
        return Err(Error::LevelMismatch { left: tuple.len(), right: c_prime.level });
    }
    let eps = epsilon(arr, flag, tuple)?;
    if eps == 0 {
        return Ok(0);
    }
    Ok(if c_zero(arr, flag, tuple)?.contains(&c_prime.signs) { eps } else { 0 })
}

/// An integer combination of piece closures on a single level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BmClass {
    pub level: usize,
    /// Chamber id to nonzero coefficient.
    pub coefficients: BTreeMap<usize, i64>,
}

impl BmClass {
    pub fn zero(level: usize) -> Self {
        BmClass { level, coefficients: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, chamber: usize) -> i64 {
        self.coefficients.get(&chamber).copied().unwrap_or(0)
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, k: i64, other: &BmClass) -> Result<BmClass> {
        if self.level != other.level {
            return Err(Error::LevelMismatch { left: self.level, right: other.level });
        }
        let mut out = self.coefficients.clone();
        for (&c, &v) in &other.coefficients {
            *out.entry(c).or_insert(0) += k * v;
        }
        out.retain(|_, v| *v != 0);
        Ok(BmClass { level: self.level, coefficients: out })
    }

    /// Intersection number with `σ_{C'}`.
    pub fn pair(&self, an: &Analysis, c_prime: &Stratum) -> Result<i64> {
        let mut total = 0;
        for (&c, &k) in &self.coefficients {
            total += k * pairing_sigma_piece(an.dim(), an.stratum(c), c_prime)?;
        }
        Ok(total)
    }
}

/// `φ(ω_I) = (-1)^{q(ℓ-q)} ε(I) Σ [cl S(C)]` over level-`q` chambers
/// `C ⊂ C_0(I)` with `τ(X_C) = τ(X(I))`.
pub fn os_to_bm(an: &Analysis, tuple: &IndexTuple) -> Result<BmClass> {
    let q = tuple.len();
    let eps = epsilon(&an.arrangement, &an.flag, tuple)?;
    if eps == 0 {
        return Ok(BmClass::zero(q));
    }
    let c0 = c_zero(&an.arrangement, &an.flag, tuple)?;
    let direction = &an.poset.flat(tuple.flat.expect("independent")).direction;
    let coefficient = orientation_sign(q, an.dim()) * eps;
    let coefficients = an
        .strata
        .level(q)
        .iter()
        .filter(|s| c0.contains(&s.signs) && &an.poset.flat(s.flat).direction == direction)
        .map(|s| (s.chamber, coefficient))
        .collect();
    Ok(BmClass { level: q, coefficients })
}

/// Outcome of comparing both sides of `I(φ(ω_I), σ_{C'}) = ∫_{σ_{C'}} ω_I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    pub indices: Vec<usize>,
    pub class: BmClass,
    /// `(C', pairing with the class, integral of ω_I)` for every level-`q` chamber.
    pub rows: Vec<(usize, i64, i64)>,
    /// First chamber where the sides differ.
    pub violating: Option<usize>,
}

impl DualCheck {
    pub fn holds(&self) -> bool {
        self.violating.is_none()
    }
}

pub fn dual_basis_check(an: &Analysis, tuple: &IndexTuple) -> Result<DualCheck> {
    let class = os_to_bm(an, tuple)?;
    let mut rows = Vec::new();
    let mut violating = None;
    for s in an.strata.level(tuple.len()) {
        let lhs = class.pair(an, s)?;
        let rhs = pairing_sigma_omega(&an.arrangement, &an.flag, s, tuple)?;
        if lhs != rhs && violating.is_none() {
            violating = Some(s.chamber);
        }
        rows.push((s.chamber, lhs, rhs));
    }
    Ok(DualCheck { indices: tuple.indices.clone(), class, rows, violating })
}

/// Runs the dual check on every increasing index tuple of length at most `ℓ`.
/// Returns the failures; dependent tuples must also yield the zero class.
pub fn dual_basis_check_all(an: &Analysis) -> Result<(usize, Vec<DualCheck>)> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for k in 0..=an.dim().min(an.arrangement.len()) {
        for idx in index_subsets(an.arrangement.len(), k) {
            let tuple = IndexTuple::new(&an.arrangement, &an.poset, idx)?;
            let check = dual_basis_check(an, &tuple)?;
            checked += 1;
            let dependent_nonzero = !tuple.independent && !check.class.is_zero();
            if !check.holds() || dependent_nonzero {
                failures.push(check);
            }
        }
    }
    Ok((checked, failures))
}

/// Intersection numbers `cl S(C) · σ_{C'}` on one level, rows and columns in height order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingMatrix {
    pub level: usize,
    pub chambers: Vec<usize>,
    pub entries: Vec<Vec<i64>>,
}

impl PairingMatrix {
    pub fn build(an: &Analysis, q: usize) -> Result<Self> {
        let strata = an.strata.level(q);
        let entries = strata
            .iter()
            .map(|c| strata.iter().map(|cp| pairing_sigma_piece(an.dim(), c, cp)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(PairingMatrix { level: q, chambers: strata.iter().map(|s| s.chamber).collect(), entries })
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| row[..i].iter().all(|&x| x == 0))
    }

    /// The common diagonal value, if all diagonal entries agree.
    pub fn constant_diagonal(&self) -> Option<i64> {
        let first = *self.entries.first()?.first()?;
        (0..self.len()).all(|i| self.entries[i][i] == first).then_some(first)
    }

    /// Exact determinant.
    pub fn determinant(&self) -> Rational {
        let m: Vec<Vec<Rational>> =
            self.entries.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        if m.is_empty() {
            return Rational::one();
        }
        determinant(&m)
    }

    /// Triangular with diagonal `(-1)^{q(ℓ-q)}` and determinant `±1`.
    pub fn is_unimodular_triangular(&self, dim: usize) -> bool {
        let d = self.determinant();
        self.is_upper_triangular()
            && (self.is_empty() || self.constant_diagonal() == Some(orientation_sign(self.level, dim)))
            && (d == Rational::one() || d == -Rational::one())
    }
}

/// Triples `i < j < k` of pairwise independent hyperplanes meeting in a codimension-2 flat.
pub fn concurrent_triples(arr: &Arrangement) -> Result<Vec<[usize; 3]>> {
    let mut out = Vec::new();
    for t in index_subsets(arr.len(), 3) {
        let lin = |i: usize| arr.hyperplane(i).linear().to_vec();
        let pairwise = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
        let mut ok = true;
        for (a, b) in pairwise {
            ok &= rank(&[lin(a), lin(b)])? == 2;
        }
        if !ok || rank(&[lin(t[0]), lin(t[1]), lin(t[2])])? != 2 {
            continue;
        }
        let forms: Vec<_> = t.iter().map(|&i| arr.hyperplane(i).clone()).collect();
        if solve_affine(arr.dim(), &forms)?.is_some() {
            out.push([t[0], t[1], t[2]]);
        }
    }
    Ok(out)
}

/// `φ(ω_jω_k) - φ(ω_iω_k) + φ(ω_iω_j)` paired with every level-2 `σ_{C'}`.
/// Returns the chambers where the pairing is nonzero.
pub fn os_relation_defects(an: &Analysis, triple: [usize; 3]) -> Result<Vec<(usize, i64)>> {
    let [i, j, k] = triple;
    let class = |a: usize, b: usize| -> Result<BmClass> {
        os_to_bm(an, &IndexTuple::new(&an.arrangement, &an.poset, vec![a, b])?)
    };
    let total = class(j, k)?.add_scaled(-1, &class(i, k)?)?.add_scaled(1, &class(i, j)?)?;
    let mut defects = Vec::new();
    for s in an.strata.level(2) {
        let v = total.pair(an, s)?;
        if v != 0 {
            defects.push((s.chamber, v));
        }
    }
    Ok(defects)
}
