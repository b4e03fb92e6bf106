//! Exact rational linear algebra.
//!
//! Every geometric decision in the crate (signs of forms, ranks, feasibility)
//! is made over [`Rational`] so that equalities like `α(x) = 0` are decidable.

pub mod lp;
pub mod serde_rational;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Builds a rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds `num / den`.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses the canonical `"p/q"` or `"p"` form.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::InvalidRational(s.to_string()))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::InvalidRational(s.to_string()))?;
            if d.is_zero() {
                return Err(Error::InvalidRational(s.to_string()));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(
            t.parse::<BigInt>().map_err(|_| Error::InvalidRational(s.to_string()))?,
        ),
    };
    Ok(parsed)
}

/// Canonical string form: `"p"` when the denominator is one, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Nearest `f64`, for drawing only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn int_vector(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `a + k·b`, componentwise.
pub fn axpy(a: &[Rational], k: &Rational, b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

/// Largest absolute value among the given numbers, or zero.
pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values
        .into_iter()
        .map(|v| v.abs())
        .fold(Rational::zero(), |m, v| if v > m { v } else { m })
}

/// An affine linear form `x ↦ linear·x + constant` on `R^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    linear: Vec<Rational>,
    constant: Rational,
}

impl AffineForm {
    pub fn new(linear: Vec<Rational>, constant: Rational) -> Self {
        AffineForm { linear, constant }
    }

    pub fn from_ints(linear: &[i64], constant: i64) -> Self {
        AffineForm::new(int_vector(linear), int(constant))
    }

    /// The form `x ↦ x_j` on `R^dim`.
    pub fn coordinate(dim: usize, j: usize) -> Self {
        let mut linear = vec![Rational::zero(); dim];
        linear[j] = Rational::one();
        AffineForm::new(linear, Rational::zero())
    }

    pub fn constant_form(dim: usize, c: Rational) -> Self {
        AffineForm::new(vec![Rational::zero(); dim], c)
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn linear(&self) -> &[Rational] {
        &self.linear
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.linear, x) + &self.constant
    }

    /// Value of the linear part on a tangent vector.
    pub fn eval_linear(&self, v: &[Rational]) -> Rational {
        dot(&self.linear, v)
    }

    pub fn is_nonzero(&self) -> bool {
        !self.constant.is_zero() || !is_zero_vector(&self.linear)
    }

    pub fn has_zero_linear_part(&self) -> bool {
        is_zero_vector(&self.linear)
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        AffineForm::new(self.linear.iter().map(|a| a * k).collect(), &self.constant * k)
    }

    pub fn negated(&self) -> Self {
        AffineForm::new(self.linear.iter().map(|a| -a).collect(), -&self.constant)
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, k: &Rational, other: &AffineForm) -> Self {
        AffineForm::new(axpy(&self.linear, k, &other.linear), &self.constant + k * &other.constant)
    }

    /// The form `x ↦ self(x) - c`.
    pub fn shifted(&self, c: &Rational) -> Self {
        AffineForm::new(self.linear.clone(), &self.constant - c)
    }

    /// Appends `extra` zero coefficients, lifting the form to a larger space.
    pub fn lifted(&self, extra: usize) -> Self {
        let mut linear = self.linear.clone();
        linear.extend(std::iter::repeat_n(Rational::zero(), extra));
        AffineForm::new(linear, self.constant.clone())
    }

    /// Coefficient vector `(linear…, constant)`.
    pub fn augmented(&self) -> Vec<Rational> {
        let mut v = self.linear.clone();
        v.push(self.constant.clone());
        v
    }

    /// True iff both forms cut out the same affine hyperplane.
    pub fn same_hyperplane(&self, other: &AffineForm) -> bool {
        rank(&[self.augmented(), other.augmented()]).map(|r| r <= 1).unwrap_or(false)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, a) in self.linear.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let sign = if a.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            let coeff = if mag.is_one() { String::new() } else { format!("{mag}*") };
            if first {
                write!(f, "{sign}{coeff}x{}", j + 1)?;
            } else {
                write!(f, " {sign} {coeff}x{}", j + 1)?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if self.constant.is_positive() {
            write!(f, " + {}", self.constant)
        } else if self.constant.is_negative() {
            write!(f, " - {}", self.constant.abs())
        } else {
            Ok(())
        }
    }
}

fn check_lengths(rows: &[Vec<Rational>], expected: Option<usize>) -> Result<usize> {
    let len = expected.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    for r in rows {
        if r.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: r.len() });
        }
    }
    Ok(len)
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub(crate) fn rref(mut rows: Vec<Vec<Rational>>, ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let k = -rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x += &k * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Exact rank over the rationals.
pub fn rank(vectors: &[Vec<Rational>]) -> Result<usize> {
    let n = check_lengths(vectors, None)?;
    Ok(rref(vectors.to_vec(), n).1.len())
}

/// A linear subspace of `R^ℓ` through the origin.
///
/// The basis is stored in reduced row echelon form, so two subspaces are equal
/// exactly when their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSubspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl LinearSubspace {
    pub fn zero(ambient: usize) -> Self {
        LinearSubspace { ambient, basis: Vec::new() }
    }

    pub fn whole(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|j| {
                let mut e = vec![Rational::zero(); ambient];
                e[j] = Rational::one();
                e
            })
            .collect();
        LinearSubspace { ambient, basis }
    }

    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        check_lengths(vectors, Some(ambient))?;
        let (basis, _) = rref(vectors.to_vec(), ambient);
        Ok(LinearSubspace { ambient, basis })
    }

    /// The common kernel `{v : a·v = 0 for every row a}`.
    pub fn kernel(ambient: usize, rows: &[Vec<Rational>]) -> Result<Self> {
        check_lengths(rows, Some(ambient))?;
        let (reduced, pivots) = rref(rows.to_vec(), ambient);
        let mut vectors = Vec::new();
        for free in (0..ambient).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); ambient];
            v[free] = Rational::one();
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            vectors.push(v);
        }
        LinearSubspace::span(ambient, &vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        if is_zero_vector(v) {
            return true;
        }
        // Reduce against the echelon basis.
        let mut rest = v.to_vec();
        for row in &self.basis {
            let pc = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !rest[pc].is_zero() {
                let k = -rest[pc].clone();
                rest = axpy(&rest, &k, row);
            }
        }
        is_zero_vector(&rest)
    }

    pub fn contains_subspace(&self, other: &LinearSubspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }
}

/// Solution set of a system of affine equations: `point + direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<Rational>,
    pub direction: LinearSubspace,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.direction.dim()
    }
}

/// Solves `f(x) = 0` for every form. `None` when the system is inconsistent.
pub fn solve_affine(dim: usize, forms: &[AffineForm]) -> Result<Option<AffineSubspace>> {
    for f in forms {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: f.dim() });
        }
    }
    // Augmented rows [a | -c].
    let rows: Vec<Vec<Rational>> = forms
        .iter()
        .map(|f| {
            let mut r = f.linear().to_vec();
            r.push(-f.constant().clone());
            r
        })
        .collect();
    let (reduced, pivots) = rref(rows, dim + 1);
    if pivots.last() == Some(&dim) {
        return Ok(None);
    }
    let mut point = vec![Rational::zero(); dim];
    for (row, &pc) in reduced.iter().zip(&pivots) {
        point[pc] = row[dim].clone();
    }
    let linear: Vec<Vec<Rational>> = forms.iter().map(|f| f.linear().to_vec()).collect();
    let direction = LinearSubspace::kernel(dim, &linear)?;
    Ok(Some(AffineSubspace { point, direction }))
}

/// Determinant of a square matrix by exact elimination.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let k = -(&m[i][c] * &inv);
            let pivot_row = m[c].clone();
            m[i] = axpy(&m[i], &k, &pivot_row);
        }
    }
    det
}

/// Solves `M y = b` for square invertible `M`; `None` when singular.
pub fn solve_square(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = matrix.len();
    let rows: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (reduced, pivots) = rref(rows, n + 1);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        int_vector(xs)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[]).unwrap(), 0);
        assert_eq!(rank(&[v(&[1, 0]), v(&[0, 1])]).unwrap(), 2);
        assert_eq!(rank(&[v(&[1, 2]), v(&[2, 4])]).unwrap(), 1);
        assert!(matches!(rank(&[v(&[1, 2]), v(&[1])]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn solve_affine_examples() {
        let all = solve_affine(2, &[]).unwrap().unwrap();
        assert_eq!(all.dim(), 2);
        let x0 = AffineForm::from_ints(&[1], 0);
        let x1 = AffineForm::from_ints(&[1], -1);
        assert!(solve_affine(1, &[x0.clone(), x1]).unwrap().is_none());
        let p = solve_affine(1, &[x0]).unwrap().unwrap();
        assert_eq!(p.dim(), 0);
        assert_eq!(p.point, v(&[0]));
    }

    #[test]
    fn solve_affine_mismatch() {
        let f = AffineForm::from_ints(&[1, 2], 0);
        assert!(solve_affine(3, &[f]).is_err());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn subspace_membership_and_equality() {
        let s = LinearSubspace::span(3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        assert!(s.contains(&v(&[1, 2, 1])));
        assert!(!s.contains(&v(&[0, 0, 1])));
        let t = LinearSubspace::span(3, &[v(&[1, 2, 1]), v(&[1, 0, -1])]).unwrap();
        assert_eq!(s, t);
        let k = LinearSubspace::kernel(3, &[v(&[1, -1, 1])]).unwrap();
        assert_eq!(k, s);
    }

    #[test]
    fn determinant_small() {
        let m = vec![v(&[2, 1]), v(&[1, 3])];
        assert_eq!(determinant(&m), int(5));
        let m = vec![v(&[0, 1]), v(&[1, 0])];
        assert_eq!(determinant(&m), int(-1));
        assert_eq!(determinant(&[v(&[1, 2]), v(&[2, 4])]), int(0));
    }

    #[test]
    fn form_display() {
        let f = AffineForm::from_ints(&[1, -1], 0);
        assert_eq!(f.to_string(), "x1 - x2");
        let g = AffineForm::from_ints(&[0, 2], -3);
        assert_eq!(g.to_string(), "2*x2 - 3");
        assert!(f.same_hyperplane(&f.scaled(&int(-3))));
        assert!(!f.same_hyperplane(&g));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_form(dim: usize) -> impl Strategy<Value = AffineForm> {
            (prop::collection::vec(-4i64..=4, dim), -6i64..=6)
                .prop_map(|(l, c)| AffineForm::from_ints(&l, c))
        }

        proptest! {
            #[test]
            fn solutions_zero_every_form(forms in prop::collection::vec(small_form(3), 0..4)) {
                if let Some(sol) = solve_affine(3, &forms).unwrap() {
                    for f in &forms {
                        prop_assert!(f.eval(&sol.point).is_zero());
                        for b in sol.direction.basis() {
                            prop_assert!(f.eval_linear(b).is_zero());
                        }
                    }
                }
            }

            #[test]
            fn rational_string_roundtrip(n in -10_000i64..10_000, d in 1i64..500) {
                let r = ratio(n, d);
                prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
            }
        }
    }
}
