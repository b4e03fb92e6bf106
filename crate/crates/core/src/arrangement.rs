//! Affine hyperplane arrangements and their intersection posets.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{axpy, AffineForm, LinearSubspace, Rational};

/// An ordered list of distinct affine hyperplanes `H_i = {α_i = 0}` in `R^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<AffineForm>,
    names: Vec<String>,
}

impl Arrangement {
    /// Builds an arrangement with default names `H1, H2, …`.
    pub fn new(dim: usize, hyperplanes: Vec<AffineForm>) -> Result<Self> {
        let names = (1..=hyperplanes.len()).map(|i| format!("H{i}")).collect();
        Self::with_names(dim, hyperplanes, names)
    }

    pub fn with_names(dim: usize, hyperplanes: Vec<AffineForm>, names: Vec<String>) -> Result<Self> {
        if names.len() != hyperplanes.len() {
            return Err(Error::InvalidArgument(format!(
                "{} names for {} hyperplanes",
                names.len(),
                hyperplanes.len()
            )));
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
            if h.has_zero_linear_part() {
                return Err(Error::ZeroLinearPart { index: i });
            }
            if let Some(j) = hyperplanes[..i].iter().position(|g| g.same_hyperplane(h)) {
                return Err(Error::DuplicateHyperplane { first: j, second: i });
            }
        }
        Ok(Arrangement { dim, hyperplanes, names })
    }

    pub fn empty(dim: usize) -> Self {
        Arrangement { dim, hyperplanes: Vec::new(), names: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[AffineForm] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &AffineForm {
        &self.hyperplanes[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Hyperplanes whose linear part annihilates `v`, i.e. `v ∈ τ(H)`.
    /// The zero vector is parallel to every hyperplane.
    pub fn parallel_to_vector(&self, v: &[Rational]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.hyperplanes[i].eval_linear(v).is_zero()).collect()
    }

    /// `A_[X]`: hyperplanes whose direction space contains `τ(X)`.
    pub fn parallel_class(&self, flat: &Flat) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                flat.direction.basis().iter().all(|b| self.hyperplanes[i].eval_linear(b).is_zero())
            })
            .collect()
    }

    /// Hyperplanes meeting the closed segment `[p1, p2]`.
    pub fn sep_points(&self, p1: &[Rational], p2: &[Rational]) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let a = self.hyperplanes[i].eval(p1);
                let b = self.hyperplanes[i].eval(p2);
                a.is_zero() || b.is_zero() || a.is_positive() != b.is_positive()
            })
            .collect()
    }

    /// Hyperplanes through the point `x`.
    pub fn through_point(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.hyperplanes[i].eval(x).is_zero()).collect()
    }

    /// The subarrangement on the given indices, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Arrangement> {
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange { index: i, len: self.len() });
            }
        }
        Ok(Arrangement {
            dim: self.dim,
            hyperplanes: indices.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
        })
    }

    fn contains_flat(&self, i: usize, point: &[Rational], direction: &LinearSubspace) -> bool {
        let h = &self.hyperplanes[i];
        h.eval(point).is_zero() && direction.basis().iter().all(|b| h.eval_linear(b).is_zero())
    }
}

/// An element of `L(A)`, or the ambient space itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub id: usize,
    /// Every hyperplane containing the flat, sorted.
    pub support: Vec<usize>,
    pub point: Vec<Rational>,
    pub direction: LinearSubspace,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.direction.dim()
    }

    pub fn codim(&self) -> usize {
        self.direction.ambient_dim() - self.dim()
    }

    pub fn is_ambient(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains_point(&self, arr: &Arrangement, x: &[Rational]) -> bool {
        self.support.iter().all(|&i| arr.hyperplane(i).eval(x).is_zero())
    }
}

/// The intersection poset `L(A)` with the ambient space as its unique codimension-0 flat.
#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    dim: usize,
    flats: Vec<Flat>,
    by_support: HashMap<Vec<usize>, usize>,
    moebius: Vec<i64>,
}

impl IntersectionPoset {
    /// Breadth-first closure of the ambient space under intersection with hyperplanes.
    pub fn build(arr: &Arrangement) -> Self {
        let dim = arr.dim();
        let ambient = Flat {
            id: 0,
            support: Vec::new(),
            point: vec![Rational::zero(); dim],
            direction: LinearSubspace::whole(dim),
        };
        let mut flats = vec![ambient];
        let mut by_support = HashMap::from([(Vec::new(), 0)]);
        let mut frontier = vec![0];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &fid in &frontier {
                for h in 0..arr.len() {
                    if flats[fid].support.contains(&h) {
                        continue;
                    }
                    let Some((point, direction)) = intersect_with(&flats[fid], arr.hyperplane(h)) else {
                        continue;
                    };
                    let support: Vec<usize> =
                        (0..arr.len()).filter(|&i| arr.contains_flat(i, &point, &direction)).collect();
                    if by_support.contains_key(&support) {
                        continue;
                    }
                    let id = flats.len();
                    by_support.insert(support.clone(), id);
                    flats.push(Flat { id, support, point, direction });
                    next.push(id);
                }
            }
            frontier = next;
        }
        let moebius = moebius_values(&flats);
        IntersectionPoset { dim, flats, by_support, moebius }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, id: usize) -> &Flat {
        &self.flats[id]
    }

    pub fn ambient(&self) -> &Flat {
        &self.flats[0]
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Looks up a flat by its (closed) support set.
    pub fn by_support(&self, support: &[usize]) -> Option<&Flat> {
        self.by_support.get(support).map(|&i| &self.flats[i])
    }

    pub fn flats_of_dim(&self, d: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.dim() == d)
    }

    /// `μ(R^ℓ, X)`.
    pub fn moebius(&self, id: usize) -> i64 {
        self.moebius[id]
    }

    /// `X ⊆ Y` as sets.
    pub fn is_below(&self, x: usize, y: usize) -> bool {
        let sx = &self.flats[x].support;
        self.flats[y].support.iter().all(|h| sx.contains(h))
    }

    /// `b_q = Σ_{codim X = q} |μ(X)|` for `q = 0..=ℓ`.
    pub fn betti_numbers(&self) -> Vec<u64> {
        let mut b = vec![0u64; self.dim + 1];
        for f in &self.flats {
            b[f.codim()] += self.moebius[f.id].unsigned_abs();
        }
        b
    }

    /// `Σ_X |μ(X)|`, the number of chambers.
    pub fn total_moebius(&self) -> u64 {
        self.moebius.iter().map(|m| m.unsigned_abs()).sum()
    }
}

fn intersect_with(flat: &Flat, h: &AffineForm) -> Option<(Vec<Rational>, LinearSubspace)> {
    let basis = flat.direction.basis();
    let slopes: Vec<Rational> = basis.iter().map(|b| h.eval_linear(b)).collect();
    let j = slopes.iter().position(|s| !s.is_zero())?;
    let value = h.eval(&flat.point);
    let point = axpy(&flat.point, &-(value / &slopes[j]), &basis[j]);
    let rest: Vec<Vec<Rational>> = basis
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(i, b)| axpy(b, &-(&slopes[i] / &slopes[j]), &basis[j]))
        .collect();
    let direction = LinearSubspace::span(flat.direction.ambient_dim(), &rest).expect("consistent lengths");
    Some((point, direction))
}

fn moebius_values(flats: &[Flat]) -> Vec<i64> {
    // Flats come out of the BFS in nondecreasing codimension.
    let mut mu = vec![0i64; flats.len()];
    for (i, x) in flats.iter().enumerate() {
        if x.support.is_empty() {
            mu[i] = 1;
            continue;
        }
        let sum: i64 = flats[..i]
            .iter()
            .filter(|y| y.support.len() < x.support.len() && y.support.iter().all(|h| x.support.contains(h)))
            .map(|y| mu[y.id])
            .sum();
        mu[i] = -sum;
    }
    mu
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_vector;
    use crate::fixtures;

    #[test]
    fn point_in_line_poset() {
        let fx = fixtures::point_in_line();
        let p = IntersectionPoset::build(&fx.arrangement);
        assert_eq!(p.len(), 2);
        assert_eq!(p.betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn three_lines_poset() {
        let fx = fixtures::three_lines();
        let p = IntersectionPoset::build(&fx.arrangement);
        let mut supports: Vec<Vec<usize>> = p.flats().iter().map(|f| f.support.clone()).collect();
        supports.sort();
        assert_eq!(supports, vec![vec![], vec![0], vec![0, 1], vec![0, 2], vec![1], vec![2]]);
        assert_eq!(p.betti_numbers(), vec![1, 3, 2]);
        assert_eq!(p.total_moebius(), 6);
    }

    #[test]
    fn empty_arrangement_poset() {
        let p = IntersectionPoset::build(&Arrangement::empty(3));
        assert_eq!(p.len(), 1);
        assert_eq!(p.betti_numbers(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn independent_hyperplanes_give_binomials() {
        let arr = Arrangement::new(
            3,
            vec![
                AffineForm::from_ints(&[1, 0, 0], 0),
                AffineForm::from_ints(&[0, 1, 0], -1),
                AffineForm::from_ints(&[1, 1, 1], 2),
            ],
        )
        .unwrap();
        assert_eq!(IntersectionPoset::build(&arr).betti_numbers(), vec![1, 3, 3, 1]);
    }

    #[test]
    fn concurrent_lines_moebius() {
        // Three lines through the origin: the point has μ = 2.
        let arr = Arrangement::new(
            2,
            vec![
                AffineForm::from_ints(&[1, 0], 0),
                AffineForm::from_ints(&[0, 1], 0),
                AffineForm::from_ints(&[1, 1], 0),
            ],
        )
        .unwrap();
        let p = IntersectionPoset::build(&arr);
        let origin = p.by_support(&[0, 1, 2]).unwrap();
        assert_eq!(p.moebius(origin.id), 2);
        assert_eq!(p.betti_numbers(), vec![1, 3, 2]);
    }

    #[test]
    fn parallel_classes_in_three_lines() {
        let fx = fixtures::three_lines();
        let p = IntersectionPoset::build(&fx.arrangement);
        let arr = &fx.arrangement;
        assert_eq!(arr.parallel_class(p.by_support(&[0]).unwrap()), vec![0]);
        assert_eq!(arr.parallel_class(p.by_support(&[1]).unwrap()), vec![1, 2]);
        assert_eq!(arr.parallel_class(p.ambient()), Vec::<usize>::new());
        assert_eq!(arr.parallel_class(p.by_support(&[0, 1]).unwrap()), vec![0, 1, 2]);
    }

    #[test]
    fn parallel_to_vector_examples() {
        let fx = fixtures::three_lines();
        let arr = &fx.arrangement;
        assert_eq!(arr.parallel_to_vector(&int_vector(&[1, 1])), vec![0]);
        assert_eq!(arr.parallel_to_vector(&int_vector(&[0, 0])), vec![0, 1, 2]);
        assert!(arr.parallel_to_vector(&int_vector(&[1, 0])).is_empty());
    }

    #[test]
    fn sep_points_examples() {
        let fx = fixtures::point_in_line();
        let arr = &fx.arrangement;
        assert_eq!(arr.sep_points(&int_vector(&[-1]), &int_vector(&[1])), vec![0]);
        assert!(arr.sep_points(&int_vector(&[2]), &int_vector(&[2])).is_empty());
        assert_eq!(arr.sep_points(&int_vector(&[0]), &int_vector(&[3])), vec![0]);
    }

    #[test]
    fn rejects_degenerate_input() {
        let dup = Arrangement::new(
            1,
            vec![AffineForm::from_ints(&[1], -1), AffineForm::from_ints(&[-2], 2)],
        );
        assert!(matches!(dup, Err(Error::DuplicateHyperplane { first: 0, second: 1 })));
        let zero = Arrangement::new(2, vec![AffineForm::from_ints(&[0, 0], 1)]);
        assert!(matches!(zero, Err(Error::ZeroLinearPart { index: 0 })));
    }

    mod props {
        use super::*;
        use crate::random::random_arrangement;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn poset_structure(seed in any::<u64>(), dim in 1usize..=3, n in 0usize..=6) {
                let arr = random_arrangement(dim, n, seed);
                let p = IntersectionPoset::build(&arr);
                prop_assert_eq!(p.moebius(0), 1);
                for x in p.flats() {
                    // Supports are closed and the parallel class contains the support.
                    let class = arr.parallel_class(x);
                    prop_assert!(x.support.iter().all(|h| class.contains(h)));
                    prop_assert_eq!(x.codim(), crate::exact::rank(
                        &x.support.iter().map(|&h| arr.hyperplane(h).linear().to_vec()).collect::<Vec<_>>()
                    ).unwrap());
                    for y in p.flats() {
                        if p.is_below(x.id, y.id) {
                            prop_assert!(y.support.iter().all(|h| x.support.contains(h)));
                            prop_assert!(x.dim() <= y.dim());
                        }
                    }
                }
            }

            #[test]
            fn sep_is_symmetric(
                seed in any::<u64>(),
                a in prop::collection::vec(-6i64..=6, 2),
                b in prop::collection::vec(-6i64..=6, 2),
            ) {
                let arr = random_arrangement(2, 5, seed);
                let (a, b) = (int_vector(&a), int_vector(&b));
                prop_assert_eq!(arr.sep_points(&a, &b), arr.sep_points(&b, &a));
            }
        }
    }
}
