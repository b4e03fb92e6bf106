//! Seeded random arrangements with deliberate parallel and concurrent structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Arrangement;
use crate::exact::{dot, int, int_vector, AffineForm};

/// A random arrangement of `n` distinct hyperplanes in `R^dim`.
///
/// Coefficients are small integers. Roughly a third of the hyperplanes are
/// translates of an earlier one and a third pass through one of two anchor
/// points, so parallel classes and non-generic intersections show up often.
pub fn random_arrangement(dim: usize, n: usize, seed: u64) -> Arrangement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchors: Vec<Vec<i64>> = (0..2).map(|_| (0..dim).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let mut forms: Vec<AffineForm> = Vec::with_capacity(n);
    let mut attempts = 0;
    while forms.len() < n {
        attempts += 1;
        assert!(attempts < 10_000, "could not place {n} distinct hyperplanes in dimension {dim}");
        let roll = rng.gen_range(0..3);
        let candidate = if roll == 0 && !forms.is_empty() {
            let base = &forms[rng.gen_range(0..forms.len())];
            AffineForm::new(base.linear().to_vec(), int(rng.gen_range(-6..=6)))
        } else {
            let linear: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            let constant = if roll == 1 {
                let a = &anchors[rng.gen_range(0..anchors.len())];
                -dot(&int_vector(&linear), &int_vector(a))
            } else {
                int(rng.gen_range(-6..=6))
            };
            AffineForm::new(int_vector(&linear), constant)
        };
        if candidate.has_zero_linear_part() || forms.iter().any(|f| f.same_hyperplane(&candidate)) {
            continue;
        }
        forms.push(candidate);
    }
    Arrangement::new(dim, forms).expect("candidates were validated")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = random_arrangement(3, 7, 42);
        assert_eq!(a, random_arrangement(3, 7, 42));
        assert_eq!(a.len(), 7);
        assert_eq!(random_arrangement(2, 0, 1).len(), 0);
    }
}
