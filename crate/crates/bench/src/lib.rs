//! Shared inputs for the benchmarks.

use hyperpart::random::random_arrangement;
use hyperpart::{Analysis, Arrangement};

/// Seeded benchmark arrangement of `n` hyperplanes in `R^dim`.
pub fn arrangement(dim: usize, n: usize) -> Arrangement {
    random_arrangement(dim, n, 0xBE7C + (dim * 31 + n) as u64)
}

/// The same arrangement with a generated flag and its stratification.
pub fn analysis(dim: usize, n: usize) -> Analysis {
    Analysis::with_generated_flag(arrangement(dim, n), 1).expect("benchmark flag generates")
}
