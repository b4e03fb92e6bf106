//! Minimal semialgebraic partitions of complexified real hyperplane arrangement
//! complements.
//!
//! Given a real arrangement `A` with rational coefficients and a generic flag,
//! the complement `M(A) = C^ℓ \ ∪ H_C` splits into contractible pieces `S(C)`,
//! one per chamber. The closures of the pieces at each level form a basis of
//! Borel-Moore homology, and the logarithmic cohomology generators map onto
//! explicit signed sums of them.
//!
//! The crate is organized bottom-up:
//!
//! * [`exact`]: rationals, exact linear algebra and a simplex solver;
//! * [`arrangement`]: hyperplanes, the intersection poset and its Möbius function;
//! * [`chambers`]: chamber enumeration as sign vectors;
//! * [`flag`]: generic flags, their verification and generation;
//! * [`stratify`]: chamber levels, minimal flats `X_C`, base points, the order;
//! * [`partition`]: the pieces `S(C)`, point classification, verification harnesses;
//! * [`homology`]: orientation signs, intersection pairings, the cohomology map.
//!
//! [`Analysis`] bundles the whole pipeline for one arrangement and flag.

pub mod analysis;
pub mod arrangement;
pub mod chambers;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod flag;
pub mod homology;
pub mod io;
pub mod partition;
pub mod random;
pub mod stratify;

pub use analysis::Analysis;
pub use arrangement::{Arrangement, Flat, IntersectionPoset};
pub use chambers::{Chamber, ChamberSet, Sign, SignVector, SubChamber};
pub use error::{Error, Result};
pub use exact::{AffineForm, LinearSubspace, Rational};
pub use flag::{Flag, Violation};
pub use homology::{BmClass, IndexTuple, PairingMatrix};
pub use partition::{GaussPoint, PieceAssignment};
pub use stratify::{Stratification, Stratum};
