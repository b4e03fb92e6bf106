//! The pieces `S(C)` of the complexified complement.
//!
//! A point `x + √-1·v` lies in `S(C)` iff `v ∈ τ(X_C)` and `v ∉ τ(H)` for every
//! hyperplane `H` meeting the closed segment `[p_C, x]`. Every point of the
//! complement lies in exactly one piece; [`classify`] finds it twice, once by
//! testing every piece and once by the constructive recipe (parallel class of
//! `v`, its chamber around `x`, lowest vertex on the flag), and insists that
//! both answers agree.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::arrangement::{Arrangement, IntersectionPoset};
use crate::chambers::{locate_in_subarrangement, PointLocation};
use crate::error::{Error, Result};
use crate::exact::lp::LpOutcome;
use crate::exact::{axpy, int, max_abs, ratio, serde_rational, Rational};
use crate::stratify::Stratum;

/// The complex point `x + √-1·v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussPoint {
    #[serde(with = "serde_rational::vec")]
    pub x: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    pub v: Vec<Rational>,
}

impl GaussPoint {
    pub fn new(x: Vec<Rational>, v: Vec<Rational>) -> Self {
        GaussPoint { x, v }
    }

    pub fn real(x: Vec<Rational>) -> Self {
        let v = vec![Rational::zero(); x.len()];
        GaussPoint { x, v }
    }

    /// The first hyperplane whose complexification contains the point, if any.
    pub fn hyperplane_hit(&self, arr: &Arrangement) -> Option<usize> {
        (0..arr.len()).find(|&i| {
            let h = arr.hyperplane(i);
            h.eval(&self.x).is_zero() && h.eval_linear(&self.v).is_zero()
        })
    }

    pub fn in_complement(&self, arr: &Arrangement) -> bool {
        self.hyperplane_hit(arr).is_none()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        for part in [&self.x, &self.v] {
            if part.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: part.len() });
            }
        }
        Ok(())
    }
}

/// Membership in `S(C)`.
pub fn in_piece(arr: &Arrangement, poset: &IntersectionPoset, stratum: &Stratum, p: &GaussPoint) -> bool {
    poset.flat(stratum.flat).direction.contains(&p.v)
        && arr
            .sep_points(&stratum.base_point, &p.x)
            .into_iter()
            .all(|h| !arr.hyperplane(h).eval_linear(&p.v).is_zero())
}

/// Why a point belongs to its piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// `Sep(p_C, x)`; `v` is transverse to each of these.
    pub separating: Vec<usize>,
    /// Support of `X_C`; `v` is tangent to each of these.
    pub flat_support: Vec<usize>,
    /// `A_[v]`, the hyperplanes parallel to `v`.
    pub parallel_to_v: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieceAssignment {
    pub point: GaussPoint,
    pub chamber: usize,
    pub level: usize,
    pub witness: Witness,
    /// Set when the constructive route could not run and only brute force decided.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Outcome of the constructive classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constructive {
    Found(usize),
    /// The recipe hit a step it could not certify.
    Fallback(String),
}

/// Every chamber whose piece contains `p`.
pub fn classify_brute(an: &Analysis, p: &GaussPoint) -> Vec<usize> {
    let mut hits: Vec<usize> = an
        .strata
        .iter()
        .filter(|s| in_piece(&an.arrangement, &an.poset, s, p))
        .map(|s| s.chamber)
        .collect();
    hits.sort_unstable();
    hits
}

/// The constructive recipe: `D ∈ ch(A_[v])` around `x`, its level `q`, the
/// `h_q`-lowest vertex of `cl(D ∩ F^q)`, the flat `X` through it, and finally
/// the chamber `C ⊂ D` at level `q` with `X_C = X`.
pub fn classify_constructive(an: &Analysis, p: &GaussPoint) -> Result<Constructive> {
    let arr = &an.arrangement;
    let parallel = arr.parallel_to_vector(&p.v);
    let d = match locate_in_subarrangement(arr, &parallel, &p.x) {
        PointLocation::Interior(d) => d,
        PointLocation::OnBoundary(hs) => return Err(Error::NotInComplement { hyperplane: hs[0] }),
    };
    let region = d.constraints(arr);
    let q = an.flag.level_of(&region)?;
    let flat = if q == 0 {
        an.poset.ambient()
    } else {
        let vertex = match an.flag.minimize_height(&region, q)? {
            LpOutcome::Optimal { point, .. } => point,
            other => return Ok(Constructive::Fallback(format!("lowest vertex search on level {q} returned {other:?}"))),
        };
        let support = arr.through_point(&vertex);
        match an.poset.by_support(&support) {
            Some(f) if f.dim() + q == arr.dim() => f,
            _ => return Ok(Constructive::Fallback(format!("vertex support {support:?} is not a flat of dimension ℓ - {q}"))),
        }
    };
    if !flat.direction.contains(&p.v) {
        return Ok(Constructive::Fallback(format!("v is not tangent to the flat {:?}", flat.support)));
    }
    let found: Vec<usize> = an
        .strata
        .level(q)
        .iter()
        .filter(|s| s.flat == flat.id && d.contains(&s.signs))
        .map(|s| s.chamber)
        .collect();
    match found.as_slice() {
        [c] => Ok(Constructive::Found(*c)),
        other => Ok(Constructive::Fallback(format!("{} level-{q} chambers over {:?} inside D", other.len(), flat.support))),
    }
}

/// Assigns a complement point to its unique piece, cross-checking both routes.
pub fn classify(an: &Analysis, p: &GaussPoint) -> Result<PieceAssignment> {
    p.check_dim(an.dim())?;
    if let Some(h) = p.hyperplane_hit(&an.arrangement) {
        return Err(Error::NotInComplement { hyperplane: h });
    }
    let brute = classify_brute(an, p);
    let constructive = classify_constructive(an, p)?;
    let (chamber, diagnostic) = match (&brute[..], constructive) {
        ([b], Constructive::Found(c)) if *b == c => (c, None),
        ([b], Constructive::Fallback(why)) => (*b, Some(why)),
        (_, Constructive::Found(c)) => return Err(Error::RouteDisagreement { brute, constructive: c }),
        (_, Constructive::Fallback(why)) => {
            return Err(Error::Internal(format!("point lies in {} pieces; constructive route: {why}", brute.len())))
        }
    };
    let stratum = an.stratum(chamber);
    Ok(PieceAssignment {
        point: p.clone(),
        chamber,
        level: stratum.level,
        witness: Witness {
            separating: an.arrangement.sep_points(&stratum.base_point, &p.x),
            flat_support: an.poset.flat(stratum.flat).support.clone(),
            parallel_to_v: an.arrangement.parallel_to_vector(&p.v),
        },
        diagnostic,
    })
}

/// Exact check that the segment from `p_C` to `p` avoids every complexified
/// hyperplane. Returns the first hyperplane hit and the parameter `t`, if any.
pub fn segment_hit(arr: &Arrangement, stratum: &Stratum, p: &GaussPoint) -> Option<(usize, Rational)> {
    for (i, h) in arr.hyperplanes().iter().enumerate() {
        // α(p(t)) = (1 - t)·α(p_C) + t·α(x) + √-1·t·α_lin(v).
        if !h.eval_linear(&p.v).is_zero() {
            // The imaginary part vanishes only at t = 0, where the real part is α(p_C) ≠ 0.
            continue;
        }
        let a = h.eval(&stratum.base_point);
        let b = h.eval(&p.x);
        if a == b {
            if a.is_zero() {
                return Some((i, Rational::zero()));
            }
            continue;
        }
        let t = &a / (&a - &b);
        if !t.is_negative() && t <= Rational::one() {
            return Some((i, t));
        }
    }
    None
}

/// Star-shapedness of `S(C)` about `p_C`, checked along the segment to `p`.
pub fn verify_star_shaped(an: &Analysis, stratum: &Stratum, p: &GaussPoint) -> Result<bool> {
    if !in_piece(&an.arrangement, &an.poset, stratum, p) {
        return Err(Error::Precondition(format!("point is not in S(C) for chamber {}", stratum.chamber)));
    }
    Ok(segment_hit(&an.arrangement, stratum, p).is_none())
}

/// Whether `x` lies in the real part of `S(C)`, which is `C̃`.
pub fn real_part_piece(arr: &Arrangement, stratum: &Stratum, x: &[Rational]) -> Result<bool> {
    match locate_in_subarrangement(arr, &stratum.tilde.subset, x) {
        PointLocation::Interior(sub) => Ok(sub.signs == stratum.tilde.signs),
        PointLocation::OnBoundary(hyperplanes) => Err(Error::OnBoundary { hyperplanes }),
    }
}

/// A point `x + √-1·v ∈ S(C)` over a given real part `x ∈ C̃`, with `v` in
/// `τ(X_C)` but off `τ(H)` for every hyperplane not parallel to `X_C`.
pub fn real_part_certificate(
    arr: &Arrangement,
    poset: &IntersectionPoset,
    stratum: &Stratum,
    x: &[Rational],
) -> Result<Option<GaussPoint>> {
    if !real_part_piece(arr, stratum, x)? {
        return Ok(None);
    }
    let basis = poset.flat(stratum.flat).direction.basis();
    let others: Vec<usize> = (0..arr.len()).filter(|h| !stratum.tilde.subset.contains(h)).collect();
    // v(t) = Σ t^j b_j is a polynomial curve; each transverse H vanishes on finitely many t.
    let mut t = 1i64;
    loop {
        let mut v = vec![Rational::zero(); arr.dim()];
        let mut power = Rational::one();
        for b in basis {
            v = axpy(&v, &power, b);
            power *= int(t);
        }
        if others.iter().all(|&h| !arr.hyperplane(h).eval_linear(&v).is_zero()) {
            let p = GaussPoint::new(x.to_vec(), v);
            debug_assert!(in_piece(arr, poset, stratum, &p));
            return Ok(Some(p));
        }
        t += 1;
    }
}

/// Seeded sampler of rational points in the complement.
///
/// Real and imaginary parts are integer vectors in `[-B, B]^ℓ` with
/// `B = 16·(1 + max |coefficient|)`. Half of the imaginary parts are instead
/// drawn from the direction space of a random flat, and a quarter of the real
/// parts from a random flat, so every piece and every boundary situation is
/// hit with positive probability. Points outside the complement are nudged by
/// dyadic offsets until they land in it.
pub struct PointSampler<'a> {
    arr: &'a Arrangement,
    poset: &'a IntersectionPoset,
    bound: i64,
}

impl<'a> PointSampler<'a> {
    pub fn new(arr: &'a Arrangement, poset: &'a IntersectionPoset) -> Self {
        let m = max_abs(arr.hyperplanes().iter().flat_map(|h| h.linear().iter().chain([h.constant()])));
        let m: i64 = m.ceil().to_integer().try_into().unwrap_or(i64::MAX / 64);
        PointSampler { arr, poset, bound: 16 * (1 + m) }
    }

    fn integer_vector(&self, rng: &mut ChaCha8Rng) -> Vec<Rational> {
        (0..self.arr.dim()).map(|_| int(rng.gen_range(-self.bound..=self.bound))).collect()
    }

    fn on_random_flat(&self, rng: &mut ChaCha8Rng, with_point: bool) -> Vec<Rational> {
        let flat = &self.poset.flats()[rng.gen_range(0..self.poset.len())];
        let mut out = if with_point { flat.point.clone() } else { vec![Rational::zero(); self.arr.dim()] };
        for b in flat.direction.basis() {
            out = axpy(&out, &int(rng.gen_range(-4..=4)), b);
        }
        out
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> GaussPoint {
        let x = if rng.gen_range(0..4) == 0 { self.on_random_flat(rng, true) } else { self.integer_vector(rng) };
        let v = if rng.gen_bool(0.5) { self.on_random_flat(rng, false) } else { self.integer_vector(rng) };
        let mut p = GaussPoint::new(x, v);
        let mut k = 1u32;
        while !p.in_complement(self.arr) {
            let den = 1i64 << k.min(40);
            let nudge: Vec<Rational> = (0..self.arr.dim()).map(|_| ratio(rng.gen_range(-den..=den), den)).collect();
            p.x = axpy(&p.x, &Rational::one(), &nudge);
            k += 1;
        }
        p
    }
}

/// A sample on which the partition theorem or route agreement failed.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub point: GaussPoint,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub samples: usize,
    /// `(chamber id, number of samples in its piece)` in chamber order.
    pub counts: Vec<(usize, usize)>,
    pub fallbacks: usize,
    pub violations: Vec<Counterexample>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `count` complement points and checks that each lies in exactly one
/// piece and that both classification routes agree.
pub fn verify_partition(an: &Analysis, count: usize, seed: u64) -> PartitionReport {
    let sampler = PointSampler::new(&an.arrangement, &an.poset);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<GaussPoint> = (0..count).map(|_| sampler.sample(&mut rng)).collect();
    let outcomes: Vec<Result<PieceAssignment>> = points.par_iter().map(|p| classify(an, p)).collect();
    let mut counts = vec![0usize; an.chambers.len()];
    let mut fallbacks = 0;
    let mut violations = Vec::new();
    for (index, (p, out)) in points.into_iter().zip(outcomes).enumerate() {
        match out {
            Ok(a) => {
                counts[a.chamber] += 1;
                fallbacks += usize::from(a.diagnostic.is_some());
            }
            Err(e) => violations.push(Counterexample { index, point: p, message: e.to_string() }),
        }
    }
    PartitionReport { samples: count, counts: counts.into_iter().enumerate().collect(), fallbacks, violations }
}

#[derive(Clone, Debug, Serialize)]
pub struct StarReport {
    pub checked: usize,
    /// `(chamber id, members checked)`.
    pub per_piece: Vec<(usize, usize)>,
    pub violations: Vec<Counterexample>,
}

impl StarReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Draws `per_piece` members of every piece and runs the exact segment check.
///
/// A member is built from a sampled real part and a random integer combination
/// of the `τ(X_C)` basis. The real part is pulled halfway towards `p_C` until
/// the pair lies in the piece, which always happens since `p_C` is interior.
pub fn verify_star_shapes(an: &Analysis, per_piece: usize, seed: u64) -> StarReport {
    let sampler = PointSampler::new(&an.arrangement, &an.poset);
    let strata: Vec<&Stratum> = an.strata.iter().collect();
    let results: Vec<(usize, usize, Vec<Counterexample>)> = strata
        .par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (s.chamber as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let basis = an.poset.flat(s.flat).direction.basis();
            let half = ratio(1, 2);
            let mut bad = Vec::new();
            for index in 0..per_piece {
                let mut p = sampler.sample(&mut rng);
                let mut v = vec![Rational::zero(); an.dim()];
                for b in basis {
                    v = axpy(&v, &int(rng.gen_range(-5..=5)), b);
                }
                p.v = v;
                while !in_piece(&an.arrangement, &an.poset, s, &p) {
                    p.x = axpy(&s.base_point, &half, &axpy(&p.x, &-Rational::one(), &s.base_point));
                }
                if let Some((h, t)) = segment_hit(&an.arrangement, s, &p) {
                    bad.push(Counterexample {
                        index,
                        point: p,
                        message: format!("segment from p_C meets hyperplane {h} at t = {t}"),
                    });
                }
            }
            (s.chamber, per_piece, bad)
        })
        .collect();
    let mut per_piece_counts = Vec::new();
    let mut violations = Vec::new();
    let mut checked = 0;
    for (c, n, bad) in results {
        per_piece_counts.push((c, n));
        checked += n;
        violations.extend(bad);
    }
    per_piece_counts.sort();
    StarReport { checked, per_piece: per_piece_counts, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int_vector;
    use crate::fixtures;

    fn analysis(fx: &fixtures::Fixture) -> Analysis {
        Analysis::new(fx.arrangement.clone(), fx.flag.clone()).unwrap()
    }

    fn gp(x: &[i64], v: &[i64]) -> GaussPoint {
        GaussPoint::new(int_vector(x), int_vector(v))
    }

    fn label(fx: &fixtures::Fixture, an: &Analysis, c: usize) -> String {
        fx.label_of(&an.chamber(c).signs).unwrap().to_string()
    }

    #[test]
    fn point_in_line_pieces() {
        let fx = fixtures::point_in_line();
        let an = analysis(&fx);
        for (p, expected) in [
            (gp(&[1], &[0]), "C_1"),
            (gp(&[1], &[1]), "C_0"),
            (gp(&[-1], &[0]), "C_0"),
            (gp(&[0], &[1]), "C_0"),
            (gp(&[3], &[-2]), "C_0"),
        ] {
            let brute = classify_brute(&an, &p);
            assert_eq!(brute.len(), 1);
            assert_eq!(label(&fx, &an, brute[0]), expected, "{p:?}");
            let a = classify(&an, &p).unwrap();
            assert_eq!(label(&fx, &an, a.chamber), expected);
            assert_eq!(a.diagnostic, None);
        }
        assert!(matches!(classify(&an, &gp(&[0], &[0])), Err(Error::NotInComplement { hyperplane: 0 })));
    }

    #[test]
    fn three_lines_pieces() {
        let fx = fixtures::three_lines();
        let an = analysis(&fx);
        // A point of C_4 with v = 0 lies in S(C_4) = C_4.
        let a = classify(&an, &gp(&[7, 20], &[0, 0])).unwrap();
        assert_eq!(label(&fx, &an, a.chamber), "C_4");
        // A point of C_2 moving along H2.
        let a = classify(&an, &gp(&[8, 3], &[1, -1])).unwrap();
        assert_eq!(label(&fx, &an, a.chamber), "C_2");
        // Same direction but real part in C_5 still belongs to S(C_2): C̃_2 = C_2 ∪ C_5.
        let a = classify(&an, &gp(&[5, 7], &[1, -1])).unwrap();
        assert_eq!(label(&fx, &an, a.chamber), "C_2");
        // Generic v: everything lands in S(C_0).
        let a = classify(&an, &gp(&[20, -3], &[1, 0])).unwrap();
        assert_eq!(label(&fx, &an, a.chamber), "C_0");
    }

    #[test]
    fn star_shaped_examples() {
        let fx = fixtures::point_in_line();
        let an = analysis(&fx);
        let c0 = an.chambers.find(&fx.signs_of("C_0")).unwrap().id;
        let s = an.stratum(c0);
        assert!(verify_star_shaped(&an, s, &gp(&[1], &[1])).unwrap());
        assert!(matches!(verify_star_shaped(&an, s, &gp(&[1], &[0])), Err(Error::Precondition(_))));
        let real = GaussPoint::real(s.base_point.clone());
        assert!(verify_star_shaped(&an, s, &real).unwrap());
    }

    #[test]
    fn real_part_examples() {
        let fx = fixtures::three_lines();
        let an = analysis(&fx);
        let st = |l: &str| an.stratum(an.chambers.find(&fx.signs_of(l)).unwrap().id);
        let in_c3 = int_vector(&[20, 2]);
        let in_c1 = int_vector(&[4, 2]);
        assert!(real_part_piece(&an.arrangement, st("C_1"), &in_c3).unwrap());
        assert!(!real_part_piece(&an.arrangement, st("C_2"), &in_c1).unwrap());
        assert!(real_part_piece(&an.arrangement, st("C_3"), &st("C_3").base_point).unwrap());
        assert!(matches!(
            real_part_piece(&an.arrangement, st("C_1"), &int_vector(&[3, 3])),
            Err(Error::OnBoundary { .. })
        ));
        let cert = real_part_certificate(&an.arrangement, &an.poset, st("C_1"), &in_c3).unwrap().unwrap();
        assert!(in_piece(&an.arrangement, &an.poset, st("C_1"), &cert));
    }

    #[test]
    fn empty_arrangement_single_piece() {
        let fx = fixtures::three_lines();
        let an = Analysis::new(Arrangement::empty(2), fx.flag.clone()).unwrap();
        let report = verify_partition(&an, 50, 3);
        assert!(report.passed());
        assert_eq!(report.counts, vec![(0, 50)]);
    }

    #[test]
    fn sampler_is_deterministic() {
        let fx = fixtures::three_lines();
        let an = analysis(&fx);
        let s = PointSampler::new(&an.arrangement, &an.poset);
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let p = s.sample(&mut a);
            assert!(p.in_complement(&an.arrangement));
            assert_eq!(p, s.sample(&mut b));
        }
    }

    #[test]
    fn dimension_bookkeeping() {
        for fx in [fixtures::point_in_line(), fixtures::three_lines()] {
            let an = analysis(&fx);
            for s in an.strata.iter() {
                let basis = an.poset.flat(s.flat).direction.basis();
                assert_eq!(basis.len() + s.level, an.dim());
                for b in basis {
                    let p = GaussPoint::new(s.base_point.clone(), b.clone());
                    assert!(in_piece(&an.arrangement, &an.poset, s, &p));
                }
            }
        }
    }

    mod props {
        use super::*;
        use crate::random::random_arrangement;
        use rand::Rng;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(16))]

            #[test]
            fn exactly_one_piece_and_routes_agree(seed in any::<u64>(), dim in 1usize..=3, n in 0usize..=6) {
                let an = Analysis::with_generated_flag(random_arrangement(dim, n, seed), seed).unwrap();
                let report = verify_partition(&an, 60, seed);
                prop_assert!(report.passed(), "{:?}", report.violations);
                prop_assert_eq!(report.fallbacks, 0);
                prop_assert!(verify_star_shapes(&an, 8, seed).passed());
            }

            #[test]
            fn real_part_lemma(seed in any::<u64>(), dim in 1usize..=3, n in 1usize..=5) {
                let an = Analysis::with_generated_flag(random_arrangement(dim, n, seed), seed).unwrap();
                let sampler = PointSampler::new(&an.arrangement, &an.poset);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for s in an.strata.iter() {
                    let basis = an.poset.flat(s.flat).direction.basis();
                    prop_assert_eq!(basis.len() + s.level, an.dim());
                    for _ in 0..6 {
                        let x = sampler.sample(&mut rng).x;
                        let Ok(inside) = real_part_piece(&an.arrangement, s, &x) else { continue };
                        let cert = real_part_certificate(&an.arrangement, &an.poset, s, &x).unwrap();
                        prop_assert_eq!(cert.is_some(), inside);
                        if let Some(p) = cert {
                            prop_assert!(in_piece(&an.arrangement, &an.poset, s, &p));
                        } else {
                            for _ in 0..4 {
                                let mut v = vec![Rational::zero(); an.dim()];
                                for b in basis {
                                    v = axpy(&v, &int(rng.gen_range(-5..=5)), b);
                                }
                                prop_assert!(!in_piece(&an.arrangement, &an.poset, s, &GaussPoint::new(x.clone(), v)));
                            }
                        }
                    }
                }
            }
        }
    }
}
