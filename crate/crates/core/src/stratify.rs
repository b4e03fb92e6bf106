//! Chamber levels `ch^q_F(A)`, minimal flats `X_C`, base points `p_C`, the
//! enlarged chambers `C̃` and the partial order on each level.

use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{Arrangement, IntersectionPoset};
use crate::chambers::{contained_in, Chamber, ChamberSet, SignVector, SubChamber};
use crate::error::{Error, Result};
use crate::exact::lp::{interior_point, LpOutcome, StrictConstraint};
use crate::exact::Rational;
use crate::flag::Flag;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub chamber: usize,
    pub signs: SignVector,
    pub level: usize,
    /// Poset id of `X_C`.
    pub flat: usize,
    /// `h_q(X_C ∩ F^q)`; undefined at level 0.
    pub height: Option<Rational>,
    /// The point `X_C ∩ F^q`.
    pub vertex: Vec<Rational>,
    /// `p_C`, strictly inside the chamber and on `F^q`.
    pub base_point: Vec<Rational>,
    /// `C̃`, the chamber of `A_[X_C]` containing `C`.
    pub tilde: SubChamber,
}

/// Lowest `q` with `C ∩ F^q ≠ ∅`.
pub fn level_of(arr: &Arrangement, chamber: &Chamber, flag: &Flag) -> Result<usize> {
    flag.level_of(&chamber.constraints(arr))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalFlat {
    pub flat: usize,
    pub height: Option<Rational>,
    pub vertex: Vec<Rational>,
}

/// The flat through the `h_q`-minimizing vertex of `cl(C ∩ F^q)`; the ambient space at level 0.
pub fn minimal_flat(
    arr: &Arrangement,
    poset: &IntersectionPoset,
    region: &[StrictConstraint],
    q: usize,
    flag: &Flag,
) -> Result<MinimalFlat> {
    if q == 0 {
        return Ok(MinimalFlat { flat: poset.ambient().id, height: None, vertex: flag.subspace(0).point });
    }
    let (height, vertex) = match flag.minimize_height(region, q)? {
        LpOutcome::Optimal { value, point } => (value, point),
        LpOutcome::Unbounded => {
            return Err(Error::Precondition(format!("h_{q} is unbounded below on the region; flag needs re-verification")))
        }
        LpOutcome::Infeasible => return Err(Error::Precondition(format!("region misses F^{q}"))),
    };
    let support = arr.through_point(&vertex);
    let flat = poset
        .by_support(&support)
        .ok_or_else(|| Error::Internal(format!("support {support:?} is not a flat")))?;
    if flat.dim() + q != arr.dim() {
        return Err(Error::Precondition(format!(
            "minimum of h_{q} is attained on a flat of dimension {}, not a vertex of F^{q}",
            flat.dim()
        )));
    }
    Ok(MinimalFlat { flat: flat.id, height: Some(height), vertex })
}

/// `C̃`: the restriction of the chamber's signs to `A_[X_C]`.
pub fn tilde_chamber(arr: &Arrangement, chamber: &Chamber, poset: &IntersectionPoset, flat: usize) -> SubChamber {
    SubChamber::restriction(&chamber.signs, &arr.parallel_class(poset.flat(flat)))
}

/// `C ≼ C'` iff `C' ⊂ C̃`. Both strata must sit at the same level.
pub fn order_leq(c: &Stratum, c_prime: &Stratum) -> Result<bool> {
    if c.level != c_prime.level {
        return Err(Error::LevelMismatch { left: c.level, right: c_prime.level });
    }
    Ok(c.tilde.contains(&c_prime.signs))
}

fn build_stratum(
    arr: &Arrangement,
    poset: &IntersectionPoset,
    chamber: &Chamber,
    flag: &Flag,
) -> Result<Stratum> {
    let region = chamber.constraints(arr);
    let level = flag.level_of(&region)?;
    let MinimalFlat { flat, height, vertex } = minimal_flat(arr, poset, &region, level, flag)?;
    let mut on_flag = region;
    on_flag.extend(flag.equation_constraints(level));
    let base_point = interior_point(arr.dim(), &on_flag)?
        .ok_or_else(|| Error::Internal(format!("chamber {} does not meet F^{level}", chamber.id)))?;
    Ok(Stratum {
        chamber: chamber.id,
        signs: chamber.signs.clone(),
        level,
        flat,
        height,
        vertex,
        base_point,
        tilde: tilde_chamber(arr, chamber, poset, flat),
    })
}

/// All strata grouped by level, each level sorted by height then chamber id.
#[derive(Clone, Debug)]
pub struct Stratification {
    levels: Vec<Vec<Stratum>>,
    position: Vec<(usize, usize)>,
}

impl Stratification {
    pub fn build(arr: &Arrangement, poset: &IntersectionPoset, chambers: &ChamberSet, flag: &Flag) -> Result<Self> {
        let strata: Vec<Stratum> = chambers
            .chambers()
            .par_iter()
            .map(|c| build_stratum(arr, poset, c, flag))
            .collect::<Result<_>>()?;
        let mut levels: Vec<Vec<Stratum>> = vec![Vec::new(); arr.dim() + 1];
        for s in strata {
            levels[s.level].push(s);
        }
        let mut position = vec![(0, 0); chambers.len()];
        for (q, level) in levels.iter_mut().enumerate() {
            level.sort_by(|a, b| a.height.cmp(&b.height).then(a.chamber.cmp(&b.chamber)));
            for (i, s) in level.iter().enumerate() {
                position[s.chamber] = (q, i);
            }
        }
        Ok(Stratification { levels, position })
    }

    pub fn levels(&self) -> &[Vec<Stratum>] {
        &self.levels
    }

    pub fn level(&self, q: usize) -> &[Stratum] {
        &self.levels[q]
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// The stratum of a chamber.
    pub fn of_chamber(&self, chamber: usize) -> &Stratum {
        let (q, i) = self.position[chamber];
        &self.levels[q][i]
    }

    /// Index of a chamber within its level's height order.
    pub fn rank_in_level(&self, chamber: usize) -> usize {
        self.position[chamber].1
    }

    pub fn iter(&self) -> impl Iterator<Item = &Stratum> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.position.is_empty()
    }
}

/// Row of the stratification report.
#[derive(Clone, Debug, Serialize)]
pub struct StratumReport {
    pub chamber: usize,
    pub q: usize,
    pub flat_support: Vec<usize>,
    #[serde(with = "crate::exact::serde_rational::option")]
    pub height: Option<Rational>,
    #[serde(with = "crate::exact::serde_rational::vec")]
    pub base_point: Vec<Rational>,
    pub tilde_subset: Vec<usize>,
    pub tilde_signs: String,
}

impl StratumReport {
    pub fn new(s: &Stratum, poset: &IntersectionPoset) -> Self {
        StratumReport {
            chamber: s.chamber,
            q: s.level,
            flat_support: poset.flat(s.flat).support.clone(),
            height: s.height.clone(),
            base_point: s.base_point.clone(),
            tilde_subset: s.tilde.subset.clone(),
            tilde_signs: s.tilde.sign_string(),
        }
    }
}

/// Whether `c` lies in `C̃` of the stratum.
pub fn in_tilde(stratum: &Stratum, c: &Chamber) -> bool {
    contained_in(c, &stratum.tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers::enumerate_chambers;
    use crate::fixtures;

    struct Setup {
        fx: fixtures::Fixture,
        poset: IntersectionPoset,
        chambers: ChamberSet,
        strat: Stratification,
    }

    fn setup(fx: fixtures::Fixture) -> Setup {
        let poset = IntersectionPoset::build(&fx.arrangement);
        let chambers = enumerate_chambers(&fx.arrangement).unwrap();
        let strat = Stratification::build(&fx.arrangement, &poset, &chambers, &fx.flag).unwrap();
        Setup { fx, poset, chambers, strat }
    }

    impl Setup {
        fn stratum(&self, label: &str) -> &Stratum {
            let c = self.chambers.find(&self.fx.signs_of(label)).unwrap();
            self.strat.of_chamber(c.id)
        }
    }

    #[test]
    fn point_in_line_levels() {
        let s = setup(fixtures::point_in_line());
        assert_eq!(s.stratum("C_0").level, 0);
        assert_eq!(s.stratum("C_1").level, 1);
        assert!(s.poset.flat(s.stratum("C_0").flat).is_ambient());
        assert_eq!(s.poset.flat(s.stratum("C_1").flat).support, vec![0]);
    }

    #[test]
    fn three_lines_levels_and_flats() {
        let s = setup(fixtures::three_lines());
        assert_eq!(s.strat.level_sizes(), vec![1, 3, 2]);
        let support = |l: &str| s.poset.flat(s.stratum(l).flat).support.clone();
        assert_eq!(support("C_0"), Vec::<usize>::new());
        assert_eq!(support("C_1"), vec![0]);
        assert_eq!(support("C_2"), vec![1]);
        assert_eq!(support("C_3"), vec![2]);
        assert_eq!(support("C_4"), vec![0, 2]);
        assert_eq!(support("C_5"), vec![0, 1]);
        assert_eq!(s.strat.level(1)[0].chamber, s.stratum("C_1").chamber);
    }

    #[test]
    fn three_lines_tilde_and_order() {
        let s = setup(fixtures::three_lines());
        let members = |l: &str| {
            let t = &s.stratum(l).tilde;
            let mut v: Vec<&str> = s.chambers.inside(t).map(|c| s.fx.label_of(&c.signs).unwrap()).collect();
            v.sort();
            v
        };
        assert_eq!(members("C_0").len(), 6);
        assert_eq!(members("C_1"), vec!["C_1", "C_2", "C_3"]);
        assert_eq!(members("C_2"), vec!["C_2", "C_5"]);
        assert_eq!(members("C_3"), vec!["C_3", "C_4"]);
        assert_eq!(members("C_4"), vec!["C_4"]);
        assert_eq!(members("C_5"), vec!["C_5"]);

        assert!(order_leq(s.stratum("C_1"), s.stratum("C_2")).unwrap());
        assert!(!order_leq(s.stratum("C_2"), s.stratum("C_1")).unwrap());
        assert!(order_leq(s.stratum("C_3"), s.stratum("C_3")).unwrap());
        assert!(matches!(
            order_leq(s.stratum("C_1"), s.stratum("C_4")),
            Err(Error::LevelMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn base_points_lie_on_flag_inside_chamber() {
        let s = setup(fixtures::three_lines());
        for st in s.strat.iter() {
            let c = s.chambers.get(st.chamber);
            assert!(c.constraints(&s.fx.arrangement).iter().all(|k| k.holds(&st.base_point)));
            assert!(s.fx.flag.equation_constraints(st.level).iter().all(|k| k.holds(&st.base_point)));
        }
    }

    #[test]
    fn empty_arrangement_single_stratum() {
        let fx = fixtures::Fixture {
            name: "empty",
            arrangement: Arrangement::empty(2),
            flag: fixtures::three_lines().flag,
            chamber_labels: Vec::new(),
        };
        let s = setup(fx);
        assert_eq!(s.strat.level_sizes(), vec![1, 0, 0]);
    }

    mod props {
        use super::*;
        use crate::analysis::Analysis;
        use crate::random::random_arrangement;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn stratification_invariants(seed in any::<u64>(), dim in 1usize..=3, n in 0usize..=6) {
                let an = Analysis::with_generated_flag(random_arrangement(dim, n, seed), seed).unwrap();
                let betti: Vec<usize> = an.poset.betti_numbers().into_iter().map(|b| b as usize).collect();
                prop_assert_eq!(an.strata.level_sizes(), betti);
                for level in an.strata.levels() {
                    for c in level {
                        prop_assert!(order_leq(c, c).unwrap());
                        for d in level {
                            if order_leq(c, d).unwrap() {
                                prop_assert!(c.height <= d.height);
                                if c.chamber != d.chamber {
                                    prop_assert!(!order_leq(d, c).unwrap());
                                }
                            }
                            if c.flat == d.flat && c.chamber != d.chamber {
                                let support = &an.poset.flat(c.flat).support;
                                for h in 0..an.arrangement.len() {
                                    if c.signs.get(h) != d.signs.get(h) {
                                        prop_assert!(support.contains(&h));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
