//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's anti-cycling rule. Problems
//! in this crate have a handful of variables and a few dozen constraints, so
//! the dense representation is fine.

use num_traits::{One, Signed, Zero};

use super::{max_abs, AffineForm, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `form(x) >= 0`
    Ge,
    /// `form(x) = 0`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub form: AffineForm,
    pub relation: Relation,
}

impl Constraint {
    pub fn ge(form: AffineForm) -> Self {
        Constraint { form, relation: Relation::Ge }
    }

    pub fn eq(form: AffineForm) -> Self {
        Constraint { form, relation: Relation::Eq }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.form.eval(x);
        match self.relation {
            Relation::Ge => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrictRelation {
    /// `form(x) > 0`
    Gt,
    /// `form(x) = 0`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictConstraint {
    pub form: AffineForm,
    pub relation: StrictRelation,
}

impl StrictConstraint {
    pub fn gt(form: AffineForm) -> Self {
        StrictConstraint { form, relation: StrictRelation::Gt }
    }

    pub fn eq(form: AffineForm) -> Self {
        StrictConstraint { form, relation: StrictRelation::Eq }
    }

    pub fn holds(&self, x: &[Rational]) -> bool {
        let v = self.form.eval(x);
        match self.relation {
            StrictRelation::Gt => v.is_positive(),
            StrictRelation::Eq => v.is_zero(),
        }
    }

    /// The closed relaxation (`>` becomes `>=`).
    pub fn relaxed(&self) -> Constraint {
        match self.relation {
            StrictRelation::Gt => Constraint::ge(self.form.clone()),
            StrictRelation::Eq => Constraint::eq(self.form.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Rational, &[Rational])> {
        match self {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs, with the negated objective value in the last slot.
    objective: Vec<Rational>,
    ncols: usize,
}

enum PhaseResult {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let k = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &k * y;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.objective);
        self.basis[r] = c;
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut obj: Vec<Rational> = costs.to_vec();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.rows[i]) {
                if !t.is_zero() {
                    *o -= cb * t;
                }
            }
        }
        self.objective = obj;
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving basic variable on ties.
    fn run(&mut self, allowed: usize) -> PhaseResult {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.objective[j].is_negative()) else {
                return PhaseResult::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return PhaseResult::Unbounded,
            }
        }
    }
}

/// Optimizes `objective` over `{x ∈ R^dim : constraints}` exactly.
pub fn lp_optimize(
    dim: usize,
    objective: &AffineForm,
    constraints: &[Constraint],
    sense: Sense,
) -> Result<LpOutcome> {
    if objective.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: objective.dim() });
    }
    for c in constraints {
        if c.form.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.form.dim() });
        }
    }

    // Columns: u (dim), w (dim) with x = u - w, one surplus per `>=` row, one artificial per row.
    let m = constraints.len();
    let n_surplus = constraints.iter().filter(|c| c.relation == Relation::Ge).count();
    let art0 = 2 * dim + n_surplus;
    let ncols = art0 + m;
    let mut rows = Vec::with_capacity(m);
    let mut surplus = 2 * dim;
    for (k, c) in constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols + 1];
        for (j, a) in c.form.linear().iter().enumerate() {
            row[j] = a.clone();
            row[dim + j] = -a.clone();
        }
        if c.relation == Relation::Ge {
            row[surplus] = -Rational::one();
            surplus += 1;
        }
        row[ncols] = -c.form.constant().clone();
        if row[ncols].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[art0 + k] = Rational::one();
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (art0..art0 + m).collect(), objective: Vec::new(), ncols };

    // Phase 1: minimize the sum of artificials.
    let mut phase1 = vec![Rational::zero(); ncols];
    for c in phase1.iter_mut().skip(art0) {
        *c = Rational::one();
    }
    t.set_costs(&phase1);
    t.run(ncols);
    if !t.objective[ncols].is_zero() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= art0 {
            match (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }

    // Phase 2 over the structural and surplus columns only.
    let flip = match sense {
        Sense::Minimize => Rational::one(),
        Sense::Maximize => -Rational::one(),
    };
    let mut costs = vec![Rational::zero(); ncols];
    for (j, a) in objective.linear().iter().enumerate() {
        costs[j] = a * &flip;
        costs[dim + j] = -(a * &flip);
    }
    t.set_costs(&costs);
    if let PhaseResult::Unbounded = t.run(art0) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut values = vec![Rational::zero(); ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        values[b] = t.rhs(i).clone();
    }
    let point: Vec<Rational> = (0..dim).map(|j| &values[j] - &values[dim + j]).collect();
    let value = objective.eval(&point);
    Ok(LpOutcome::Optimal { value, point })
}

/// Outcome of an interior-point search inside a bounding box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InteriorPoint {
    Found(Vec<Rational>),
    /// The open set is nonempty but does not meet the box.
    EmptyInBox,
    /// The open set is empty.
    Empty,
}

fn slack_program(
    dim: usize,
    constraints: &[StrictConstraint],
    bound: Option<&Rational>,
) -> Result<LpOutcome> {
    // Variables (x, t): maximize t with form(x) - t >= 0 for strict rows and t <= 1.
    for c in constraints {
        if c.form.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.form.dim() });
        }
    }
    let t_col = AffineForm::coordinate(dim + 1, dim);
    let mut rows = Vec::with_capacity(constraints.len() + 2 * dim + 1);
    for c in constraints {
        let lifted = c.form.lifted(1);
        rows.push(match c.relation {
            StrictRelation::Gt => Constraint::ge(lifted.add_scaled(&-Rational::one(), &t_col)),
            StrictRelation::Eq => Constraint::eq(lifted),
        });
    }
    rows.push(Constraint::ge(t_col.negated().shifted(&-Rational::one())));
    if let Some(b) = bound {
        for j in 0..dim {
            let xj = AffineForm::coordinate(dim + 1, j);
            rows.push(Constraint::ge(xj.negated().shifted(&-b.clone())));
            rows.push(Constraint::ge(xj.shifted(&-b.clone())));
        }
    }
    lp_optimize(dim + 1, &t_col, &rows, Sense::Maximize)
}

/// Decides whether `{x : every strict constraint holds}` is nonempty, with no box.
pub fn is_open_feasible(dim: usize, constraints: &[StrictConstraint]) -> Result<bool> {
    Ok(match slack_program(dim, constraints, None)? {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => unreachable!("slack variable is capped"),
        LpOutcome::Infeasible => false,
    })
}

/// Finds a rational point satisfying every `>` strictly and every `=` exactly,
/// inside the box `[-bound, bound]^dim`, by maximizing the minimum slack.
pub fn relative_interior_point(
    dim: usize,
    constraints: &[StrictConstraint],
    bound: &Rational,
) -> Result<InteriorPoint> {
    if !bound.is_positive() {
        return Err(Error::InvalidArgument(format!("box bound must be positive, got {bound}")));
    }
    if let LpOutcome::Optimal { value, point } = slack_program(dim, constraints, Some(bound))? {
        if value.is_positive() {
            return Ok(InteriorPoint::Found(point[..dim].to_vec()));
        }
    }
    if is_open_feasible(dim, constraints)? {
        Ok(InteriorPoint::EmptyInBox)
    } else {
        Ok(InteriorPoint::Empty)
    }
}

/// Initial box bound: one plus the largest coefficient magnitude.
pub fn default_bound(constraints: &[StrictConstraint]) -> Rational {
    let m = max_abs(constraints.iter().flat_map(|c| c.form.linear().iter().chain([c.form.constant()])));
    m + Rational::one()
}

/// Like [`relative_interior_point`], doubling the box until a point is found.
pub fn interior_point(dim: usize, constraints: &[StrictConstraint]) -> Result<Option<Vec<Rational>>> {
    let mut bound = default_bound(constraints);
    loop {
        match relative_interior_point(dim, constraints, &bound)? {
            InteriorPoint::Found(p) => return Ok(Some(p)),
            InteriorPoint::Empty => return Ok(None),
            InteriorPoint::EmptyInBox => bound = &bound * Rational::from_integer(2.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, int_vector};

    fn x(dim: usize, j: usize) -> AffineForm {
        AffineForm::coordinate(dim, j)
    }

    #[test]
    fn min_x_with_lower_bound() {
        let c = [Constraint::ge(x(1, 0).shifted(&int(3)))];
        let out = lp_optimize(1, &x(1, 0), &c, Sense::Minimize).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: int(3), point: int_vector(&[3]) });
    }

    #[test]
    fn unconstrained_is_unbounded() {
        assert_eq!(lp_optimize(1, &x(1, 0), &[], Sense::Minimize).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_system() {
        let c = [Constraint::ge(x(1, 0).shifted(&int(1))), Constraint::ge(x(1, 0).negated())];
        assert_eq!(lp_optimize(1, &x(1, 0), &c, Sense::Maximize).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 2 twice, x - y = 0: optimum of x is 1 either way.
        let f = AffineForm::from_ints(&[1, 1], -2);
        let g = AffineForm::from_ints(&[1, -1], 0);
        let c = [Constraint::eq(f.clone()), Constraint::eq(f), Constraint::eq(g)];
        let out = lp_optimize(2, &x(2, 0), &c, Sense::Minimize).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: int(1), point: int_vector(&[1, 1]) });
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Several constraints tight at the origin; Bland's rule must not cycle.
        let cs: Vec<Constraint> = [[1, 0], [0, 1], [1, 1], [2, 1], [1, 2], [1, -1]]
            .iter()
            .map(|l| Constraint::ge(AffineForm::from_ints(l, if l[1] < 0 { 5 } else { 0 })))
            .collect();
        let obj = AffineForm::from_ints(&[1, 1], 0);
        let out = lp_optimize(2, &obj, &cs, Sense::Minimize).unwrap();
        assert_eq!(out.optimal().unwrap().0, &int(0));
    }

    #[test]
    fn interior_examples() {
        let pos = StrictConstraint::gt(x(1, 0));
        match relative_interior_point(1, std::slice::from_ref(&pos), &int(10)).unwrap() {
            InteriorPoint::Found(p) => assert!(p[0] > int(0) && p[0] <= int(10)),
            other => panic!("{other:?}"),
        }
        let neg = StrictConstraint::gt(x(1, 0).negated());
        assert_eq!(relative_interior_point(1, &[pos, neg], &int(10)).unwrap(), InteriorPoint::Empty);
    }

    #[test]
    fn far_region_needs_bigger_box() {
        let far = StrictConstraint::gt(x(1, 0).shifted(&int(100)));
        assert_eq!(relative_interior_point(1, std::slice::from_ref(&far), &int(10)).unwrap(), InteriorPoint::EmptyInBox);
        let p = interior_point(1, &[far]).unwrap().unwrap();
        assert!(p[0] > int(100));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn ge_row() -> impl Strategy<Value = Constraint> {
            (prop::collection::vec(-5i64..=5, 2), -8i64..=8)
                .prop_map(|(l, c)| Constraint::ge(AffineForm::from_ints(&l, c)))
        }

        proptest! {
            #[test]
            fn optimal_points_are_feasible(
                rows in prop::collection::vec(ge_row(), 0..7),
                obj in prop::collection::vec(-4i64..=4, 2),
                maximize in any::<bool>(),
            ) {
                let obj = AffineForm::from_ints(&obj, 0);
                let sense = if maximize { Sense::Maximize } else { Sense::Minimize };
                if let LpOutcome::Optimal { value, point } = lp_optimize(2, &obj, &rows, sense).unwrap() {
                    for r in &rows {
                        prop_assert!(r.holds(&point));
                    }
                    prop_assert_eq!(obj.eval(&point), value);
                }
            }

            #[test]
            fn interior_points_have_positive_slack(
                rows in prop::collection::vec(ge_row(), 0..6),
            ) {
                let strict: Vec<StrictConstraint> = rows
                    .into_iter()
                    .filter(|r| !r.form.has_zero_linear_part())
                    .map(|r| StrictConstraint::gt(r.form))
                    .collect();
                if let Some(p) = interior_point(2, &strict).unwrap() {
                    for c in &strict {
                        prop_assert!(c.holds(&p));
                    }
                } else {
                    prop_assert!(!is_open_feasible(2, &strict).unwrap());
                }
            }
        }
    }
}
