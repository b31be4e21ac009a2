//! Exact linear programming.
//!
//! A two-phase primal simplex over arbitrary-precision rationals with
//! Bland's anti-cycling rule. Feasible answers come with a point that
//! satisfies every constraint with zero residual; infeasible answers come
//! with a Farkas certificate that is re-checkable by one matrix-vector
//! product. There is no floating-point fallback anywhere.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::rational::{dot, Rational};

/// Objective sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A linear program over `num_vars` variables.
///
/// Variables are free unless marked nonnegative. Constraints are equality
/// rows `a·x = b` and inequality rows `a·x ≤ b`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Option<(Sense, Vec<Rational>)>,
    eq_rows: Vec<Vec<Rational>>,
    eq_rhs: Vec<Rational>,
    le_rows: Vec<Vec<Rational>>,
    le_rhs: Vec<Rational>,
    nonneg: Vec<bool>,
}

/// Outcome of [`LinearProgram::solve`].
#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// No objective was set and the constraints are satisfiable.
    Feasible { point: Vec<Rational> },
    /// An optimum is attained.
    Optimal { point: Vec<Rational>, value: Rational },
    /// The constraints are unsatisfiable; the certificate proves it.
    Infeasible { certificate: FarkasCertificate },
    /// The objective is unbounded along `ray` starting from `point`.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

impl LpOutcome {
    /// The feasible (or optimal) point, when one exists.
    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { point } | LpOutcome::Optimal { point, .. } => Some(point),
            LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible { .. } => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible { .. })
    }
}

/// Multipliers proving a program infeasible.
///
/// With `y` the equality multipliers and `z ≥ 0` the inequality multipliers,
/// the combined row `yᵀA_eq + zᵀA_le` is nonnegative on every nonnegative
/// variable, zero on every free variable, and `yᵀb_eq + zᵀb_le < 0`. Any
/// feasible point would contradict that sign pattern.
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    pub eq_multipliers: Vec<Rational>,
    pub le_multipliers: Vec<Rational>,
}

/// A program together with multipliers proving it infeasible, re-checkable
/// in isolation.
#[derive(Debug, Clone)]
pub struct InfeasibilityProof {
    pub program: LinearProgram,
    pub certificate: FarkasCertificate,
}

impl InfeasibilityProof {
    /// One matrix-vector product against the stored program.
    pub fn verify(&self) -> bool {
        self.certificate.verify(&self.program)
    }
}

impl FarkasCertificate {
    /// Re-checks the certificate against the program it came from.
    pub fn verify(&self, prog: &LinearProgram) -> bool {
        if self.eq_multipliers.len() != prog.eq_rows.len()
            || self.le_multipliers.len() != prog.le_rows.len()
        {
            return false;
        }
        if self.le_multipliers.iter().any(Signed::is_negative) {
            return false;
        }
        let mut combined = vec![Rational::zero(); prog.num_vars];
        let mut rhs = Rational::zero();
        for (y, (row, b)) in self
            .eq_multipliers
            .iter()
            .zip(prog.eq_rows.iter().zip(&prog.eq_rhs))
        {
            for (cj, aj) in combined.iter_mut().zip(row) {
                *cj += y * aj;
            }
            rhs += y * b;
        }
        for (z, (row, b)) in self
            .le_multipliers
            .iter()
            .zip(prog.le_rows.iter().zip(&prog.le_rhs))
        {
            for (cj, aj) in combined.iter_mut().zip(row) {
                *cj += z * aj;
            }
            rhs += z * b;
        }
        let signs_ok = combined.iter().zip(&prog.nonneg).all(|(cj, &nn)| {
            if nn {
                !cj.is_negative()
            } else {
                cj.is_zero()
            }
        });
        signs_ok && rhs.is_negative()
    }
}

impl LinearProgram {
    /// A program over `num_vars` free variables and no constraints.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: None,
            eq_rows: Vec::new(),
            eq_rhs: Vec::new(),
            le_rows: Vec::new(),
            le_rhs: Vec::new(),
            nonneg: vec![false; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Marks variable `i` as `x_i ≥ 0`.
    pub fn set_nonneg(&mut self, i: usize) {
        self.nonneg[i] = true;
    }

    pub fn set_all_nonneg(&mut self) {
        self.nonneg.iter_mut().for_each(|f| *f = true);
    }

    pub fn add_eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "equality row length");
        self.eq_rows.push(coeffs);
        self.eq_rhs.push(rhs);
    }

    pub fn add_le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "inequality row length");
        self.le_rows.push(coeffs);
        self.le_rhs.push(rhs);
    }

    /// Adds `a·x ≥ b` as the flipped `≤` row.
    pub fn add_ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.add_le(coeffs.iter().map(|c| -c).collect(), -rhs);
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<Rational>) {
        assert_eq!(coeffs.len(), self.num_vars, "objective length");
        self.objective = Some((sense, coeffs));
    }

    /// Exact check that `point` satisfies every constraint and sign bound.
    pub fn satisfies(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars {
            return false;
        }
        let bounds_ok = point
            .iter()
            .zip(&self.nonneg)
            .all(|(x, &nn)| !nn || !x.is_negative());
        let eq_ok = self
            .eq_rows
            .iter()
            .zip(&self.eq_rhs)
            .all(|(row, b)| &dot(row, point) == b);
        let le_ok = self
            .le_rows
            .iter()
            .zip(&self.le_rhs)
            .all(|(row, b)| &dot(row, point) <= b);
        bounds_ok && eq_ok && le_ok
    }

    /// Objective value at `point`.
    pub fn objective_value(&self, point: &[Rational]) -> Option<Rational> {
        self.objective.as_ref().map(|(_, c)| dot(c, point))
    }

    /// Solves the program by exact two-phase simplex.
    pub fn solve(&self) -> Result<LpOutcome> {
        let standard = StandardForm::build(self)?;
        let mut tableau = Tableau::phase_one(&standard);
        tableau.optimize(usize::MAX);
        if tableau.objective_value().is_positive() {
            let certificate = standard.extract_farkas(&tableau);
            debug_assert!(certificate.verify(self), "Farkas certificate must verify");
            return Ok(LpOutcome::Infeasible { certificate });
        }
        tableau.drive_out_artificials();

        match &self.objective {
            None => {
                let point = standard.recover_point(&tableau);
                debug_assert!(self.satisfies(&point));
                Ok(LpOutcome::Feasible { point })
            }
            Some((sense, coeffs)) => {
                tableau.load_objective(&standard.minimized_costs(sense, coeffs));
                match tableau.optimize(standard.first_artificial) {
                    Pivoted::Optimal => {
                        let point = standard.recover_point(&tableau);
                        debug_assert!(self.satisfies(&point));
                        let value = dot(coeffs, &point);
                        Ok(LpOutcome::Optimal { point, value })
                    }
                    Pivoted::Unbounded { column } => {
                        let point = standard.recover_point(&tableau);
                        let ray = standard.recover_ray(&tableau, column);
                        debug_assert!(self.ray_improves(&ray));
                        Ok(LpOutcome::Unbounded { point, ray })
                    }
                }
            }
        }
    }

    /// A ray certifying unboundedness: it preserves feasibility and strictly
    /// improves the objective.
    fn ray_improves(&self, ray: &[Rational]) -> bool {
        let feasible_dir = self
            .eq_rows
            .iter()
            .all(|row| dot(row, ray).is_zero())
            && self
                .le_rows
                .iter()
                .all(|row| !dot(row, ray).is_positive())
            && ray
                .iter()
                .zip(&self.nonneg)
                .all(|(r, &nn)| !nn || !r.is_negative());
        let improving = match &self.objective {
            Some((Sense::Maximize, c)) => dot(c, ray).is_positive(),
            Some((Sense::Minimize, c)) => dot(c, ray).is_negative(),
            None => false,
        };
        feasible_dir && improving
    }
}

/// Standard equational form: `A x = b`, `x ≥ 0`, rhs nonnegative.
///
/// Free variables are split into positive and negative parts; `≤` rows get a
/// slack; every row gets an artificial variable and may be sign-flipped to
/// make its right-hand side nonnegative.
struct StandardForm {
    /// Column index of the positive part of each original variable.
    plus_col: Vec<usize>,
    /// Column index of the negative part for free variables.
    minus_col: Vec<Option<usize>>,
    /// Row sign flips applied to reach `b ≥ 0`.
    row_sign: Vec<Rational>,
    num_eq: usize,
    /// Columns before the artificial block.
    first_artificial: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    num_orig_vars: usize,
}

impl StandardForm {
    fn build(prog: &LinearProgram) -> Result<StandardForm> {
        for row in prog.eq_rows.iter().chain(&prog.le_rows) {
            if row.len() != prog.num_vars {
                return Err(Error::DimensionMismatch(
                    "constraint row length differs from variable count".into(),
                ));
            }
        }
        let mut plus_col = Vec::with_capacity(prog.num_vars);
        let mut minus_col = Vec::with_capacity(prog.num_vars);
        let mut next = 0;
        for &nn in &prog.nonneg {
            plus_col.push(next);
            next += 1;
            if nn {
                minus_col.push(None);
            } else {
                minus_col.push(Some(next));
                next += 1;
            }
        }
        let num_slacks = prog.le_rows.len();
        let first_slack = next;
        let first_artificial = first_slack + num_slacks;
        // An all-zero padding row keeps the tableau nonempty for programs
        // without constraints.
        let m = (prog.eq_rows.len() + prog.le_rows.len()).max(1);
        let width = first_artificial + m;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = Vec::with_capacity(m);
        let source_rows = prog
            .eq_rows
            .iter()
            .zip(&prog.eq_rhs)
            .chain(prog.le_rows.iter().zip(&prog.le_rhs));
        for (r, (coeffs, b)) in source_rows.enumerate() {
            let sign = if b.is_negative() {
                -Rational::one()
            } else {
                Rational::one()
            };
            let mut row = vec![Rational::zero(); width];
            for (j, a) in coeffs.iter().enumerate() {
                let v = a * &sign;
                row[plus_col[j]] = v.clone();
                if let Some(mc) = minus_col[j] {
                    row[mc] = -v;
                }
            }
            if r >= prog.eq_rows.len() {
                let slack = first_slack + (r - prog.eq_rows.len());
                row[slack] = sign.clone();
            }
            row[first_artificial + r] = Rational::one();
            rows.push(row);
            rhs.push(b * &sign);
            row_sign.push(sign);
        }
        if rows.is_empty() {
            let mut row = vec![Rational::zero(); width];
            row[first_artificial] = Rational::one();
            rows.push(row);
            rhs.push(Rational::zero());
            row_sign.push(Rational::one());
        }

        Ok(StandardForm {
            plus_col,
            minus_col,
            row_sign,
            num_eq: prog.eq_rows.len(),
            first_artificial,
            rows,
            rhs,
            num_orig_vars: prog.num_vars,
        })
    }

    /// Minimization costs over standard columns for the user objective.
    fn minimized_costs(&self, sense: &Sense, coeffs: &[Rational]) -> Vec<Rational> {
        let flip = match sense {
            Sense::Minimize => Rational::one(),
            Sense::Maximize => -Rational::one(),
        };
        let width = self.rows[0].len();
        let mut costs = vec![Rational::zero(); width];
        for (j, c) in coeffs.iter().enumerate() {
            let v = c * &flip;
            costs[self.plus_col[j]] = v.clone();
            if let Some(mc) = self.minus_col[j] {
                costs[mc] = -v;
            }
        }
        costs
    }

    fn recover_point(&self, tableau: &Tableau) -> Vec<Rational> {
        let std_point = tableau.basic_solution();
        (0..self.num_orig_vars)
            .map(|j| {
                let plus = std_point[self.plus_col[j]].clone();
                match self.minus_col[j] {
                    Some(mc) => plus - &std_point[mc],
                    None => plus,
                }
            })
            .collect()
    }

    fn recover_ray(&self, tableau: &Tableau, entering: usize) -> Vec<Rational> {
        let std_ray = tableau.unbounded_direction(entering);
        (0..self.num_orig_vars)
            .map(|j| {
                let plus = std_ray[self.plus_col[j]].clone();
                match self.minus_col[j] {
                    Some(mc) => plus - &std_ray[mc],
                    None => plus,
                }
            })
            .collect()
    }

    /// Farkas multipliers from the final phase-one cost row.
    ///
    /// The dual vector of the phase-one program is read off the reduced
    /// costs of the artificial columns (`y_r = 1 − c̄_r`); undoing the row
    /// sign flips and negating yields multipliers in the caller's row space.
    fn extract_farkas(&self, tableau: &Tableau) -> FarkasCertificate {
        let m = self.rows.len();
        let mut eq_multipliers = Vec::with_capacity(self.num_eq);
        let mut le_multipliers = Vec::with_capacity(m - self.num_eq);
        for r in 0..m {
            let reduced = &tableau.cost[self.first_artificial + r];
            let dual = Rational::one() - reduced;
            let original_space = -(&self.row_sign[r] * dual);
            if r < self.num_eq {
                eq_multipliers.push(original_space);
            } else {
                le_multipliers.push(original_space);
            }
        }
        FarkasCertificate {
            eq_multipliers,
            le_multipliers,
        }
    }
}

enum Pivoted {
    Optimal,
    Unbounded { column: usize },
}

/// Dense simplex tableau, maintained in canonical (basis = identity) form.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    cost_value: Rational,
    first_artificial: usize,
}

impl Tableau {
    fn phase_one(std: &StandardForm) -> Tableau {
        let width = std.rows[0].len();
        // Phase-one reduced costs with the artificial basis eliminated:
        // c̄_j = −Σ_r A_rj for structural columns, 0 for artificials.
        let mut cost = vec![Rational::zero(); width];
        let mut cost_value = Rational::zero();
        for (row, b) in std.rows.iter().zip(&std.rhs) {
            for (cj, a) in cost.iter_mut().zip(row).take(std.first_artificial) {
                *cj -= a;
            }
            cost_value += b;
        }
        Tableau {
            rows: std.rows.clone(),
            rhs: std.rhs.clone(),
            basis: (0..std.rows.len()).map(|r| std.first_artificial + r).collect(),
            cost,
            cost_value,
            first_artificial: std.first_artificial,
        }
    }

    fn objective_value(&self) -> Rational {
        self.cost_value.clone()
    }

    /// Bland's rule pivoting until optimality or unboundedness. Columns at or
    /// beyond `column_limit` never enter (used to ban artificials in phase 2).
    fn optimize(&mut self, column_limit: usize) -> Pivoted {
        loop {
            let limit = column_limit.min(self.cost.len());
            let entering = (0..limit).find(|&j| self.cost[j].is_negative());
            let Some(col) = entering else {
                return Pivoted::Optimal;
            };
            let Some(row) = self.ratio_test(col) else {
                return Pivoted::Unbounded { column: col };
            };
            self.pivot(row, col);
        }
    }

    /// Minimum-ratio row for `col`; ties broken by smallest basic variable.
    fn ratio_test(&self, col: usize) -> Option<usize> {
        let mut best: Option<(Rational, usize)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / a;
            best = match best {
                None => Some((ratio, r)),
                Some((bratio, brow)) => {
                    if ratio < bratio || (ratio == bratio && self.basis[r] < self.basis[brow]) {
                        Some((ratio, r))
                    } else {
                        Some((bratio, brow))
                    }
                }
            };
        }
        best.map(|(_, r)| r)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &pivot;
        }
        self.rhs[row] = &self.rhs[row] / &pivot;
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            let (pivot_row, target_row) = if r < row {
                let (a, b) = self.rows.split_at_mut(row);
                (&b[0], &mut a[r])
            } else {
                let (a, b) = self.rows.split_at_mut(r);
                (&a[row], &mut b[0])
            };
            for (t, p) in target_row.iter_mut().zip(pivot_row) {
                *t = &*t - &(&factor * p);
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] = &self.rhs[r] - &delta;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for (cj, p) in self.cost.iter_mut().zip(&self.rows[row]) {
                *cj = &*cj - &(&factor * p);
            }
            // z' = z + c̄_entering · θ with θ the normalized rhs.
            let delta = &factor * &self.rhs[row];
            self.cost_value = &self.cost_value + &delta;
        }
        self.basis[row] = col;
    }

    /// After a zero-cost phase one, pivots basic artificials onto structural
    /// columns where possible. Rows that cannot be pivoted are redundant and
    /// stay permanently at zero because no structural column touches them.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows.len() {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            debug_assert!(self.rhs[r].is_zero());
            let col = (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero());
            if let Some(col) = col {
                self.pivot(r, col);
            }
        }
    }

    /// Installs a fresh objective (in minimization form over standard
    /// columns) and eliminates the current basic columns from it.
    fn load_objective(&mut self, costs: &[Rational]) {
        self.cost = costs.to_vec();
        self.cost_value = Rational::zero();
        for r in 0..self.rows.len() {
            let coef = self.cost[self.basis[r]].clone();
            if coef.is_zero() {
                continue;
            }
            let row = self.rows[r].clone();
            for (cj, p) in self.cost.iter_mut().zip(&row) {
                *cj = &*cj - &(&coef * p);
            }
            let delta = &coef * &self.rhs[r];
            self.cost_value = &self.cost_value + &delta;
        }
    }

    fn basic_solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cost.len()];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[r].clone();
        }
        x
    }

    /// Feasible direction of unbounded improvement for `entering`.
    fn unbounded_direction(&self, entering: usize) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.cost.len()];
        d[entering] = Rational::one();
        for (r, &b) in self.basis.iter().enumerate() {
            d[b] = -self.rows[r][entering].clone();
        }
        d
    }
}
