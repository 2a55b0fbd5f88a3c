//! Two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Used for one job: maximize the auxiliary slack `t` of a
//! [`LinearSystem`](super::LinearSystem), subject to
//!
//! ```text
//! row·w           = rhs   (every equality)
//! row·w + t      <= rhs   (every strict inequality)
//! t              <= 1
//! ```
//!
//! with `w` and `t` free. The strict system has an interior point exactly
//! when the optimum satisfies `t* > 0`. Bland's pivot rule (lowest eligible
//! variable index enters; ratio ties leave by lowest basic variable index)
//! never cycles, so exact arithmetic makes the answer unconditional.

use num_traits::{One, Signed, Zero};

use super::LinearSystem;
use crate::poly::Rational;

pub(crate) enum SlackOutcome {
    Infeasible,
    Optimal { slack: Rational, point: Vec<Rational> },
}

pub(crate) fn max_strict_slack(sys: &LinearSystem) -> SlackOutcome {
    let n_w = sys.ambient_dim();
    let n_strict = sys.strict_inequalities().len();
    // Columns: w split into nonnegative parts p - q, then t+ and t-, then one
    // slack per inequality row (strict rows and the t <= 1 bound).
    let col_q = n_w;
    let col_t_plus = 2 * n_w;
    let col_t_minus = 2 * n_w + 1;
    let col_slack0 = 2 * n_w + 2;
    let ncols = col_slack0 + n_strict + 1;

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();

    for eq in sys.equalities() {
        let mut row = vec![Rational::zero(); ncols];
        for (j, a) in eq.coeffs.iter().enumerate() {
            row[j] = a.clone();
            row[col_q + j] = -a;
        }
        rows.push(row);
        rhs.push(eq.rhs.clone());
    }
    for (k, ineq) in sys.strict_inequalities().iter().enumerate() {
        let mut row = vec![Rational::zero(); ncols];
        for (j, g) in ineq.coeffs.iter().enumerate() {
            row[j] = g.clone();
            row[col_q + j] = -g;
        }
        row[col_t_plus] = Rational::one();
        row[col_t_minus] = -Rational::one();
        row[col_slack0 + k] = Rational::one();
        rows.push(row);
        rhs.push(ineq.rhs.clone());
    }
    {
        let mut row = vec![Rational::zero(); ncols];
        row[col_t_plus] = Rational::one();
        row[col_t_minus] = -Rational::one();
        row[col_slack0 + n_strict] = Rational::one();
        rows.push(row);
        rhs.push(Rational::one());
    }

    let mut cost = vec![Rational::zero(); ncols];
    cost[col_t_plus] = -Rational::one();
    cost[col_t_minus] = Rational::one();

    match solve_min(rows, rhs, cost) {
        LpOutcome::Infeasible => SlackOutcome::Infeasible,
        LpOutcome::Unbounded => {
            // t <= 1 bounds the objective; an unbounded ray would mean the
            // tableau was assembled wrong.
            unreachable!("slack LP is bounded by construction")
        }
        LpOutcome::Optimal { value, x } => {
            let point: Vec<Rational> = (0..n_w).map(|j| &x[j] - &x[col_q + j]).collect();
            SlackOutcome::Optimal {
                slack: -value,
                point,
            }
        }
    }
}

enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    obj: Rational,
}

/// Minimize `cost · x` subject to `rows · x = rhs`, `x >= 0`.
fn solve_min(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>, cost: Vec<Rational>) -> LpOutcome {
    let m = rows.len();
    let n_real = cost.len();

    for i in 0..m {
        if rhs[i].is_negative() {
            for v in &mut rows[i] {
                *v = -v.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
    }

    // Phase 1: artificial basis, minimize the sum of artificials.
    for (i, row) in rows.iter_mut().enumerate() {
        row.extend((0..m).map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
    }
    let mut phase1_cost = vec![Rational::zero(); n_real + m];
    for j in 0..n_real {
        let mut s = Rational::zero();
        for row in &rows {
            s += &row[j];
        }
        phase1_cost[j] = -s;
    }
    let mut t = Tableau {
        rows,
        rhs: rhs.clone(),
        basis: (n_real..n_real + m).collect(),
        cost: phase1_cost,
        obj: rhs.iter().fold(Rational::zero(), |acc, v| acc + v),
    };

    if !t.optimize() {
        unreachable!("phase 1 objective is bounded below by zero")
    }
    if t.obj.is_positive() {
        return LpOutcome::Infeasible;
    }

    // Remove artificials from the basis: pivot them out on any nonzero real
    // column, or drop the row as redundant.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n_real {
            debug_assert!(t.rhs[r].is_zero(), "basic artificial at optimum zero");
            if let Some(j) = (0..n_real).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, j);
                r += 1;
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }

    // Phase 2: drop artificial columns, restore the real objective.
    for row in &mut t.rows {
        row.truncate(n_real);
    }
    let mut reduced = cost.clone();
    let mut obj = Rational::zero();
    for (i, &b) in t.basis.iter().enumerate() {
        if cost[b].is_zero() {
            continue;
        }
        for (target, coeff) in reduced.iter_mut().zip(&t.rows[i]) {
            *target -= &cost[b] * coeff;
        }
        obj += &cost[b] * &t.rhs[i];
    }
    t.cost = reduced;
    t.obj = obj;

    if !t.optimize() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n_real];
    for (i, &b) in t.basis.iter().enumerate() {
        x[b] = t.rhs[i].clone();
    }
    LpOutcome::Optimal { value: t.obj, x }
}

impl Tableau {
    /// Bland pivoting to optimality. Returns false if an unbounded ray is
    /// found.
    fn optimize(&mut self) -> bool {
        loop {
            let Some(col) = self.cost.iter().position(|c| c.is_negative()) else {
                return true;
            };
            let Some(row) = self.choose_leaving(col) else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    /// Minimum-ratio row for the entering column; ties broken by the lowest
    /// basic variable index (the other half of Bland's rule).
    fn choose_leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(Rational, usize)> = None;
        for i in 0..self.rows.len() {
            if !self.rows[i][col].is_positive() {
                continue;
            }
            let ratio = &self.rhs[i] / &self.rows[i][col];
            let better = match &best {
                None => true,
                Some((best_ratio, best_row)) => {
                    ratio < *best_ratio
                        || (ratio == *best_ratio && self.basis[i] < self.basis[*best_row])
                }
            };
            if better {
                best = Some((ratio, i));
            }
        }
        best.map(|(_, i)| i)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        let inv = piv.recip();
        for v in &mut self.rows[r] {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;

        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let delta = &f * &self.rows[r][j];
                self.rows[i][j] -= delta;
            }
            let delta = &f * &self.rhs[r];
            self.rhs[i] -= delta;
        }

        let f = self.cost[c].clone();
        if !f.is_zero() {
            for j in 0..self.cost.len() {
                let delta = &f * &self.rows[r][j];
                self.cost[j] -= delta;
            }
            let delta = &f * &self.rhs[r];
            self.obj += delta;
        }
        self.basis[r] = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational, rational_int};

    fn row(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| rational_int(v)).collect()
    }

    #[test]
    fn unconstrained_slack_hits_bound() {
        let sys = LinearSystem::new(2);
        match max_strict_slack(&sys) {
            SlackOutcome::Optimal { slack, point } => {
                assert_eq!(slack, rational_int(1));
                assert_eq!(point, row(&[0, 0]));
            }
            SlackOutcome::Infeasible => panic!("free space is feasible"),
        }
    }

    #[test]
    fn equalities_pin_the_point() {
        // w0 + w1 = 3, w0 - w1 = 1 has the unique solution (2, 1).
        let mut sys = LinearSystem::new(2);
        sys.push_equality(row(&[1, 1]), rational_int(3)).unwrap();
        sys.push_equality(row(&[1, -1]), rational_int(1)).unwrap();
        match max_strict_slack(&sys) {
            SlackOutcome::Optimal { slack, point } => {
                assert_eq!(slack, rational_int(1));
                assert_eq!(point, row(&[2, 1]));
            }
            SlackOutcome::Infeasible => panic!("consistent equalities"),
        }
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut sys = LinearSystem::new(1);
        sys.push_equality(row(&[2]), rational_int(2)).unwrap();
        sys.push_equality(row(&[1]), rational_int(1)).unwrap();
        sys.push_strict(row(&[1]), rational_int(2)).unwrap();
        match max_strict_slack(&sys) {
            SlackOutcome::Optimal { slack, point } => {
                assert!(slack.is_positive());
                assert_eq!(point, row(&[1]));
            }
            SlackOutcome::Infeasible => panic!("w = 1 satisfies everything"),
        }
    }

    #[test]
    fn squeezed_interval_gives_nonpositive_slack() {
        // w0 < 1/2 and w0 > 1/2: optimum slack is negative, never positive.
        let mut sys = LinearSystem::new(1);
        sys.push_strict(row(&[1]), rational(1, 2)).unwrap();
        sys.push_strict(row(&[-1]), rational(-1, 2)).unwrap();
        match max_strict_slack(&sys) {
            SlackOutcome::Optimal { slack, .. } => assert!(!slack.is_positive()),
            SlackOutcome::Infeasible => panic!("weak version is satisfiable"),
        }
    }

    #[test]
    fn boundary_point_allowed_weakly_but_not_strictly() {
        // w0 = 0 with w0 < 0: weakly consistent at the boundary, slack 0.
        let mut sys = LinearSystem::new(1);
        sys.push_equality(row(&[1]), rational_int(0)).unwrap();
        sys.push_strict(row(&[1]), rational_int(0)).unwrap();
        match max_strict_slack(&sys) {
            SlackOutcome::Optimal { slack, .. } => assert_eq!(slack, rational_int(0)),
            SlackOutcome::Infeasible => panic!("weak system is satisfiable"),
        }
    }
}
