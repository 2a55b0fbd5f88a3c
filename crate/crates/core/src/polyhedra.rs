//! Exact rational linear algebra and strict-feasibility testing for the
//! polyhedral cells of a tropical prevariety.
//!
//! A [`LinearSystem`] holds linear equalities `row·w = rhs` and *strict*
//! inequalities `row·w < rhs` over `Q^N`. Strict feasibility is decided
//! exactly by maximizing an auxiliary slack `t` subject to `row·w + t <= rhs`
//! for every strict row, the equalities, and `t <= 1`: a point with `t > 0`
//! satisfies every strict row with positive margin. The LP runs in exact
//! rational arithmetic with Bland's rule, so it terminates and never
//! misclassifies.
//!
//! A nonempty cell of this shape is relatively open in the affine hull of its
//! equalities, so its dimension is `N - rank(equality rows)`; no strict
//! inequality can reduce it.

mod simplex;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{format_rational, parse_rational, ParseRationalError, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyhedraError {
    #[error("row has {got} coefficients, ambient dimension is {expected}")]
    RowLength { expected: usize, got: usize },
    #[error(transparent)]
    ParseRational(#[from] ParseRationalError),
}

/// One linear constraint `coeffs · w (= | <) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConstraintRepr", into = "ConstraintRepr")]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Serialize, Deserialize)]
struct ConstraintRepr {
    coeffs: Vec<String>,
    rhs: String,
}

impl TryFrom<ConstraintRepr> for LinearConstraint {
    type Error = PolyhedraError;

    fn try_from(repr: ConstraintRepr) -> Result<Self, Self::Error> {
        Ok(LinearConstraint {
            coeffs: repr
                .coeffs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?,
            rhs: parse_rational(&repr.rhs)?,
        })
    }
}

impl From<LinearConstraint> for ConstraintRepr {
    fn from(c: LinearConstraint) -> ConstraintRepr {
        ConstraintRepr {
            coeffs: c.coeffs.iter().map(format_rational).collect(),
            rhs: format_rational(&c.rhs),
        }
    }
}

impl LinearConstraint {
    pub fn dot(&self, point: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(point)
            .map(|(a, x)| a * x)
            .fold(Rational::zero(), |acc, v| acc + v)
    }
}

/// Linear equalities and strict inequalities over `Q^N`: one candidate cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    ambient_dim: usize,
    equalities: Vec<LinearConstraint>,
    strict_inequalities: Vec<LinearConstraint>,
}

impl LinearSystem {
    pub fn new(ambient_dim: usize) -> Self {
        LinearSystem {
            ambient_dim,
            equalities: Vec::new(),
            strict_inequalities: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn equalities(&self) -> &[LinearConstraint] {
        &self.equalities
    }

    pub fn strict_inequalities(&self) -> &[LinearConstraint] {
        &self.strict_inequalities
    }

    /// Add `coeffs · w = rhs`.
    pub fn push_equality(
        &mut self,
        coeffs: Vec<Rational>,
        rhs: Rational,
    ) -> Result<(), PolyhedraError> {
        self.check_row(&coeffs)?;
        self.equalities.push(LinearConstraint { coeffs, rhs });
        Ok(())
    }

    /// Add `coeffs · w < rhs` (strict).
    pub fn push_strict(
        &mut self,
        coeffs: Vec<Rational>,
        rhs: Rational,
    ) -> Result<(), PolyhedraError> {
        self.check_row(&coeffs)?;
        self.strict_inequalities.push(LinearConstraint { coeffs, rhs });
        Ok(())
    }

    fn check_row(&self, coeffs: &[Rational]) -> Result<(), PolyhedraError> {
        if coeffs.len() != self.ambient_dim {
            return Err(PolyhedraError::RowLength {
                expected: self.ambient_dim,
                got: coeffs.len(),
            });
        }
        Ok(())
    }

    /// Exact check that `point` satisfies every equality exactly and every
    /// strict inequality strictly.
    pub fn check_point(&self, point: &[Rational]) -> bool {
        point.len() == self.ambient_dim
            && self.equalities.iter().all(|c| c.dot(point) == c.rhs)
            && self.strict_inequalities.iter().all(|c| c.dot(point) < c.rhs)
    }

    /// JSON dump for failure reproduction.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("linear system serializes")
    }

    /// A constraint with all-zero coefficients is decided by its right-hand
    /// side alone; detect the unsatisfiable ones without running the LP.
    fn has_trivially_false_row(&self) -> bool {
        let eq_false = self
            .equalities
            .iter()
            .any(|c| c.coeffs.iter().all(Zero::is_zero) && !c.rhs.is_zero());
        let strict_false = self
            .strict_inequalities
            .iter()
            .any(|c| c.coeffs.iter().all(Zero::is_zero) && c.rhs <= Rational::zero());
        eq_false || strict_false
    }
}

/// Rank over `Q` of a set of rows, by exact Gaussian elimination.
pub fn rank(rows: &[Vec<Rational>]) -> Result<usize, PolyhedraError> {
    let width = match rows.first() {
        None => return Ok(0),
        Some(r) => r.len(),
    };
    for r in rows {
        if r.len() != width {
            return Err(PolyhedraError::RowLength {
                expected: width,
                got: r.len(),
            });
        }
    }
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut rank = 0usize;
    for col in 0..width {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for v in &mut m[rank] {
            *v *= &inv;
        }
        let pivot_row = std::mem::take(&mut m[rank]);
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (target, source) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *target -= &factor * source;
                }
            }
        }
        m[rank] = pivot_row;
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Ok(rank)
}

/// Decide strict feasibility; on success return a rational witness that
/// satisfies every equality exactly and every strict inequality strictly.
pub fn strictly_feasible(sys: &LinearSystem) -> Option<Vec<Rational>> {
    if sys.has_trivially_false_row() {
        return None;
    }
    match simplex::max_strict_slack(sys) {
        simplex::SlackOutcome::Infeasible => None,
        simplex::SlackOutcome::Optimal { slack, point } => {
            if slack > Rational::zero() {
                debug_assert!(sys.check_point(&point));
                Some(point)
            } else {
                None
            }
        }
    }
}

/// Feasibility, dimension, and witness of a cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellResult {
    Infeasible,
    Feasible {
        /// `ambient_dim - rank(equality rows)`.
        dimension: usize,
        witness: Vec<Rational>,
    },
}

impl CellResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, CellResult::Feasible { .. })
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            CellResult::Feasible { dimension, .. } => Some(*dimension),
            CellResult::Infeasible => None,
        }
    }

    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            CellResult::Feasible { witness, .. } => Some(witness),
            CellResult::Infeasible => None,
        }
    }
}

/// Strict feasibility plus exact dimension of the cell.
pub fn cell_dimension(sys: &LinearSystem) -> CellResult {
    match strictly_feasible(sys) {
        None => CellResult::Infeasible,
        Some(witness) => {
            let eq_rows: Vec<Vec<Rational>> = sys
                .equalities
                .iter()
                .map(|c| c.coeffs.clone())
                .collect();
            let rank = rank(&eq_rows).expect("rows validated on insertion");
            CellResult::Feasible {
                dimension: sys.ambient_dim - rank,
                witness,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational, rational_int};
    use proptest::prelude::*;

    fn row(vals: &[i64]) -> Vec<Rational> {
        vals.iter().map(|&v| rational_int(v)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[row(&[1, 0, 0]), row(&[0, 1, 0])]).unwrap(), 2);
        assert_eq!(rank(&[row(&[1, 1]), row(&[2, 2])]).unwrap(), 1);
        assert_eq!(rank(&[]).unwrap(), 0);
        assert!(matches!(
            rank(&[row(&[1, 0]), row(&[1])]),
            Err(PolyhedraError::RowLength { .. })
        ));
    }

    #[test]
    fn strict_feasibility_examples() {
        // w0 = w1, w0 < w2 in Q^3.
        let mut sys = LinearSystem::new(3);
        sys.push_equality(row(&[1, -1, 0]), rational_int(0)).unwrap();
        sys.push_strict(row(&[1, 0, -1]), rational_int(0)).unwrap();
        let w = strictly_feasible(&sys).expect("feasible");
        assert!(sys.check_point(&w));

        // w0 < 0 and w0 > 1: empty.
        let mut sys = LinearSystem::new(1);
        sys.push_strict(row(&[1]), rational_int(0)).unwrap();
        sys.push_strict(row(&[-1]), rational_int(-1)).unwrap();
        assert_eq!(strictly_feasible(&sys), None);

        // Inconsistent equalities.
        let mut sys = LinearSystem::new(2);
        sys.push_equality(row(&[1, 0]), rational_int(0)).unwrap();
        sys.push_equality(row(&[1, 0]), rational_int(1)).unwrap();
        assert_eq!(strictly_feasible(&sys), None);
    }

    #[test]
    fn zero_rows_detected_without_lp() {
        let mut sys = LinearSystem::new(2);
        sys.push_strict(row(&[0, 0]), rational_int(0)).unwrap();
        assert_eq!(strictly_feasible(&sys), None);

        let mut sys = LinearSystem::new(2);
        sys.push_equality(row(&[0, 0]), rational_int(3)).unwrap();
        assert_eq!(strictly_feasible(&sys), None);

        // 0·w < 1 is vacuous, not contradictory.
        let mut sys = LinearSystem::new(2);
        sys.push_strict(row(&[0, 0]), rational_int(1)).unwrap();
        assert!(strictly_feasible(&sys).is_some());

        // 0·w = 0 is vacuous.
        let mut sys = LinearSystem::new(2);
        sys.push_equality(row(&[0, 0]), rational_int(0)).unwrap();
        assert!(strictly_feasible(&sys).is_some());
    }

    #[test]
    fn cell_dimension_examples() {
        let mut sys = LinearSystem::new(3);
        sys.push_equality(row(&[1, -1, 0]), rational_int(0)).unwrap();
        sys.push_strict(row(&[1, 0, -1]), rational_int(0)).unwrap();
        assert_eq!(cell_dimension(&sys).dimension(), Some(2));

        let sys = LinearSystem::new(2);
        assert_eq!(cell_dimension(&sys).dimension(), Some(2));

        // A line: w0 = w1 = w2 with a vacuous strict inequality.
        let mut sys = LinearSystem::new(3);
        sys.push_equality(row(&[1, -1, 0]), rational_int(0)).unwrap();
        sys.push_equality(row(&[0, 1, -1]), rational_int(0)).unwrap();
        sys.push_strict(row(&[0, 0, 0]), rational_int(1)).unwrap();
        assert_eq!(cell_dimension(&sys).dimension(), Some(1));

        let mut sys = LinearSystem::new(1);
        sys.push_strict(row(&[1]), rational_int(0)).unwrap();
        sys.push_strict(row(&[-1]), rational_int(-1)).unwrap();
        assert_eq!(cell_dimension(&sys), CellResult::Infeasible);
    }

    #[test]
    fn fractional_data() {
        // w0 + w1/2 = 1/3, w0 - w1 < -5/7
        let mut sys = LinearSystem::new(2);
        sys.push_equality(vec![rational_int(1), rational(1, 2)], rational(1, 3))
            .unwrap();
        sys.push_strict(vec![rational_int(1), rational_int(-1)], rational(-5, 7))
            .unwrap();
        let w = strictly_feasible(&sys).expect("feasible");
        assert!(sys.check_point(&w));
        assert_eq!(cell_dimension(&sys).dimension(), Some(1));
    }

    #[test]
    fn system_json_round_trip() {
        let mut sys = LinearSystem::new(2);
        sys.push_equality(vec![rational_int(1), rational(-1, 2)], rational(1, 3))
            .unwrap();
        sys.push_strict(row(&[0, 1]), rational_int(5)).unwrap();
        let json = sys.to_json();
        let back: LinearSystem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sys);
    }

    /// Strategy: a feasible-by-construction system around a random anchor
    /// point, with random equalities through it and strict rows with
    /// positive margin.
    fn arb_feasible_system() -> impl Strategy<Value = (LinearSystem, Vec<Rational>)> {
        (1usize..=5).prop_flat_map(|dim| {
            let anchor = prop::collection::vec((-6i64..=6, 1i64..=3), dim..=dim);
            let eqs = prop::collection::vec(
                prop::collection::vec(-4i64..=4, dim..=dim),
                0..=3,
            );
            let stricts = prop::collection::vec(
                (prop::collection::vec(-4i64..=4, dim..=dim), 1i64..=8),
                0..=4,
            );
            (anchor, eqs, stricts).prop_map(move |(anchor, eqs, stricts)| {
                let anchor: Vec<Rational> =
                    anchor.into_iter().map(|(p, q)| rational(p, q)).collect();
                let mut sys = LinearSystem::new(dim);
                for coeffs in eqs {
                    let coeffs: Vec<Rational> =
                        coeffs.into_iter().map(rational_int).collect();
                    let rhs = LinearConstraint {
                        coeffs: coeffs.clone(),
                        rhs: Rational::zero(),
                    }
                    .dot(&anchor);
                    sys.push_equality(coeffs, rhs).unwrap();
                }
                for (coeffs, margin) in stricts {
                    let coeffs: Vec<Rational> =
                        coeffs.into_iter().map(rational_int).collect();
                    let rhs = LinearConstraint {
                        coeffs: coeffs.clone(),
                        rhs: Rational::zero(),
                    }
                    .dot(&anchor)
                        + rational(margin, 2);
                    sys.push_strict(coeffs, rhs).unwrap();
                }
                (sys, anchor)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn witness_is_exactly_valid((sys, _anchor) in arb_feasible_system()) {
            let w = strictly_feasible(&sys).expect("constructed feasible");
            prop_assert!(sys.check_point(&w));
        }

        #[test]
        fn equality_rows_only_shrink_dimension((sys, anchor) in arb_feasible_system()) {
            let before = cell_dimension(&sys);
            let dim_before = before.dimension().expect("constructed feasible");

            // An extra equality through the anchor keeps the system feasible.
            let mut grown = sys.clone();
            let coeffs: Vec<Rational> = (0..sys.ambient_dim())
                .map(|i| rational_int((i as i64 % 3) - 1))
                .collect();
            let rhs = LinearConstraint { coeffs: coeffs.clone(), rhs: Rational::zero() }
                .dot(&anchor);
            grown.push_equality(coeffs, rhs).unwrap();
            let dim_after = cell_dimension(&grown).dimension().expect("still feasible");
            prop_assert!(dim_after <= dim_before);

            // An extra strict inequality with margin never changes it.
            let mut widened = sys.clone();
            let coeffs: Vec<Rational> = (0..sys.ambient_dim())
                .map(|i| rational_int(if i % 2 == 0 { 1 } else { -2 }))
                .collect();
            let rhs = LinearConstraint { coeffs: coeffs.clone(), rhs: Rational::zero() }
                .dot(&anchor) + rational_int(1);
            widened.push_strict(coeffs, rhs).unwrap();
            let dim_widened = cell_dimension(&widened).dimension().expect("still feasible");
            prop_assert_eq!(dim_widened, dim_before);
        }

        #[test]
        fn deterministic((sys, _anchor) in arb_feasible_system()) {
            prop_assert_eq!(cell_dimension(&sys), cell_dimension(&sys));
        }
    }
}
