//! Exact tools for tropical (min-plus) holonomic sequences.
//!
//! A sequence `w_0, w_1, ...` of rationals is *tropical holonomic of order n*
//! for coefficient polynomials `A_0, ..., A_n` when, at every window `j`, the
//! minimum of `w_{j+k} + A_k(j)` over `k = 0..=n` is attained at least twice.
//! The length-`N` solution set `W_N` is a finite union of convex polyhedra,
//! and the growth rate `dim(W_N) / N` converges; for second-order systems the
//! limit is one of `1/3`, `1/4`, `0`, decided by two derived polynomials.
//!
//! The crate is organized around that pipeline:
//!
//! * [`poly`] — exact rational polynomial arithmetic, including the eventual
//!   sign of `P(i)` for large `i` and an explicit index past all sign changes.
//! * [`tropical`] — the min-attained-twice relation, the second-order entropy
//!   classifier, and generators for witness sequence families.
//! * [`polyhedra`] — exact rank, strict feasibility (rational simplex), and
//!   dimension of cells cut out by linear equalities and strict inequalities.
//! * [`dimension`] — enumeration of tie patterns, attainment graphs, exact
//!   `dim(W_N)`, entropy scans, and structural predicates on feasible
//!   patterns.
//!
//! Everything is exact: no floating point, no tolerances.
//!
//! ```
//! use tropen::dimension::dim_wn;
//! use tropen::poly::Polynomial;
//! use tropen::tropical::{classify, check_sequence, witness_case1, EntropyCase};
//! use tropen::{HolonomicSystem, Rational};
//!
//! // The all-zero system ties plain minima; its entropy class is 1/3.
//! let zero = Polynomial::zero();
//! let class = classify(&zero, &zero, &zero);
//! assert_eq!(class.case, EntropyCase::Case1);
//!
//! // One free slack per block of three indices.
//! let slacks = [Rational::from_integer(7.into()), Rational::from_integer(3.into())];
//! let w = witness_case1(&zero, &zero, &zero, 6, Rational::from_integer(0.into()), &slacks)?;
//! let sys = HolonomicSystem::second_order_constants(0, 0, 0);
//! assert!(check_sequence(&sys, &w).is_valid());
//!
//! // dim(W_6) computed exactly by cell enumeration.
//! assert_eq!(dim_wn(&sys, 6), 3);
//! # Ok::<(), tropen::tropical::TropicalError>(())
//! ```

#![forbid(unsafe_code)]

pub mod dimension;
pub mod poly;
pub mod polyhedra;
pub mod tropical;

pub use poly::{parse_rational, Polynomial, Rational};
pub use polyhedra::{CellResult, LinearConstraint, LinearSystem};
pub use tropical::{EntropyCase, EntropyClass, HolonomicSystem, Sequence};

pub use dimension::{AttainmentGraph, LemmaReport, MaxCell, Pattern, ScanReport};
