//! The min-attained-twice relation, the second-order entropy classifier, and
//! witness sequence generators.
//!
//! A [`HolonomicSystem`] of order `n` holds coefficient polynomials
//! `A_0, ..., A_n`. A [`Sequence`] `w` satisfies the system when, for every
//! window `j`, the minimum of `w_{j+k} + A_k(j)` over `k = 0..=n` is attained
//! by at least two indices `k` — the tropical counterpart of a linear
//! recurrence summing to zero.
//!
//! For second-order systems `(A, B, C)` two derived polynomials decide the
//! entropy of the solution family:
//!
//! * `D(x) = B(x-1) + B(x) - A(x) - C(x-1)`
//! * `E(x) = B(x+1) - B(x-1) - A(x+1) + A(x) - C(x) + C(x-1)`
//!
//! `E` is the difference `D(x+1) - D(x)`, so `E ≡ 0` exactly when `D` is
//! constant. The classifier returns:
//!
//! * [`EntropyCase::Case1`], entropy `1/3`, when `D ≡ 0`;
//! * [`EntropyCase::Case2`], entropy `1/4`, when `D` is eventually positive
//!   and `E ≡ 0` (i.e. `D` is a positive constant);
//! * [`EntropyCase::Case3`], entropy `0`, otherwise.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{format_rational, parse_rational, ParseRationalError, Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TropicalError {
    #[error("order must be at least 1")]
    InvalidOrder,
    #[error("order {order} requires {} coefficient polynomials, got {got}", order + 1)]
    CoefficientCount { order: usize, got: usize },
    #[error("window {window} out of range: sequence of length {len} has windows 0..{windows}")]
    WindowOutOfRange {
        window: usize,
        len: usize,
        windows: usize,
    },
    #[error("expected a {expected} system, classified as {found}")]
    WrongCase {
        expected: EntropyCase,
        found: EntropyCase,
    },
    #[error("slack {index} is negative")]
    NegativeSlack { index: usize },
    #[error("expected {expected} slacks for this length, got {got}")]
    SlackCount { expected: usize, got: usize },
    #[error("prefix must have length {expected}, got {got}")]
    PrefixLength { expected: usize, got: usize },
    #[error("prefix violates the relation at window {window}")]
    InvalidPrefix { window: usize },
    #[error("input sequence violates the relation at window {window}")]
    InvalidSequence { window: usize },
    #[error("sequence of length {len} is too short, need at least {needed}")]
    TooShort { len: usize, needed: usize },
    #[error("sign threshold {j0} does not fit in memory-sized indices")]
    ThresholdOverflow { j0: BigInt },
    #[error(transparent)]
    ParseRational(#[from] ParseRationalError),
}

/// Order-`n` tropical holonomic system: coefficient polynomials
/// `A_0, ..., A_n`, position `k` applying to the `k`-th entry of a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct HolonomicSystem {
    order: usize,
    coeffs: Vec<Polynomial>,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    order: usize,
    coeffs: Vec<Vec<String>>,
}

impl TryFrom<SystemRepr> for HolonomicSystem {
    type Error = TropicalError;

    fn try_from(repr: SystemRepr) -> Result<Self, Self::Error> {
        let coeffs = repr
            .coeffs
            .into_iter()
            .map(Polynomial::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        HolonomicSystem::new(repr.order, coeffs)
    }
}

impl From<HolonomicSystem> for SystemRepr {
    fn from(sys: HolonomicSystem) -> SystemRepr {
        SystemRepr {
            order: sys.order,
            coeffs: sys.coeffs.into_iter().map(Vec::<String>::from).collect(),
        }
    }
}

impl HolonomicSystem {
    pub fn new(order: usize, coeffs: Vec<Polynomial>) -> Result<Self, TropicalError> {
        if order == 0 {
            return Err(TropicalError::InvalidOrder);
        }
        if coeffs.len() != order + 1 {
            return Err(TropicalError::CoefficientCount {
                order,
                got: coeffs.len(),
            });
        }
        Ok(HolonomicSystem { order, coeffs })
    }

    /// Second-order system `(A, B, C)`.
    pub fn second_order(a: Polynomial, b: Polynomial, c: Polynomial) -> Self {
        HolonomicSystem {
            order: 2,
            coeffs: vec![a, b, c],
        }
    }

    /// Second-order system with constant coefficients.
    pub fn second_order_constants(a: i64, b: i64, c: i64) -> Self {
        Self::second_order(
            Polynomial::from_integers(&[a]),
            Polynomial::from_integers(&[b]),
            Polynomial::from_integers(&[c]),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// The triple `(A, B, C)` of a second-order system.
    pub fn second_order_coeffs(&self) -> Option<(&Polynomial, &Polynomial, &Polynomial)> {
        match self.coeffs.as_slice() {
            [a, b, c] => Some((a, b, c)),
            _ => None,
        }
    }

    /// Number of windows the relation imposes on a length-`len` sequence.
    pub fn window_count(&self, len: usize) -> usize {
        len.saturating_sub(self.order)
    }
}

/// Finite sequence of rationals, indexed from 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Sequence {
    values: Vec<Rational>,
}

impl Sequence {
    pub fn new(values: Vec<Rational>) -> Self {
        Sequence { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Sequence {
            values: values
                .iter()
                .map(|&v| Rational::from_integer(BigInt::from(v)))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn push(&mut self, value: Rational) {
        self.values.push(value);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.values.iter()
    }
}

impl std::ops::Index<usize> for Sequence {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.values[i]
    }
}

impl TryFrom<Vec<String>> for Sequence {
    type Error = ParseRationalError;

    fn try_from(strings: Vec<String>) -> Result<Self, Self::Error> {
        Ok(Sequence {
            values: strings
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?,
        })
    }
}

impl From<Sequence> for Vec<String> {
    fn from(seq: Sequence) -> Vec<String> {
        seq.values.iter().map(format_rational).collect()
    }
}

/// Indices `k` where `w_{j+k} + A_k(j)` attains the window minimum, sorted.
/// Never empty for a valid window.
pub fn argmin_set(
    sys: &HolonomicSystem,
    w: &Sequence,
    window: usize,
) -> Result<Vec<usize>, TropicalError> {
    let windows = sys.window_count(w.len());
    if window >= windows {
        return Err(TropicalError::WindowOutOfRange {
            window,
            len: w.len(),
            windows,
        });
    }
    let terms: Vec<Rational> = (0..=sys.order)
        .map(|k| &w[window + k] + sys.coeffs[k].eval(window as i64))
        .collect();
    let min = terms.iter().min().expect("order >= 1").clone();
    Ok(terms
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == min)
        .map(|(k, _)| k)
        .collect())
}

/// Outcome of [`check_sequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceCheck {
    Valid,
    /// The first window whose minimum is attained only once.
    FirstFailure { window: usize },
}

impl SequenceCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, SequenceCheck::Valid)
    }

    pub fn first_failure(&self) -> Option<usize> {
        match self {
            SequenceCheck::Valid => None,
            SequenceCheck::FirstFailure { window } => Some(*window),
        }
    }
}

/// Check every window of `w` against the relation. Sequences shorter than
/// `order + 1` have no windows and are vacuously valid.
pub fn check_sequence(sys: &HolonomicSystem, w: &Sequence) -> SequenceCheck {
    for window in 0..sys.window_count(w.len()) {
        let ties = argmin_set(sys, w, window).expect("window in range");
        if ties.len() < 2 {
            return SequenceCheck::FirstFailure { window };
        }
    }
    SequenceCheck::Valid
}

/// The three entropy classes of second-order systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntropyCase {
    Case1,
    Case2,
    Case3,
}

impl fmt::Display for EntropyCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntropyCase::Case1 => write!(f, "Case1"),
            EntropyCase::Case2 => write!(f, "Case2"),
            EntropyCase::Case3 => write!(f, "Case3"),
        }
    }
}

/// Classification of a second-order system, with the diagnostics that decide
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyClass {
    pub case: EntropyCase,
    /// `1/3`, `1/4`, or `0`.
    pub entropy: Rational,
    /// `D(x) = B(x-1) + B(x) - A(x) - C(x-1)`.
    pub d: Polynomial,
    /// `E(x) = B(x+1) - B(x-1) - A(x+1) + A(x) - C(x) + C(x-1) = D(x+1) - D(x)`.
    pub e: Polynomial,
    /// Smallest `j0 >= 0` with `4*j0 >= eventual_sign_index(D)`; the sign of
    /// `D(i)` is stable for all `i >= 4*j0`. Zero when `D ≡ 0`.
    pub j0: BigInt,
}

/// Classify `(A, B, C)` into the entropy trichotomy.
pub fn classify(a: &Polynomial, b: &Polynomial, c: &Polynomial) -> EntropyClass {
    let d = &(&b.shift(-1) + b) - &(a + &c.shift(-1));
    let e = &d.shift(1) - &d;
    let j0 = match d.eventual_sign_index() {
        Ok(m) => m.div_ceil(&BigInt::from(4)).max(BigInt::zero()),
        Err(_) => BigInt::zero(),
    };
    let (case, entropy) = if d.is_zero() {
        (EntropyCase::Case1, Rational::new(1.into(), 3.into()))
    } else if d.eventual_sign() == 1 && e.is_zero() {
        (EntropyCase::Case2, Rational::new(1.into(), 4.into()))
    } else {
        (EntropyCase::Case3, Rational::zero())
    };
    EntropyClass {
        case,
        entropy,
        d,
        e,
        j0,
    }
}

impl EntropyClass {
    /// `j0` as a `usize`, for indexing into desk-scale sequences.
    pub fn j0_usize(&self) -> Result<usize, TropicalError> {
        usize::try_from(&self.j0).map_err(|_| TropicalError::ThresholdOverflow {
            j0: self.j0.clone(),
        })
    }
}

/// Number of slacks [`witness_case1`] expects for a length-`n` output: one
/// per index of the form `3j + 2` below `n`.
pub fn case1_slack_count(n: usize) -> usize {
    if n >= 3 {
        (n - 3) / 3 + 1
    } else {
        0
    }
}

/// Number of slacks [`witness_case2`] expects: one per index `4j + 3 < n`
/// with `j >= j0`.
pub fn case2_slack_count(n: usize, j0: usize) -> usize {
    let first = 4 * j0 + 3;
    if n > first {
        (n - 1 - first) / 4 + 1
    } else {
        0
    }
}

/// Build a length-`n` member of the case-1 witness family:
///
/// * `w_0 = u0`,
/// * `w_{3j+1} = w_{3j} + B(3j-1) - C(3j-1)`,
/// * `w_{3j+2} = w_{3j} + A(3j) - C(3j) + slack_j` (slack `>= 0`),
/// * `w_{3j+3} = w_{3j+1} + A(3j+1) - C(3j+1)`.
///
/// Each nonnegative slack is a free parameter; every choice satisfies the
/// relation, which is where the `1/3` entropy comes from.
pub fn witness_case1(
    a: &Polynomial,
    b: &Polynomial,
    c: &Polynomial,
    n: usize,
    u0: Rational,
    slacks: &[Rational],
) -> Result<Sequence, TropicalError> {
    let class = classify(a, b, c);
    if class.case != EntropyCase::Case1 {
        return Err(TropicalError::WrongCase {
            expected: EntropyCase::Case1,
            found: class.case,
        });
    }
    check_slacks(slacks, case1_slack_count(n))?;
    if n == 0 {
        return Ok(Sequence::default());
    }
    let mut w = Vec::with_capacity(n);
    w.push(u0);
    let mut j = 0usize;
    while w.len() < n {
        let base = 3 * j as i64;
        // w_{3j+1}
        w.push(&w[3 * j] + b.eval(base - 1) - c.eval(base - 1));
        if w.len() >= n {
            break;
        }
        // w_{3j+2}
        w.push(&w[3 * j] + a.eval(base) - c.eval(base) + &slacks[j]);
        if w.len() >= n {
            break;
        }
        // w_{3j+3}
        w.push(&w[3 * j + 1] + a.eval(base + 1) - c.eval(base + 1));
        j += 1;
    }
    Ok(Sequence::new(w))
}

/// Extend a valid prefix to a length-`n` member of the case-2 witness
/// family, in blocks of four starting at each index `4j` with `j >= j0`:
///
/// * `v_{4j+1} = v_{4j} + B(4j-1) - C(4j-1)`,
/// * `v_{4j+2} = v_{4j} + A(4j) - C(4j)`,
/// * `v_{4j+3} = v_{4j+2} + B(4j+1) - C(4j+1) + slack_j` (slack `>= 0`),
/// * `v_{4j+4} = v_{4j+2} + A(4j+2) - C(4j+2)`.
///
/// The prefix must have length exactly `4*j0 + 1` and satisfy the relation.
/// One free slack per block of four gives the `1/4` entropy.
pub fn witness_case2(
    a: &Polynomial,
    b: &Polynomial,
    c: &Polynomial,
    n: usize,
    prefix: &Sequence,
    slacks: &[Rational],
) -> Result<Sequence, TropicalError> {
    let class = classify(a, b, c);
    if class.case != EntropyCase::Case2 {
        return Err(TropicalError::WrongCase {
            expected: EntropyCase::Case2,
            found: class.case,
        });
    }
    let j0 = class.j0_usize()?;
    let expected_len = 4 * j0 + 1;
    if prefix.len() != expected_len {
        return Err(TropicalError::PrefixLength {
            expected: expected_len,
            got: prefix.len(),
        });
    }
    let sys = HolonomicSystem::second_order(a.clone(), b.clone(), c.clone());
    if let SequenceCheck::FirstFailure { window } = check_sequence(&sys, prefix) {
        return Err(TropicalError::InvalidPrefix { window });
    }
    check_slacks(slacks, case2_slack_count(n, j0))?;

    let mut w: Vec<Rational> = prefix.values().to_vec();
    w.truncate(n);
    let mut j = j0;
    while w.len() < n {
        let base = 4 * j as i64;
        // v_{4j+1}
        w.push(&w[4 * j] + b.eval(base - 1) - c.eval(base - 1));
        if w.len() >= n {
            break;
        }
        // v_{4j+2}
        w.push(&w[4 * j] + a.eval(base) - c.eval(base));
        if w.len() >= n {
            break;
        }
        // v_{4j+3}
        let slack_index = j - j0;
        w.push(&w[4 * j + 2] + b.eval(base + 1) - c.eval(base + 1) + &slacks[slack_index]);
        if w.len() >= n {
            break;
        }
        // v_{4j+4}
        w.push(&w[4 * j + 2] + a.eval(base + 2) - c.eval(base + 2));
        j += 1;
    }
    Ok(Sequence::new(w))
}

fn check_slacks(slacks: &[Rational], expected: usize) -> Result<(), TropicalError> {
    if slacks.len() != expected {
        return Err(TropicalError::SlackCount {
            expected,
            got: slacks.len(),
        });
    }
    for (index, s) in slacks.iter().enumerate() {
        if s.is_negative() {
            return Err(TropicalError::NegativeSlack { index });
        }
    }
    Ok(())
}

/// Append one value that ties the final window: with `j = len(w) - n`,
///
/// `w_new = min_{k < n} (w_{j+k} + A_k(j)) - A_n(j)`.
///
/// The appended term equals the minimum of the others, so the extended
/// sequence still satisfies the relation. Any valid sequence can be grown
/// indefinitely this way.
pub fn extend_greedy(sys: &HolonomicSystem, w: &Sequence) -> Result<Sequence, TropicalError> {
    if w.len() < sys.order {
        return Err(TropicalError::TooShort {
            len: w.len(),
            needed: sys.order,
        });
    }
    if let SequenceCheck::FirstFailure { window } = check_sequence(sys, w) {
        return Err(TropicalError::InvalidSequence { window });
    }
    let j = w.len() - sys.order;
    let min = (0..sys.order)
        .map(|k| &w[j + k] + sys.coeffs[k].eval(j as i64))
        .min()
        .expect("order >= 1");
    let mut values = w.values().to_vec();
    values.push(min - sys.coeffs[sys.order].eval(j as i64));
    Ok(Sequence::new(values))
}
