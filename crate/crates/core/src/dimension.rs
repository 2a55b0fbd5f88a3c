//! Enumeration of min-attainment patterns, attainment graphs, exact
//! `dim(W_N)`, entropy scans, and structural predicates on feasible
//! patterns.
//!
//! `W_N` is the set of length-`N` sequences satisfying the relation at every
//! window. Fixing, per window, *which* subset of terms attains the minimum (a
//! [`Pattern`]) carves `W_N` into finitely many cells; each cell is a
//! [`LinearSystem`] of tie equalities and
//! strict inequalities, and `dim(W_N)` is the maximum cell dimension over the
//! strictly feasible patterns.
//!
//! All constraints produced by a pattern compare two coordinates plus
//! constants, so infeasibility of a *prefix* of windows is decided exactly by
//! a lexicographic Bellman-Ford pass over difference constraints. The
//! depth-first enumeration prunes on that check (a constraint set, once
//! infeasible, never becomes feasible again); final cells are re-validated
//! through the rational LP, which also supplies the witness point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{format_rational, parse_rational, ParseRationalError, Rational};
use crate::polyhedra::{cell_dimension, CellResult, LinearSystem, PolyhedraError};
use crate::tropical::{classify, EntropyCase, HolonomicSystem, Sequence, TropicalError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimensionError {
    #[error("pattern has {got} windows, length {n} at order {order} needs {expected}")]
    WindowCount {
        n: usize,
        order: usize,
        expected: usize,
        got: usize,
    },
    #[error("window {window} ties {got} terms, at least 2 required")]
    TieTooSmall { window: usize, got: usize },
    #[error("window {window} names term {index}, order {order} has terms 0..={order}")]
    TieOutOfRange {
        window: usize,
        index: usize,
        order: usize,
    },
    #[error("scan range {min}..={max} is empty or starts below 2")]
    BadRange { min: usize, max: usize },
    #[error("this operation is specific to second-order systems, got order {order}")]
    SecondOrderOnly { order: usize },
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Polyhedra(#[from] PolyhedraError),
    #[error(transparent)]
    ParseRational(#[from] ParseRationalError),
}

/// Per-window choice of which terms tie for the minimum: window `j` holds a
/// sorted subset of `{0, ..., n}` with at least two elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Pattern {
    windows: Vec<Vec<usize>>,
}

impl Pattern {
    /// Normalizes each subset (sorted, deduplicated) and requires at least
    /// two tied terms per window.
    pub fn new(windows: Vec<Vec<usize>>) -> Result<Self, DimensionError> {
        let windows = windows
            .into_iter()
            .enumerate()
            .map(|(window, mut s)| {
                s.sort_unstable();
                s.dedup();
                if s.len() < 2 {
                    Err(DimensionError::TieTooSmall {
                        window,
                        got: s.len(),
                    })
                } else {
                    Ok(s)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Pattern { windows })
    }

    /// The pattern with no windows (lengths `N <= n` impose no constraint).
    pub fn empty() -> Self {
        Pattern {
            windows: Vec::new(),
        }
    }

    pub fn windows(&self) -> &[Vec<usize>] {
        &self.windows
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

impl TryFrom<Vec<Vec<usize>>> for Pattern {
    type Error = DimensionError;

    fn try_from(windows: Vec<Vec<usize>>) -> Result<Self, Self::Error> {
        Pattern::new(windows)
    }
}

impl From<Pattern> for Vec<Vec<usize>> {
    fn from(p: Pattern) -> Vec<Vec<usize>> {
        p.windows
    }
}

/// All admissible tie subsets of `{0, ..., order}` in the fixed enumeration
/// order: pairs first (by gap, then by start), then larger subsets by size in
/// lexicographic order. For order 2 this is `{0,1}, {1,2}, {0,2}, {0,1,2}`.
pub fn tie_subsets(order: usize) -> Vec<Vec<usize>> {
    let terms = order + 1;
    let mut subsets = Vec::new();
    for gap in 1..terms {
        for start in 0..terms - gap {
            subsets.push(vec![start, start + gap]);
        }
    }
    for size in 3..=terms {
        let mut current = Vec::with_capacity(size);
        collect_combinations(terms, size, 0, &mut current, &mut subsets);
    }
    subsets
}

fn collect_combinations(
    terms: usize,
    size: usize,
    from: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == size {
        out.push(current.clone());
        return;
    }
    let remaining = size - current.len();
    for v in from..=terms - remaining {
        current.push(v);
        collect_combinations(terms, size, v + 1, current, out);
        current.pop();
    }
}

/// Validate a pattern against an order and sequence length.
fn validate_pattern(order: usize, pattern: &Pattern, n: usize) -> Result<(), DimensionError> {
    let expected = n.saturating_sub(order);
    if pattern.len() != expected {
        return Err(DimensionError::WindowCount {
            n,
            order,
            expected,
            got: pattern.len(),
        });
    }
    for (window, subset) in pattern.windows().iter().enumerate() {
        for &k in subset {
            if k > order {
                return Err(DimensionError::TieOutOfRange {
                    window,
                    index: k,
                    order,
                });
            }
        }
    }
    Ok(())
}

/// Translate a pattern into the cell it indexes: for each window `j` with tie
/// set `S`, equalities `w_{j+p} + A_p(j) = w_{j+q} + A_q(j)` between
/// consecutive `p < q` in `S`, and for the representative `p0 = min S` a
/// strict inequality `w_{j+p0} + A_{p0}(j) < w_{j+r} + A_r(j)` against every
/// `r` outside `S`.
pub fn pattern_to_system(
    sys: &HolonomicSystem,
    pattern: &Pattern,
    n: usize,
) -> Result<LinearSystem, DimensionError> {
    let order = sys.order();
    validate_pattern(order, pattern, n)?;
    let mut out = LinearSystem::new(n);
    for (j, subset) in pattern.windows().iter().enumerate() {
        let coeff = |k: usize| sys.coeffs()[k].eval(j as i64);
        for pair in subset.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let mut row = vec![Rational::zero(); n];
            row[j + p] = Rational::from_integer(1.into());
            row[j + q] = Rational::from_integer((-1).into());
            out.push_equality(row, coeff(q) - coeff(p))?;
        }
        let p0 = subset[0];
        for r in 0..=order {
            if subset.binary_search(&r).is_ok() {
                continue;
            }
            let mut row = vec![Rational::zero(); n];
            row[j + p0] = Rational::from_integer(1.into());
            row[j + r] = Rational::from_integer((-1).into());
            out.push_strict(row, coeff(r) - coeff(p0))?;
        }
    }
    Ok(out)
}

/// Graph on the sequence indices `0..N-1` with an edge between every pair of
/// tied positions of every window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttainmentGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl AttainmentGraph {
    /// Graph from an explicit edge list; loops are rejected, duplicate edges
    /// collapse.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, DimensionError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            let (lo, hi) = (u.min(v), u.max(v));
            if lo == hi || hi >= vertex_count {
                return Err(DimensionError::TieOutOfRange {
                    window: lo,
                    index: hi,
                    order: vertex_count.saturating_sub(1),
                });
            }
            set.insert((lo, hi));
        }
        Ok(AttainmentGraph {
            vertex_count,
            edges: set,
        })
    }

    pub fn from_pattern(pattern: &Pattern, vertex_count: usize) -> Result<Self, DimensionError> {
        let mut edges = BTreeSet::new();
        for (j, subset) in pattern.windows().iter().enumerate() {
            for (i, &p) in subset.iter().enumerate() {
                for &q in &subset[i + 1..] {
                    let (u, v) = (j + p, j + q);
                    if v >= vertex_count {
                        return Err(DimensionError::TieOutOfRange {
                            window: j,
                            index: q,
                            order: vertex_count.saturating_sub(j + 1),
                        });
                    }
                    edges.insert((u, v));
                }
            }
        }
        Ok(AttainmentGraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Number of connected components (isolated vertices included).
    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        uf.component_count()
    }

    /// Component label per vertex; labels are arbitrary but equal exactly for
    /// vertices in the same component.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.vertex_count);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        (0..self.vertex_count).map(|v| uf.find(v)).collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, x: usize, y: usize) {
        let mut xr = self.find(x);
        let mut yr = self.find(y);
        if xr == yr {
            return;
        }
        if self.size[xr] < self.size[yr] {
            std::mem::swap(&mut xr, &mut yr);
        }
        self.parent[yr] = xr;
        self.size[xr] += self.size[yr];
    }

    fn component_count(&mut self) -> usize {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v)
            .count()
    }
}

/// One difference constraint `w_u - w_v <= bound` (strict when flagged).
#[derive(Debug, Clone)]
struct DiffConstraint {
    u: usize,
    v: usize,
    bound: Rational,
    strict: bool,
}

/// Depth-first enumeration state over the windows of one system.
struct PatternSearch<'a> {
    sys: &'a HolonomicSystem,
    n: usize,
    window_total: usize,
    subsets: Vec<Vec<usize>>,
    /// `coeff_at[j][k] = A_k(j)`.
    coeff_at: Vec<Vec<Rational>>,
    constraints: Vec<DiffConstraint>,
    /// Stack of `constraints` lengths, one per pushed window.
    marks: Vec<usize>,
    choice: Vec<usize>,
}

impl<'a> PatternSearch<'a> {
    fn new(sys: &'a HolonomicSystem, n: usize) -> Self {
        let window_total = n.saturating_sub(sys.order());
        let coeff_at = (0..window_total)
            .map(|j| {
                (0..=sys.order())
                    .map(|k| sys.coeffs()[k].eval(j as i64))
                    .collect()
            })
            .collect();
        PatternSearch {
            sys,
            n,
            window_total,
            subsets: tie_subsets(sys.order()),
            coeff_at,
            constraints: Vec::new(),
            marks: Vec::new(),
            choice: vec![0; window_total],
        }
    }

    fn push_window(&mut self, window: usize, subset_idx: usize) {
        self.marks.push(self.constraints.len());
        self.choice[window] = subset_idx;
        let subset = &self.subsets[subset_idx];
        let coeff = &self.coeff_at[window];
        for pair in subset.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let bound = &coeff[q] - &coeff[p];
            self.constraints.push(DiffConstraint {
                u: window + p,
                v: window + q,
                bound: bound.clone(),
                strict: false,
            });
            self.constraints.push(DiffConstraint {
                u: window + q,
                v: window + p,
                bound: -bound,
                strict: false,
            });
        }
        let p0 = subset[0];
        for r in 0..=self.sys.order() {
            if subset.binary_search(&r).is_ok() {
                continue;
            }
            self.constraints.push(DiffConstraint {
                u: window + p0,
                v: window + r,
                bound: &coeff[r] - &coeff[p0],
                strict: true,
            });
        }
    }

    fn pop_window(&mut self) {
        let mark = self.marks.pop().expect("pop matches push");
        self.constraints.truncate(mark);
    }

    /// Exact feasibility of the accumulated difference constraints:
    /// lexicographic Bellman-Ford where each strict edge also pays one
    /// infinitesimal. Infeasible exactly when some cycle has negative total
    /// bound, or zero total bound through a strict edge.
    fn feasible(&self) -> bool {
        let mut dist: Vec<(Rational, i64)> = vec![(Rational::zero(), 0); self.n];
        for _ in 0..self.n {
            let mut changed = false;
            for c in &self.constraints {
                let cand = (&dist[c.v].0 + &c.bound, dist[c.v].1 - i64::from(c.strict));
                if cand < dist[c.u] {
                    dist[c.u] = cand;
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
        for c in &self.constraints {
            let cand = (&dist[c.v].0 + &c.bound, dist[c.v].1 - i64::from(c.strict));
            if cand < dist[c.u] {
                return false;
            }
        }
        true
    }

    /// Components of the equality graph of the current full choice; equals
    /// the cell dimension for a feasible pattern.
    fn equality_components(&self) -> usize {
        let mut uf = UnionFind::new(self.n);
        for (window, &si) in self.choice.iter().enumerate() {
            for pair in self.subsets[si].windows(2) {
                uf.union(window + pair[0], window + pair[1]);
            }
        }
        uf.component_count()
    }

    fn pattern(&self) -> Pattern {
        Pattern {
            windows: self
                .choice
                .iter()
                .map(|&si| self.subsets[si].clone())
                .collect(),
        }
    }
}

fn dfs<F: FnMut(&PatternSearch)>(s: &mut PatternSearch, depth: usize, visit: &mut F) {
    if depth == s.window_total {
        visit(s);
        return;
    }
    for si in 0..s.subsets.len() {
        s.push_window(depth, si);
        if s.feasible() {
            dfs(s, depth + 1, visit);
        }
        s.pop_window();
    }
}

/// Visit every strictly feasible pattern of length `n`, in the fixed
/// enumeration order. Lengths `n <= order` have the single empty pattern.
pub fn for_each_feasible_pattern<F: FnMut(&Pattern)>(
    sys: &HolonomicSystem,
    n: usize,
    mut visit: F,
) {
    if n <= sys.order() {
        visit(&Pattern::empty());
        return;
    }
    let mut search = PatternSearch::new(sys, n);
    dfs(&mut search, 0, &mut |s| visit(&s.pattern()));
}

/// All strictly feasible patterns of length `n`. Exhaustive and exponential;
/// intended for desk-scale `n`.
pub fn feasible_patterns(sys: &HolonomicSystem, n: usize) -> Vec<Pattern> {
    let mut out = Vec::new();
    for_each_feasible_pattern(sys, n, |p| out.push(p.clone()));
    out
}

/// The maximal cell of `W_N`: its dimension, the pattern indexing it, and an
/// interior witness (a sequence satisfying the relation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCell {
    pub n: usize,
    pub dim: usize,
    /// `None` when `n <= order` (no windows; the cell is all of `Q^N`).
    pub pattern: Option<Pattern>,
    pub witness: Sequence,
}

type Best = (usize, Vec<usize>);

fn better(best: &Option<Best>, dim: usize) -> bool {
    best.as_ref().is_none_or(|(d, _)| dim > *d)
}

fn search_best(sys: &HolonomicSystem, n: usize, jobs: usize) -> Option<Best> {
    let subsets = tie_subsets(sys.order());
    if jobs <= 1 || subsets.len() <= 1 {
        let mut search = PatternSearch::new(sys, n);
        let mut best: Option<Best> = None;
        dfs(&mut search, 0, &mut |s| {
            let dim = s.equality_components();
            if better(&best, dim) {
                best = Some((dim, s.choice.clone()));
            }
        });
        return best;
    }

    // Split the tree at the first window; merging branch results in branch
    // order reproduces the sequential outcome exactly.
    let branches = subsets.len();
    let slots: Vec<Option<Best>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs.min(branches))
            .map(|worker| {
                scope.spawn(move || {
                    let mut results = Vec::new();
                    let mut si = worker;
                    while si < branches {
                        let mut search = PatternSearch::new(sys, n);
                        let mut best: Option<Best> = None;
                        search.push_window(0, si);
                        if search.feasible() {
                            dfs(&mut search, 1, &mut |s| {
                                let dim = s.equality_components();
                                if better(&best, dim) {
                                    best = Some((dim, s.choice.clone()));
                                }
                            });
                        }
                        results.push((si, best));
                        si += jobs;
                    }
                    results
                })
            })
            .collect();
        let mut slots: Vec<Option<Best>> = vec![None; branches];
        for handle in handles {
            for (si, best) in handle.join().expect("search worker panicked") {
                slots[si] = best;
            }
        }
        slots
    });

    let mut best: Option<Best> = None;
    for slot in slots.into_iter().flatten() {
        if better(&best, slot.0) {
            best = Some(slot);
        }
    }
    best
}

/// Exact `dim(W_N)` with its maximal cell, searched depth-first with
/// incremental feasibility pruning. `jobs > 1` distributes the first-window
/// subtrees across threads; the result is identical either way.
pub fn max_cell(sys: &HolonomicSystem, n: usize, jobs: usize) -> MaxCell {
    if n <= sys.order() {
        return MaxCell {
            n,
            dim: n,
            pattern: None,
            witness: Sequence::new(vec![Rational::zero(); n]),
        };
    }
    let (dim, choice) = search_best(sys, n, jobs)
        .expect("W_N is never empty: greedy extension always produces a valid sequence");
    let subsets = tie_subsets(sys.order());
    let pattern = Pattern {
        windows: choice.iter().map(|&si| subsets[si].clone()).collect(),
    };
    let cell_sys = pattern_to_system(sys, &pattern, n).expect("enumerated pattern is well-formed");
    match cell_dimension(&cell_sys) {
        CellResult::Feasible { dimension, witness } => {
            assert_eq!(
                dimension, dim,
                "rank route and component route must agree on the cell dimension"
            );
            MaxCell {
                n,
                dim,
                pattern: Some(pattern),
                witness: Sequence::new(witness),
            }
        }
        CellResult::Infeasible => {
            unreachable!("difference pruning accepted an infeasible full pattern")
        }
    }
}

/// Exact `dim(W_N)`: the maximum over strictly feasible patterns of the
/// dimension of their cell. Returns `n` when `n <= order`.
pub fn dim_wn(sys: &HolonomicSystem, n: usize) -> usize {
    max_cell(sys, n, 1).dim
}

/// Reference implementation of [`dim_wn`] with no pruning: every pattern is
/// materialized and decided by the LP. Exponential in `n`; used to validate
/// the pruned search.
pub fn dim_wn_exhaustive(sys: &HolonomicSystem, n: usize) -> usize {
    let order = sys.order();
    if n <= order {
        return n;
    }
    let windows = n - order;
    let subsets = tie_subsets(order);
    let mut odometer = vec![0usize; windows];
    let mut best: Option<usize> = None;
    loop {
        let pattern = Pattern {
            windows: odometer.iter().map(|&si| subsets[si].clone()).collect(),
        };
        let cell_sys =
            pattern_to_system(sys, &pattern, n).expect("enumerated pattern is well-formed");
        if let CellResult::Feasible { dimension, .. } = cell_dimension(&cell_sys) {
            if best.is_none_or(|b| dimension > b) {
                best = Some(dimension);
            }
        }
        let mut pos = 0;
        loop {
            if pos == windows {
                return best.expect("W_N is never empty");
            }
            odometer[pos] += 1;
            if odometer[pos] < subsets.len() {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

/// One row of an entropy scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub n: usize,
    pub dim: usize,
    /// `dim / n`, in lowest terms.
    pub ratio: Rational,
}

/// Exact `dim(W_N)` over a range of lengths, next to the classified entropy
/// of the system (second order only). The scan never extrapolates: it
/// reports the finite ratios and the classifier verdict side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScanReportRepr", into = "ScanReportRepr")]
pub struct ScanReport {
    pub system: HolonomicSystem,
    pub classified_entropy: Option<Rational>,
    pub rows: Vec<ScanRow>,
}

#[derive(Serialize, Deserialize)]
struct ScanReportRepr {
    system: HolonomicSystem,
    classified_entropy: Option<String>,
    rows: Vec<ScanRowRepr>,
}

#[derive(Serialize, Deserialize)]
struct ScanRowRepr {
    n: usize,
    dim: usize,
    ratio: String,
}

impl TryFrom<ScanReportRepr> for ScanReport {
    type Error = DimensionError;

    fn try_from(repr: ScanReportRepr) -> Result<Self, Self::Error> {
        Ok(ScanReport {
            system: repr.system,
            classified_entropy: repr
                .classified_entropy
                .as_deref()
                .map(parse_rational)
                .transpose()?,
            rows: repr
                .rows
                .into_iter()
                .map(|r| {
                    Ok(ScanRow {
                        n: r.n,
                        dim: r.dim,
                        ratio: parse_rational(&r.ratio)?,
                    })
                })
                .collect::<Result<Vec<_>, DimensionError>>()?,
        })
    }
}

impl From<ScanReport> for ScanReportRepr {
    fn from(report: ScanReport) -> ScanReportRepr {
        ScanReportRepr {
            system: report.system,
            classified_entropy: report.classified_entropy.as_ref().map(format_rational),
            rows: report
                .rows
                .into_iter()
                .map(|r| ScanRowRepr {
                    n: r.n,
                    dim: r.dim,
                    ratio: format_rational(&r.ratio),
                })
                .collect(),
        }
    }
}

impl ScanReport {
    /// CSV with columns `N,dim,ratio_num,ratio_den,classified_entropy`.
    pub fn to_csv(&self) -> String {
        let entropy = self
            .classified_entropy
            .as_ref()
            .map(format_rational)
            .unwrap_or_default();
        let mut out = String::from("N,dim,ratio_num,ratio_den,classified_entropy\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n,
                row.dim,
                row.ratio.numer(),
                row.ratio.denom(),
                entropy
            ));
        }
        out
    }
}

/// Scan `dim(W_N)` for `N` in `n_min..=n_max` (requires `2 <= n_min <=
/// n_max`).
pub fn entropy_scan(
    sys: &HolonomicSystem,
    n_min: usize,
    n_max: usize,
    jobs: usize,
) -> Result<ScanReport, DimensionError> {
    if n_min < 2 || n_min > n_max {
        return Err(DimensionError::BadRange {
            min: n_min,
            max: n_max,
        });
    }
    let rows = (n_min..=n_max)
        .map(|n| {
            let dim = max_cell(sys, n, jobs).dim;
            ScanRow {
                n,
                dim,
                ratio: Rational::new(BigInt::from(dim), BigInt::from(n)),
            }
        })
        .collect();
    let classified_entropy = sys
        .second_order_coeffs()
        .map(|(a, b, c)| classify(a, b, c).entropy);
    Ok(ScanReport {
        system: sys.clone(),
        classified_entropy,
        rows,
    })
}

/// A maximal run of at least two consecutive vertices lying in one connected
/// component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    /// Inclusive.
    pub end: usize,
}

/// Maximal runs of consecutive equal labels, keeping only runs of length at
/// least two.
fn intervals(labels: &[usize]) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=labels.len() {
        if i == labels.len() || labels[i] != labels[start] {
            if i - start >= 2 {
                out.push(Interval { start, end: i - 1 });
            }
            start = i;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    /// Two maximal intervals with no vertex between them (case 1 and 2).
    AdjacentIntervals,
    /// The vertices between two neighbouring intervals, together with the
    /// intervals' own components, fail to alternate between exactly two
    /// components (case 1 and 2).
    BrokenAlternation,
    /// A length-2 interval starting past the sign-stability threshold and not
    /// touching the right boundary (case 2).
    ShortLateInterval,
    /// More than one interval starting past the threshold (case 3 with
    /// eventually positive `D` and nonzero `E`).
    MultipleLateIntervals,
    /// A late interval that stops before the last vertex (same case-3
    /// regime).
    LateIntervalNotTerminal,
}

/// One structural violation, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
    pub pattern: Pattern,
    pub edges: Vec<(usize, usize)>,
}

/// Outcome of [`lemma_predicates`] over every strictly feasible pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub n: usize,
    pub case: EntropyCase,
    /// Sign-stability threshold index `4 * j0`.
    pub threshold: usize,
    pub patterns_checked: usize,
    pub violations: Vec<Violation>,
}

/// Check the structural interval claims on the attainment graph of every
/// strictly feasible pattern of a second-order system:
///
/// * cases 1 and 2: no two maximal intervals adjoin, and the component
///   sequence from one interval through the gap to the next alternates
///   between exactly two components;
/// * case 2: no interval of length exactly 2 starts past `4*j0`, except one
///   still forming at the right boundary;
/// * case 3 with `D` eventually positive and `E` nonzero: at most one
///   interval starts past `4*j0`, and it runs to the last vertex.
///
/// The checks are validation only; they never prune the enumeration.
pub fn lemma_predicates(sys: &HolonomicSystem, n: usize) -> Result<LemmaReport, DimensionError> {
    let (a, b, c) = sys
        .second_order_coeffs()
        .ok_or(DimensionError::SecondOrderOnly { order: sys.order() })?;
    let class = classify(a, b, c);
    let j0 = class.j0_usize()?;
    let threshold = 4 * j0;

    let mut patterns_checked = 0usize;
    let mut violations = Vec::new();
    for_each_feasible_pattern(sys, n, |pattern| {
        patterns_checked += 1;
        let graph = AttainmentGraph::from_pattern(pattern, n).expect("pattern fits n");
        let labels = graph.component_labels();
        let ivs = intervals(&labels);
        let mut record = |kind: ViolationKind, detail: String| {
            violations.push(Violation {
                kind,
                detail,
                pattern: pattern.clone(),
                edges: graph.edges().collect(),
            });
        };
        match class.case {
            EntropyCase::Case1 | EntropyCase::Case2 => {
                for pair in ivs.windows(2) {
                    let (left, right) = (pair[0], pair[1]);
                    if right.start == left.end + 1 {
                        record(
                            ViolationKind::AdjacentIntervals,
                            format!(
                                "intervals [{}, {}] and [{}, {}] adjoin",
                                left.start, left.end, right.start, right.end
                            ),
                        );
                        continue;
                    }
                    let mut seq = vec![labels[left.start]];
                    seq.extend_from_slice(&labels[left.end + 1..right.start]);
                    seq.push(labels[right.start]);
                    let alternates = seq.windows(2).all(|w| w[0] != w[1])
                        && seq.windows(3).all(|w| w[0] == w[2]);
                    if !alternates {
                        record(
                            ViolationKind::BrokenAlternation,
                            format!(
                                "components from interval [{}, {}] to [{}, {}] do not alternate",
                                left.start, left.end, right.start, right.end
                            ),
                        );
                    }
                }
                if class.case == EntropyCase::Case2 {
                    for iv in &ivs {
                        if iv.end - iv.start == 1 && iv.start > threshold && iv.end != n - 1 {
                            record(
                                ViolationKind::ShortLateInterval,
                                format!(
                                    "interval [{}, {}] of length 2 starts past {}",
                                    iv.start, iv.end, threshold
                                ),
                            );
                        }
                    }
                }
            }
            EntropyCase::Case3 => {
                if class.d.eventual_sign() == 1 && !class.e.is_zero() {
                    let late: Vec<&Interval> =
                        ivs.iter().filter(|iv| iv.start > threshold).collect();
                    if late.len() >= 2 {
                        record(
                            ViolationKind::MultipleLateIntervals,
                            format!("{} intervals start past {}", late.len(), threshold),
                        );
                    } else if let [only] = late.as_slice() {
                        if only.end != n - 1 {
                            record(
                                ViolationKind::LateIntervalNotTerminal,
                                format!(
                                    "interval [{}, {}] starts past {} but stops before {}",
                                    only.start,
                                    only.end,
                                    threshold,
                                    n - 1
                                ),
                            );
                        }
                    }
                }
            }
        }
    });

    Ok(LemmaReport {
        n,
        case: class.case,
        threshold,
        patterns_checked,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rational_int, Polynomial};
    use crate::polyhedra::strictly_feasible;
    use crate::tropical::check_sequence;

    fn constants(a: i64, b: i64, c: i64) -> HolonomicSystem {
        HolonomicSystem::second_order_constants(a, b, c)
    }

    /// B = x, A = C = 0: case 3 with eventually positive D and E = 2.
    fn drifting() -> HolonomicSystem {
        HolonomicSystem::second_order(
            Polynomial::zero(),
            Polynomial::from_integers(&[0, 1]),
            Polynomial::zero(),
        )
    }

    /// A = 2x - 1, B = x, C = 0: a non-constant case-1 system.
    fn sloped_case1() -> HolonomicSystem {
        HolonomicSystem::second_order(
            Polynomial::from_integers(&[-1, 2]),
            Polynomial::from_integers(&[0, 1]),
            Polynomial::zero(),
        )
    }

    #[test]
    fn tie_subsets_fixed_order() {
        assert_eq!(
            tie_subsets(2),
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]]
        );
        assert_eq!(tie_subsets(1), vec![vec![0, 1]]);
        assert_eq!(tie_subsets(3).len(), 2usize.pow(4) - 1 - 4);
    }

    #[test]
    fn pattern_to_system_examples() {
        let sys = constants(0, 0, 0);
        let pat = Pattern::new(vec![vec![0, 1]]).unwrap();
        let cell = pattern_to_system(&sys, &pat, 3).unwrap();
        assert_eq!(cell.equalities().len(), 1);
        assert_eq!(cell.strict_inequalities().len(), 1);
        // w0 = w1
        assert_eq!(
            cell.equalities()[0].coeffs,
            vec![rational_int(1), rational_int(-1), rational_int(0)]
        );
        assert_eq!(cell.equalities()[0].rhs, rational_int(0));
        // w0 < w2
        assert_eq!(
            cell.strict_inequalities()[0].coeffs,
            vec![rational_int(1), rational_int(0), rational_int(-1)]
        );

        // (0, 1, 0) with ties {0, 2}: equality w0 = w2, strict w0 < w1 + 1.
        let sys = constants(0, 1, 0);
        let pat = Pattern::new(vec![vec![0, 2]]).unwrap();
        let cell = pattern_to_system(&sys, &pat, 3).unwrap();
        assert_eq!(cell.equalities()[0].rhs, rational_int(0));
        assert_eq!(cell.strict_inequalities()[0].rhs, rational_int(1));

        // Full tie: two equalities, no strict rows.
        let pat = Pattern::new(vec![vec![0, 1, 2]]).unwrap();
        let cell = pattern_to_system(&constants(0, 0, 0), &pat, 3).unwrap();
        assert_eq!(cell.equalities().len(), 2);
        assert!(cell.strict_inequalities().is_empty());

        // Wrong window count.
        let pat = Pattern::new(vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            pattern_to_system(&sys, &pat, 5),
            Err(DimensionError::WindowCount { .. })
        ));
    }

    #[test]
    fn graph_components_examples() {
        let g = AttainmentGraph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(g.components(), 2);

        let g = AttainmentGraph::from_edges(5, []).unwrap();
        assert_eq!(g.components(), 5);

        let g = AttainmentGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.components(), 1);

        assert!(AttainmentGraph::from_edges(3, [(0, 3)]).is_err());
        assert!(AttainmentGraph::from_edges(3, [(1, 1)]).is_err());

        let pat = Pattern::new(vec![vec![0, 1]]).unwrap();
        let g = AttainmentGraph::from_pattern(&pat, 3).unwrap();
        assert_eq!(g.components(), 2);

        let g = AttainmentGraph::from_pattern(&Pattern::empty(), 5).unwrap();
        assert_eq!(g.components(), 5);

        let pat = Pattern::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let g = AttainmentGraph::from_pattern(&pat, 4).unwrap();
        // Edges {0,1}, {1,2}: components {0,1,2}, {3}.
        assert_eq!(g.components(), 2);
    }

    #[test]
    fn dim_examples() {
        assert_eq!(dim_wn(&constants(0, 0, 0), 3), 2);
        assert_eq!(dim_wn(&constants(0, 0, 0), 2), 2);
        assert_eq!(dim_wn(&constants(5, -3, 9), 2), 2);
        let d6 = dim_wn(&constants(0, 0, 0), 6);
        assert!((2..=3).contains(&d6));
    }

    #[test]
    fn max_cell_witness_satisfies_relation() {
        for sys in [constants(0, 0, 0), constants(0, 1, 0), drifting()] {
            for n in 3..=7 {
                let cell = max_cell(&sys, n, 1);
                assert_eq!(cell.witness.len(), n);
                assert!(check_sequence(&sys, &cell.witness).is_valid());
            }
        }
    }

    #[test]
    fn pruned_equals_exhaustive() {
        // One system per entropy case.
        for sys in [constants(0, 0, 0), constants(0, 1, 0), constants(1, 0, 1)] {
            for n in 3..=7 {
                assert_eq!(dim_wn(&sys, n), dim_wn_exhaustive(&sys, n), "n = {n}");
            }
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        for sys in [constants(0, 0, 0), drifting()] {
            for n in [5, 8] {
                let seq = max_cell(&sys, n, 1);
                let par = max_cell(&sys, n, 3);
                assert_eq!(seq, par);
            }
        }
    }

    #[test]
    fn difference_pruning_matches_lp() {
        // Every prefix the DFS accepts or rejects must agree with the LP on
        // the same partial system.
        for sys in [
            constants(0, 0, 0),
            constants(0, 1, 0),
            drifting(),
            sloped_case1(),
        ] {
            let n = 6;
            let subsets = tie_subsets(2);
            let mut search = PatternSearch::new(&sys, n);
            for s0 in 0..subsets.len() {
                search.push_window(0, s0);
                let fast = search.feasible();
                let lp = prefix_lp_feasible(&sys, n, &[s0]);
                assert_eq!(fast, lp, "depth 1, subset {s0}");
                if fast {
                    for s1 in 0..subsets.len() {
                        search.push_window(1, s1);
                        let fast = search.feasible();
                        let lp = prefix_lp_feasible(&sys, n, &[s0, s1]);
                        assert_eq!(fast, lp, "depth 2, subsets {s0},{s1}");
                        search.pop_window();
                    }
                }
                search.pop_window();
            }
        }
    }

    fn prefix_lp_feasible(sys: &HolonomicSystem, n: usize, choices: &[usize]) -> bool {
        let subsets = tie_subsets(sys.order());
        let mut cell = LinearSystem::new(n);
        for (j, &si) in choices.iter().enumerate() {
            let coeff = |k: usize| sys.coeffs()[k].eval(j as i64);
            let subset = &subsets[si];
            for pair in subset.windows(2) {
                let (p, q) = (pair[0], pair[1]);
                let mut row = vec![Rational::zero(); n];
                row[j + p] = rational_int(1);
                row[j + q] = rational_int(-1);
                cell.push_equality(row, coeff(q) - coeff(p)).unwrap();
            }
            for r in 0..=sys.order() {
                if subset.binary_search(&r).is_ok() {
                    continue;
                }
                let mut row = vec![Rational::zero(); n];
                row[j + subset[0]] = rational_int(1);
                row[j + r] = rational_int(-1);
                cell.push_strict(row, coeff(r) - coeff(subset[0])).unwrap();
            }
        }
        strictly_feasible(&cell).is_some()
    }

    #[test]
    fn component_bound_holds_small() {
        for sys in [constants(0, 0, 0), constants(0, 1, 0), constants(1, 0, 1)] {
            for n in 3..=6 {
                for pattern in feasible_patterns(&sys, n) {
                    let cell = pattern_to_system(&sys, &pattern, n).unwrap();
                    let dim = cell_dimension(&cell)
                        .dimension()
                        .expect("enumerated pattern is feasible");
                    let comps = AttainmentGraph::from_pattern(&pattern, n)
                        .unwrap()
                        .components();
                    assert!(dim <= comps);
                }
            }
        }
    }

    #[test]
    fn scan_report_shapes() {
        let report = entropy_scan(&constants(0, 0, 0), 3, 6, 1).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert_eq!(
            report.classified_entropy,
            Some(Rational::new(1.into(), 3.into()))
        );
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "N,dim,ratio_num,ratio_den,classified_entropy");
        assert_eq!(lines[1], "3,2,2,3,1/3");
        assert_eq!(lines.len(), 5);

        let json = serde_json::to_string(&report).unwrap();
        let back: ScanReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);

        assert!(matches!(
            entropy_scan(&constants(0, 0, 0), 1, 5, 1),
            Err(DimensionError::BadRange { .. })
        ));
        assert!(matches!(
            entropy_scan(&constants(0, 0, 0), 7, 5, 1),
            Err(DimensionError::BadRange { .. })
        ));
    }

    #[test]
    fn interval_extraction() {
        // labels:  0 0 1 0 0 2 2 2
        let labels = [0, 0, 1, 0, 0, 2, 2, 2];
        let ivs = intervals(&labels);
        assert_eq!(
            ivs,
            vec![
                Interval { start: 0, end: 1 },
                Interval { start: 3, end: 4 },
                Interval { start: 5, end: 7 },
            ]
        );
        assert!(intervals(&[0, 1, 2, 3]).is_empty());
    }

    #[test]
    fn lemma_reports_clean_for_named_systems() {
        let report = lemma_predicates(&constants(0, 0, 0), 7).unwrap();
        assert_eq!(report.case, EntropyCase::Case1);
        assert!(report.violations.is_empty());
        assert!(report.patterns_checked > 0);

        let report = lemma_predicates(&constants(0, 1, 0), 7).unwrap();
        assert_eq!(report.case, EntropyCase::Case2);
        assert!(report.violations.is_empty());

        let report = lemma_predicates(&drifting(), 7).unwrap();
        assert_eq!(report.case, EntropyCase::Case3);
        assert_eq!(report.threshold, 4);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn translation_direction_keeps_dim_positive() {
        for sys in [constants(0, 0, 0), constants(1, 0, 1), drifting()] {
            for n in 1..=6 {
                assert!(dim_wn(&sys, n) >= 1);
            }
        }
    }

    #[test]
    fn dim_monotone_in_n() {
        for sys in [constants(0, 0, 0), constants(0, 1, 0), constants(1, 0, 1)] {
            let mut prev = 0;
            for n in 2..=8 {
                let d = dim_wn(&sys, n);
                assert!(d >= prev, "dim dropped at n = {n}");
                prev = d;
            }
        }
    }

    #[test]
    fn second_order_ceiling() {
        // dim/N <= 1/2 + 2/N, i.e. 2*dim <= N + 4, the desk-scale shadow of
        // the order-n bound dim(W_N)/N -> at most 1 - 1/n.
        for sys in [
            constants(0, 0, 0),
            constants(0, 1, 0),
            constants(1, 0, 1),
            drifting(),
            sloped_case1(),
        ] {
            for n in 3..=12 {
                let d = dim_wn(&sys, n);
                assert!(2 * d <= n + 4, "ceiling violated: dim {d} at n = {n}");
            }
        }
    }
}
