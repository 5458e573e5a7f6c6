//! The `(C, N)`-matrix dynamic program over a clique-width expression.
//!
//! `λ(e, C, N, trackers)` is the minimum weight of a coloring of `G_e` whose
//! capped label×color counts are `C`, whose checks pass once every vertex
//! with label `i` is promised `N[i]` more neighbors per color, and whose
//! size-constrained color classes satisfy the tracker predicates. It is
//! evaluated lazily from the root and memoized per node.

mod profiles;
mod solver;

use std::fmt;

use thiserror::Error;

use crate::checkmodel::ProblemModel;
use crate::cwexpr::{CwExpression, ValidationReport};
use crate::sizedfa::{State, StatePredicate};
use crate::weights::WeightValue;

pub use solver::{split_pairs, Solver};

/// A `k × q` matrix with entries in `[0, 𝒩]`. Row `i - 1` belongs to
/// label `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountMatrix {
    k: usize,
    q: usize,
    cells: Vec<u16>,
}

impl CountMatrix {
    pub fn zeros(k: usize, q: usize) -> Self {
        CountMatrix { k, q, cells: vec![0; k * q] }
    }

    /// Panics on ragged rows.
    pub fn from_rows(rows: &[Vec<u32>]) -> Self {
        let k = rows.len();
        let q = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == q), "ragged count matrix");
        let cells = rows.iter().flatten().map(|&x| u16::try_from(x).expect("count fits u16")).collect();
        CountMatrix { k, q, cells }
    }

    pub(crate) fn from_cells(k: usize, q: usize, cells: &[u16]) -> Self {
        CountMatrix { k, q, cells: cells.to_vec() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, row: usize, a: usize) -> u32 {
        self.cells[row * self.q + a] as u32
    }

    pub fn set(&mut self, row: usize, a: usize, value: u32) {
        self.cells[row * self.q + a] = u16::try_from(value).expect("count fits u16");
    }

    pub fn row(&self, row: usize) -> Vec<u32> {
        self.cells[row * self.q..(row + 1) * self.q].iter().map(|&x| x as u32).collect()
    }

    pub(crate) fn cells(&self) -> &[u16] {
        &self.cells
    }
}

impl fmt::Display for CountMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            f.write_str(&row.join(" "))?;
        }
        Ok(())
    }
}

/// Size tracker of one constrained color: the automaton state reached so far
/// and the predicate the final state must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tracker {
    pub state: State,
    pub pred: StatePredicate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Restrict enumerations to reachable count profiles.
    pub prune: bool,
    pub want_coloring: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { prune: true, want_coloring: false }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: usize,
    pub memo_entries: usize,
    pub profiles: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub weight: WeightValue,
    /// Color index per model vertex, when requested and feasible.
    pub coloring: Option<Vec<usize>>,
    pub stats: SolveStats,
}

impl Solution {
    pub fn is_feasible(&self) -> bool {
        !self.weight.is_error()
    }

    /// `(vertex, color name)` pairs in model vertex order.
    pub fn named_coloring(&self, m: &ProblemModel) -> Option<Vec<(String, String)>> {
        self.coloring.as_ref().map(|c| {
            c.iter().enumerate().map(|(v, &a)| (m.vertices()[v].clone(), m.color_name(a).to_string())).collect()
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("expression is not valid: {}", .0.violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error("expression and model disagree on vertices (missing: {missing:?}, extra: {extra:?})")]
    VertexMismatch { missing: Vec<String>, extra: Vec<String> },
    #[error("instance too large: {0}")]
    TooLarge(String),
}

/// Solves with pruning on.
pub fn solve(m: &ProblemModel, e: &CwExpression, want_coloring: bool) -> Result<Solution, SolveError> {
    solve_with(m, e, SolveOptions { prune: true, want_coloring })
}

pub fn solve_with(m: &ProblemModel, e: &CwExpression, opts: SolveOptions) -> Result<Solution, SolveError> {
    let mut solver = Solver::new(m, e, opts.prune)?;
    Ok(deep(|| solver.solve(opts.want_coloring)))
}

/// Per node, every capped count profile `C` of a valid coloring (checks
/// ignored), in ascending order.
pub fn reachable_profiles(m: &ProblemModel, e: &CwExpression) -> Result<Vec<Vec<CountMatrix>>, SolveError> {
    let solver = Solver::new(m, e, true)?;
    Ok((0..e.len()).map(|id| solver.profiles_at(id)).collect())
}

/// Recursion depth follows expression depth, which is linear in `|V|` for
/// path-like expressions, so solving runs on a thread with a large stack.
fn deep<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    const STACK: usize = 64 << 20;
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK)
            .spawn_scoped(s, f)
            .expect("spawn solver thread")
            .join()
            .unwrap_or_else(|p| std::panic::resume_unwind(p))
    })
}
