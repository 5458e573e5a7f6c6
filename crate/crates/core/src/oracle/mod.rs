//! Brute-force reference solver and coloring verifier. Works on the graph
//! with exact neighborhood counts and never touches expressions.

pub mod definitions;

use std::fmt;

use thiserror::Error;

use crate::checkmodel::{evaluate_check, ProblemModel};
use crate::dpcore::{Solution, SolveStats};
use crate::graph::Graph;
use crate::weights::WeightValue;

pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{colorings} colorings exceed the budget of {budget}")]
    BudgetExceeded { colorings: u128, budget: u64 },
    #[error("graph and model disagree on vertex `{0}`")]
    VertexMismatch(String),
}

/// Why a coloring is not a solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    WrongLength { expected: usize, got: usize },
    NotInList { vertex: String, color: String },
    CheckFails { vertex: String, color: String, counts: Vec<u32> },
    SizeRejected { color: String, size: u32 },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::WrongLength { expected, got } => {
                write!(f, "coloring covers {got} vertices, expected {expected}")
            }
            VerifyFailure::NotInList { vertex, color } => {
                write!(f, "vertex {vertex}: color {color} is not in its list")
            }
            VerifyFailure::CheckFails { vertex, color, counts } => {
                write!(f, "vertex {vertex}: check fails for color {color} with neighbor counts {counts:?}")
            }
            VerifyFailure::SizeRejected { color, size } => {
                write!(f, "color class {color}: size {size} is not accepted")
            }
        }
    }
}

/// Graph index of every model vertex.
fn vertex_map(m: &ProblemModel, g: &Graph) -> Result<Vec<usize>, OracleError> {
    if m.vertex_count() != g.vertex_count() {
        let odd = g
            .names()
            .iter()
            .find(|n| !m.vertices().contains(n))
            .or_else(|| m.vertices().iter().find(|n| g.index_of(n).is_none()))
            .cloned()
            .unwrap_or_default();
        return Err(OracleError::VertexMismatch(odd));
    }
    m.vertices().iter().map(|v| g.index_of(v).ok_or_else(|| OracleError::VertexMismatch(v.clone()))).collect()
}

/// Exact per-color neighbor counts of every vertex (model order).
fn neighbor_counts(m: &ProblemModel, g: &Graph, to_graph: &[usize], coloring: &[usize]) -> Vec<Vec<u32>> {
    let mut to_model = vec![0; g.vertex_count()];
    for (mv, &gv) in to_graph.iter().enumerate() {
        to_model[gv] = mv;
    }
    (0..m.vertex_count())
        .map(|v| {
            let mut n = vec![0u32; m.q()];
            for u in g.neighbor_indices(to_graph[v]) {
                n[coloring[to_model[u]]] += 1;
            }
            n
        })
        .collect()
}

fn first_failure(m: &ProblemModel, g: &Graph, to_graph: &[usize], coloring: &[usize]) -> Option<VerifyFailure> {
    for (v, &a) in coloring.iter().enumerate() {
        if a >= m.q() || !m.allows(v, a) {
            return Some(VerifyFailure::NotInList {
                vertex: m.vertices()[v].clone(),
                color: if a < m.q() { m.color_name(a).to_string() } else { a.to_string() },
            });
        }
    }
    let counts = neighbor_counts(m, g, to_graph, coloring);
    for (v, &a) in coloring.iter().enumerate() {
        if !evaluate_check(m, v, a, &counts[v]) {
            return Some(VerifyFailure::CheckFails {
                vertex: m.vertices()[v].clone(),
                color: m.color_name(a).to_string(),
                counts: counts[v].clone(),
            });
        }
    }
    for (a, aut) in m.size_constraints().iter().enumerate() {
        if let Some(aut) = aut {
            let size = coloring.iter().filter(|&&c| c == a).count() as u32;
            if !aut.accepts_length(size as u64) {
                return Some(VerifyFailure::SizeRejected { color: m.color_name(a).to_string(), size });
            }
        }
    }
    None
}

/// Checks lists, every check with exact counts, and every size constraint.
/// On success returns the coloring's weight.
pub fn verify_coloring(m: &ProblemModel, g: &Graph, coloring: &[usize]) -> Result<WeightValue, VerifyFailure> {
    if coloring.len() != m.vertex_count() {
        return Err(VerifyFailure::WrongLength { expected: m.vertex_count(), got: coloring.len() });
    }
    let to_graph =
        vertex_map(m, g).map_err(|_| VerifyFailure::WrongLength { expected: g.vertex_count(), got: coloring.len() })?;
    match first_failure(m, g, &to_graph, coloring) {
        Some(f) => Err(f),
        None => Ok(m.coloring_weight(coloring)),
    }
}

pub fn brute_force_solve(m: &ProblemModel, g: &Graph) -> Result<Solution, OracleError> {
    brute_force_solve_with_budget(m, g, DEFAULT_BUDGET)
}

/// Enumerates every valid coloring in lexicographic order (first vertex
/// most significant, colors ascending) and keeps the first of minimum
/// weight.
pub fn brute_force_solve_with_budget(m: &ProblemModel, g: &Graph, budget: u64) -> Result<Solution, OracleError> {
    let to_graph = vertex_map(m, g)?;
    let total: u128 = (0..m.vertex_count()).map(|v| m.color_list(v).len() as u128).product();
    if total > budget as u128 {
        return Err(OracleError::BudgetExceeded { colorings: total, budget });
    }
    let n = m.vertex_count();
    let ws = m.weight_set();
    let mut idx = vec![0usize; n];
    let mut coloring: Vec<usize> = (0..n).map(|v| m.color_list(v)[0]).collect();
    let mut best: Option<(WeightValue, Vec<usize>)> = None;
    loop {
        if first_failure(m, g, &to_graph, &coloring).is_none() {
            let w = m.coloring_weight(&coloring);
            if best.as_ref().map_or(!w.is_error(), |(b, _)| ws.improves(w, *b)) {
                best = Some((w, coloring.clone()));
            }
        }
        // odometer, last vertex fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                let (weight, coloring) = match best {
                    Some((w, c)) => (w, Some(c)),
                    None => (WeightValue::Error, None),
                };
                return Ok(Solution { weight, coloring, stats: SolveStats::default() });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < m.color_list(pos).len() {
                coloring[pos] = m.color_list(pos)[idx[pos]];
                break;
            }
            idx[pos] = 0;
            coloring[pos] = m.color_list(pos)[0];
        }
    }
}
