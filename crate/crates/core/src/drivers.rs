//! Outer loops that reduce the size-free problems to their specified-size
//! counterparts: enumerate class sizes, solve each auxiliary instance,
//! aggregate, and re-verify the winning witness.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use thiserror::Error;

use crate::checkmodel::{instantiate_builtin, Builtin, ModelError, ProblemModel, Ratio, RomanVariant};
use crate::cwexpr::CwExpression;
use crate::dpcore::{solve, SolveError};
use crate::graph::Graph;
use crate::oracle::{verify_coloring, VerifyFailure};
use crate::weights::WeightValue;

/// Class sizes, one per color.
pub type Composition = Vec<u32>;

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("expression does not realize the graph")]
    Mismatch,
    #[error("witness failed verification: {0}")]
    Verification(VerifyFailure),
    #[error("witness weighs {actual}, solver reported {reported}")]
    WeightMismatch { reported: WeightValue, actual: WeightValue },
}

/// Result of a driver. For maximization drivers `weight` is the size found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DriverSolution {
    pub weight: WeightValue,
    /// Class sizes of the winning auxiliary instance.
    pub sizes: Option<Composition>,
    /// Color index per graph vertex; color names are in `colors`.
    pub coloring: Option<Vec<usize>>,
    pub colors: Vec<String>,
    /// Number of auxiliary instances solved.
    pub solves: usize,
}

impl DriverSolution {
    fn infeasible(colors: Vec<String>, solves: usize) -> Self {
        DriverSolution { weight: WeightValue::Error, sizes: None, coloring: None, colors, solves }
    }

    /// Vertices whose color is `color` (for the subset drivers, `S` is 0).
    pub fn class(&self, g: &Graph, color: usize) -> Vec<String> {
        self.coloring
            .iter()
            .flatten()
            .enumerate()
            .filter(|&(_, &a)| a == color)
            .map(|(v, _)| g.name(v).to_string())
            .collect()
    }
}

/// Every vector with entries `≥ lower[i]` summing to `total`, in
/// lexicographic order.
pub fn enumerate_compositions(total: u32, lower: &[u32]) -> Vec<Composition> {
    fn go(rest: u32, lower: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        match lower {
            [] => {
                if rest == 0 {
                    out.push(prefix.clone());
                }
            }
            [last] => {
                if rest >= *last {
                    prefix.push(rest);
                    out.push(prefix.clone());
                    prefix.pop();
                }
            }
            [first, tail @ ..] => {
                let reserved: u32 = tail.iter().sum();
                for x in *first..=rest.saturating_sub(reserved) {
                    if rest < reserved + x {
                        break;
                    }
                    prefix.push(x);
                    go(rest - x, tail, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(total, lower, &mut Vec::with_capacity(lower.len()), &mut out);
    out
}

fn ensure_realizes(g: &Graph, e: &CwExpression) -> Result<(), DriverError> {
    if e.check_realizes(g) {
        Ok(())
    } else {
        Err(DriverError::Mismatch)
    }
}

/// Solves one auxiliary instance; `Some` only when feasible, with a
/// verified witness.
fn solve_verified(
    m: &ProblemModel,
    g: &Graph,
    e: &CwExpression,
) -> Result<Option<(WeightValue, Vec<usize>)>, DriverError> {
    let sol = solve(m, e, true)?;
    if sol.weight.is_error() {
        return Ok(None);
    }
    let coloring = sol.coloring.expect("feasible solves carry a witness");
    match verify_coloring(m, g, &coloring) {
        Ok(w) if w == sol.weight => Ok(Some((sol.weight, coloring))),
        Ok(actual) => Err(DriverError::WeightMismatch { reported: sol.weight, actual }),
        Err(f) => Err(DriverError::Verification(f)),
    }
}

type Found = Option<(Composition, WeightValue, Vec<usize>)>;

/// Returns the first composition (in the given order) whose instance is
/// feasible, solving them in parallel, and how many instances were solved.
fn first_feasible(
    comps: &[Composition],
    build: impl Fn(&Composition) -> Result<ProblemModel, ModelError> + Sync,
    g: &Graph,
    e: &CwExpression,
) -> Result<(Found, usize), DriverError> {
    let solves = AtomicUsize::new(0);
    let found = comps.par_iter().find_map_first(|c| {
        solves.fetch_add(1, AtomicOrdering::Relaxed);
        let r = build(c).map_err(DriverError::from).and_then(|m| solve_verified(&m, g, e));
        match r {
            Ok(Some((w, col))) => Some(Ok((c.clone(), w, col))),
            Ok(None) => None,
            Err(err) => Some(Err(err)),
        }
    });
    Ok((found.transpose()?, solves.into_inner()))
}

fn numbered(from: u32, to: u32) -> Vec<String> {
    (from..=to).map(|i| i.to_string()).collect()
}

/// Minimum-weight global [k]-Roman dominating function. A specified-size
/// instance has weight `Σ j·s_j` whenever feasible, so compositions are
/// tried in order of that weight and the first feasible one is optimal.
pub fn solve_global_k_roman(
    k: u32,
    g: &Graph,
    e: &CwExpression,
    variant: RomanVariant,
) -> Result<DriverSolution, DriverError> {
    ensure_realizes(g, e)?;
    let n = g.vertex_count() as u32;
    let mut comps = enumerate_compositions(n, &vec![0; k as usize + 2]);
    let weight = |c: &Composition| c.iter().enumerate().map(|(j, &s)| j as u64 * s as u64).sum::<u64>();
    comps.sort_by_key(weight);
    let build =
        |c: &Composition| instantiate_builtin(&Builtin::SpecifiedSizeGlobalKRoman { k, sizes: c.clone(), variant }, g);
    let colors = numbered(0, k + 1);
    let (found, solves) = first_feasible(&comps, build, g, e)?;
    Ok(match found {
        Some((sizes, w, coloring)) => {
            DriverSolution { weight: w, sizes: Some(sizes), coloring: Some(coloring), colors, solves }
        }
        None => DriverSolution::infeasible(colors, solves),
    })
}

/// Decides whether `g` has a k-community structure (balanced: all parts of
/// size `|V|/k`). Weight 0 means yes.
pub fn solve_k_community(k: u32, g: &Graph, e: &CwExpression, balanced: bool) -> Result<DriverSolution, DriverError> {
    ensure_realizes(g, e)?;
    if k < 2 {
        return Err(ModelError::Parameter("a community structure needs k >= 2".into()).into());
    }
    let n = g.vertex_count() as u32;
    let colors = numbered(1, k);
    let comps: Vec<Composition> = if balanced {
        if !n.is_multiple_of(k) {
            return Err(ModelError::Parameter(format!("balanced {k}-community needs k | |V| = {n}")).into());
        }
        if n / k >= 2 {
            vec![vec![n / k; k as usize]]
        } else {
            Vec::new()
        }
    } else {
        enumerate_compositions(n, &vec![2; k as usize])
    };
    let build = |c: &Composition| instantiate_builtin(&Builtin::SpecifiedSizeKCommunity { sizes: c.clone() }, g);
    let (found, solves) = first_feasible(&comps, build, g, e)?;
    Ok(match found {
        Some((sizes, w, coloring)) => {
            DriverSolution { weight: w, sizes: Some(sizes), coloring: Some(coloring), colors, solves }
        }
        None => DriverSolution::infeasible(colors, solves),
    })
}

fn subset_driver(
    g: &Graph,
    e: &CwExpression,
    sizes: impl Iterator<Item = u32>,
    build: impl Fn(u32) -> Result<ProblemModel, ModelError>,
) -> Result<DriverSolution, DriverError> {
    ensure_realizes(g, e)?;
    let colors = vec!["S".to_string(), "Sbar".to_string()];
    let n = g.vertex_count() as u32;
    let mut solves = 0;
    for s in sizes {
        solves += 1;
        let m = build(s)?;
        if let Some((_, coloring)) = solve_verified(&m, g, e)? {
            return Ok(DriverSolution {
                weight: WeightValue::Finite(s as i64),
                sizes: Some(vec![s, n - s]),
                coloring: Some(coloring),
                colors,
                solves,
            });
        }
    }
    Ok(DriverSolution::infeasible(colors, solves))
}

/// Largest proportionally dense subgraph, optionally containing every
/// vertex of `required`. Sizes are tried from `|V| − 1` down to 2.
pub fn solve_max_pds(g: &Graph, e: &CwExpression, required: &[String]) -> Result<DriverSolution, DriverError> {
    let n = g.vertex_count() as u32;
    for v in required {
        if g.index_of(v).is_none() {
            return Err(ModelError::UnknownVertex(v.clone()).into());
        }
    }
    let low = (required.len() as u32).max(2);
    subset_driver(g, e, (low..n).rev(), |s| {
        instantiate_builtin(&Builtin::SpecifiedSizePds { s_in: s, required: required.to_vec() }, g)
    })
}

/// Largest degree-based γ-quasi-clique with at least two vertices. Sizes
/// are tried from `|V|` down to 2.
pub fn solve_max_quasi_clique(gamma: Ratio, g: &Graph, e: &CwExpression) -> Result<DriverSolution, DriverError> {
    let n = g.vertex_count() as u32;
    subset_driver(g, e, (2..=n).rev(), |s| instantiate_builtin(&Builtin::QuasiClique { gamma, s_in: s }, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwexpr::{build_family, trivial_expression, Family};
    use crate::graph::parse_graph;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn compositions() {
        assert_eq!(enumerate_compositions(4, &[2, 2]), vec![vec![2, 2]]);
        assert_eq!(enumerate_compositions(6, &[2, 2]), vec![vec![2, 4], vec![3, 3], vec![4, 2]]);
        assert_eq!(enumerate_compositions(5, &[0, 0, 0]).len() as u64, binomial(7, 2));
        assert_eq!(enumerate_compositions(3, &[2, 2]), Vec::<Composition>::new());
        assert_eq!(enumerate_compositions(0, &[0]), vec![vec![0]]);
        let all = enumerate_compositions(7, &[1, 0, 2, 0]);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
        assert!(all.iter().all(|c| c.iter().sum::<u32>() == 7 && c[0] >= 1 && c[2] >= 2));
    }

    #[test]
    fn community_on_k4_and_p4() {
        let e = build_family(Family::Complete, 4, None).unwrap();
        let (k4, _) = e.realize();
        let r = solve_k_community(2, &k4, &e, true).unwrap();
        assert_eq!(r.weight, WeightValue::Finite(0));
        assert_eq!(r.sizes, Some(vec![2, 2]));
        let p4 = parse_graph("v a\nv b\nv c\nv d\ne a b\ne b c\ne c d").unwrap();
        let r = solve_k_community(2, &p4, &trivial_expression(&p4).unwrap(), false).unwrap();
        assert_eq!(r.weight, WeightValue::Finite(0));
        let c = r.coloring.unwrap();
        assert!(c[0] == c[1] && c[2] == c[3] && c[0] != c[2], "{c:?}");
    }

    #[test]
    fn pds_on_c4_and_k3() {
        let e = build_family(Family::Cycle, 4, None).unwrap();
        let (c4, _) = e.realize();
        let r = solve_max_pds(&c4, &e, &[]).unwrap();
        assert_eq!(r.weight, WeightValue::Finite(2));
        let e3 = build_family(Family::Complete, 3, None).unwrap();
        let (k3, _) = e3.realize();
        assert_eq!(solve_max_pds(&k3, &e3, &[]).unwrap().weight, WeightValue::Finite(2));
    }

    #[test]
    fn quasi_clique_edgeless_is_infeasible() {
        let g = parse_graph("v a\nv b\nv c").unwrap();
        let e = trivial_expression(&g).unwrap();
        let r = solve_max_quasi_clique(Ratio { num: 1, den: 2 }, &g, &e).unwrap();
        assert!(r.weight.is_error());
        assert_eq!(r.solves, 2);
    }

    #[test]
    fn mismatch_is_reported() {
        let g = parse_graph("v a\nv b\ne a b").unwrap();
        let e = build_family(Family::Path, 2, None).unwrap();
        assert!(matches!(solve_max_pds(&g, &e, &[]), Err(DriverError::Mismatch)));
    }
}
