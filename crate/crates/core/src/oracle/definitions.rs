//! Exhaustive evaluators written straight from the problem definitions, with
//! no color-counting reformulation. They arbitrate the reductions.

use crate::checkmodel::Ratio;
use crate::graph::Graph;

/// Every subset of `n` vertices as a bitmask, ascending.
fn subsets(n: usize) -> impl Iterator<Item = u32> {
    0..(1u32 << n)
}

fn members(mask: u32, n: usize) -> impl Iterator<Item = usize> {
    (0..n).filter(move |&v| mask >> v & 1 == 1)
}

fn neighbors_in(g: &Graph, v: usize, mask: u32) -> u64 {
    g.neighbor_indices(v).filter(|&u| mask >> u & 1 == 1).count() as u64
}

/// All functions `V → [0, base)`, first vertex most significant.
fn functions(n: usize, base: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut f = vec![0; n];
        for slot in f.iter_mut().rev() {
            *slot = code % base;
            code /= base;
        }
        f
    })
}

/// `f(v) < k ⇒ Σ_{u ∈ N[v]} f(u) ≥ |AN(v)| + k`, in `g` or its complement.
pub fn is_k_roman(g: &Graph, f: &[usize], k: usize, complement: bool) -> bool {
    let n = g.vertex_count();
    (0..n).all(|v| {
        if f[v] >= k {
            return true;
        }
        let nbrs: Vec<usize> = (0..n).filter(|&u| u != v && g.adjacent(u, v) != complement).collect();
        let sum: usize = f[v] + nbrs.iter().map(|&u| f[u]).sum::<usize>();
        let active = nbrs.iter().filter(|&&u| f[u] >= 1).count();
        sum >= active + k
    })
}

/// `γ_[kR](G)` with a minimizing function.
pub fn k_roman_number(g: &Graph, k: usize) -> (u64, Vec<usize>) {
    functions(g.vertex_count(), k + 2)
        .filter(|f| is_k_roman(g, f, k, false))
        .map(|f| (f.iter().sum::<usize>() as u64, f))
        .min_by_key(|(w, _)| *w)
        .expect("f ≡ k+1 is always [k]-Roman")
}

/// Minimum weight of a function that is [k]-Roman in both `G` and `Ḡ`.
pub fn global_k_roman_number(g: &Graph, k: usize) -> (u64, Vec<usize>) {
    functions(g.vertex_count(), k + 2)
        .filter(|f| is_k_roman(g, f, k, false) && is_k_roman(g, f, k, true))
        .map(|f| (f.iter().sum::<usize>() as u64, f))
        .min_by_key(|(w, _)| *w)
        .expect("f ≡ k+1 is always globally [k]-Roman")
}

/// `part[v] ∈ [0, k)`; every part has ≥ 2 vertices and every vertex
/// satisfies `|N(v) ∩ C_i| / (|C_i| − 1) ≥ |N(v) ∩ C_j| / |C_j|` for its part
/// `C_i` and every other part `C_j`.
pub fn is_community_structure(g: &Graph, part: &[usize], k: usize) -> bool {
    let n = g.vertex_count();
    let mut size = vec![0u64; k];
    for &p in part {
        size[p] += 1;
    }
    if size.iter().any(|&s| s < 2) {
        return false;
    }
    (0..n).all(|v| {
        let mut deg = vec![0u64; k];
        for u in g.neighbor_indices(v) {
            deg[part[u]] += 1;
        }
        let i = part[v];
        (0..k).filter(|&j| j != i).all(|j| deg[i] * size[j] >= deg[j] * (size[i] - 1))
    })
}

/// A k-community structure, if one exists (all parts equal in size when
/// `balanced`).
pub fn find_k_community(g: &Graph, k: usize, balanced: bool) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if k < 2 || (balanced && !n.is_multiple_of(k)) {
        return None;
    }
    functions(n, k).find(|part| {
        let equal = !balanced || (0..k).all(|p| part.iter().filter(|&&x| x == p).count() == n / k);
        equal && is_community_structure(g, part, k)
    })
}

/// `2 ≤ |S| < |V|` and `|N(v) ∩ S| / (|S| − 1) ≥ |N(v) ∩ S̄| / |S̄|` for
/// every `v ∈ S`.
pub fn is_pds(g: &Graph, s: u32) -> bool {
    let n = g.vertex_count();
    let inside = s.count_ones() as u64;
    let outside = n as u64 - inside;
    if inside < 2 || outside == 0 {
        return false;
    }
    let all = (1u32 << n) - 1;
    members(s, n).all(|v| neighbors_in(g, v, s) * outside >= neighbors_in(g, v, all & !s) * (inside - 1))
}

/// Largest PDS containing every vertex of `required` (bitmask), with one
/// witness.
pub fn max_pds(g: &Graph, required: u32) -> Option<(usize, u32)> {
    subsets(g.vertex_count())
        .filter(|&s| s & required == required && is_pds(g, s))
        .map(|s| (s.count_ones() as usize, s))
        .max_by_key(|&(size, s)| (size, std::cmp::Reverse(s)))
}

/// `|N(v) ∩ S| ≥ γ(|S| − 1)` for every `v ∈ S`.
pub fn is_quasi_clique(g: &Graph, s: u32, gamma: Ratio) -> bool {
    let n = g.vertex_count();
    let size = s.count_ones() as u64;
    members(s, n).all(|v| neighbors_in(g, v, s) * gamma.den as u64 >= gamma.num as u64 * size.saturating_sub(1))
}

/// Largest γ-quasi-clique with at least two vertices.
pub fn max_quasi_clique(g: &Graph, gamma: Ratio) -> Option<(usize, u32)> {
    subsets(g.vertex_count())
        .filter(|&s| s.count_ones() >= 2 && is_quasi_clique(g, s, gamma))
        .map(|s| (s.count_ones() as usize, s))
        .max_by_key(|&(size, s)| (size, std::cmp::Reverse(s)))
}

pub fn max_independent_set(g: &Graph) -> usize {
    let n = g.vertex_count();
    subsets(n)
        .filter(|&s| members(s, n).all(|v| neighbors_in(g, v, s) == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn min_dominating_set(g: &Graph) -> usize {
    let n = g.vertex_count();
    subsets(n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 1 || neighbors_in(g, v, s) > 0))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    functions(g.vertex_count(), k).any(|c| g.edges().all(|(u, v)| c[u] != c[v]))
}
