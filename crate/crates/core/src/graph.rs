//! Simple undirected graphs with named vertices.
//!
//! Vertex names are the join key between graphs, clique-width expressions and
//! problem models. Internally every vertex also has a dense index given by
//! declaration order.

use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::FxHashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: invalid vertex name `{name}`")]
    InvalidName { line: usize, name: String },
    #[error("line {line}: duplicate vertex `{name}`")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: edge references unknown vertex `{name}`")]
    UnknownEdgeEndpoint { line: usize, name: String },
    #[error("line {line}: self-loop on `{name}`")]
    SelfLoop { line: usize, name: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
}

pub(crate) fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Finite simple undirected graph. Immutable once built.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: FxHashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.names)
            .field("edges", &self.edges.iter().map(|&(u, v)| (&self.names[u], &self.names[v])).collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex names and edges given by name.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (u, v) in edges {
            g.add_edge(u.as_ref(), v.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize, GraphError> {
        if !is_valid_name(name) {
            return Err(GraphError::InvalidName { line: 0, name: name.into() });
        }
        if self.index.contains_key(name) {
            return Err(GraphError::DuplicateVertex { line: 0, name: name.into() });
        }
        let id = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.adj.push(BTreeSet::new());
        Ok(id)
    }

    /// Adds an edge; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        if a == b {
            return Err(GraphError::SelfLoop { line: 0, name: u.into() });
        }
        self.add_edge_by_index(a, b);
        Ok(())
    }

    pub(crate) fn add_edge_by_index(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        self.edges.insert((a.min(b), a.max(b)));
    }

    fn require(&self, name: &str) -> Result<usize, GraphError> {
        self.index.get(name).copied().ok_or_else(|| GraphError::UnknownVertex(name.into()))
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Edges as index pairs `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbor_indices(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Open neighborhood of `v`, by name.
    pub fn neighbors(&self, v: &str) -> Result<BTreeSet<&str>, GraphError> {
        let i = self.require(v)?;
        Ok(self.adj[i].iter().map(|&u| self.names[u].as_str()).collect())
    }

    pub fn has_edge(&self, u: &str, v: &str) -> Result<bool, GraphError> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        Ok(self.adj[a].contains(&b))
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Vertex and edge sets equal by name.
    pub fn same_as(&self, other: &Graph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let names: BTreeSet<&str> = self.names.iter().map(String::as_str).collect();
        if !other.names.iter().all(|n| names.contains(n.as_str())) {
            return false;
        }
        self.edges().all(|(u, v)| other.has_edge(&self.names[u], &self.names[v]).unwrap_or(false))
    }

    /// Serializes to the line-oriented graph file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.names {
            out.push_str("v ");
            out.push_str(n);
            out.push('\n');
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("e {} {}\n", self.names[u], self.names[v]));
        }
        out
    }
}

/// Parses the graph file format: `# comment`, `v <name>`, `e <name> <name>`,
/// blank lines ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        let malformed = || GraphError::Malformed { line, text: trimmed.to_string() };
        match parts.as_slice() {
            ["v", name] => {
                if !is_valid_name(name) {
                    return Err(GraphError::InvalidName { line, name: name.to_string() });
                }
                if g.index.contains_key(*name) {
                    return Err(GraphError::DuplicateVertex { line, name: name.to_string() });
                }
                g.add_vertex(name).map_err(|_| malformed())?;
            }
            ["e", a, b] => {
                for n in [a, b] {
                    if !g.index.contains_key(*n) {
                        return Err(GraphError::UnknownEdgeEndpoint { line, name: n.to_string() });
                    }
                }
                if a == b {
                    return Err(GraphError::SelfLoop { line, name: a.to_string() });
                }
                g.add_edge(a, b).map_err(|_| malformed())?;
            }
            _ => return Err(malformed()),
        }
    }
    Ok(g)
}

/// All connected graphs on `n` vertices, one representative per isomorphism
/// class. Vertices are named `v1..vn`. Intended for desk-scale sweeps
/// (`n ≤ 7`).
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "exhaustive enumeration only supported up to 7 vertices");
    if n == 0 {
        return Vec::new();
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let pair_index = |u: usize, v: usize| -> usize {
        let (a, b) = (u.min(v), u.max(v));
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    // perm_maps[p][e] = index of the image of edge e under permutation p
    let perm_maps: Vec<Vec<usize>> =
        perms.iter().map(|p| pairs.iter().map(|&(u, v)| pair_index(p[u], p[v])).collect()).collect();

    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let canon = perm_maps
            .iter()
            .map(|m| {
                let mut img = 0u64;
                for (e, &t) in m.iter().enumerate() {
                    if mask >> e & 1 == 1 {
                        img |= 1 << t;
                    }
                }
                img
            })
            .min()
            .unwrap();
        if canon != mask {
            continue;
        }
        let names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let mut g = Graph::new();
        for name in &names {
            g.add_vertex(name).unwrap();
        }
        for (e, &(u, v)) in pairs.iter().enumerate() {
            if mask >> e & 1 == 1 {
                g.add_edge_by_index(u, v);
            }
        }
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}
