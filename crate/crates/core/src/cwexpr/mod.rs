//! Clique-width expressions.
//!
//! An expression is stored as an arena of nodes in post-order: every child
//! has a smaller [`NodeId`] than its parent, so bottom-up passes are plain
//! loops over the arena. A node's position is its identity (the DP memoizes
//! per position, never by structural hashing).

mod family;
mod parse;
mod validate;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::Graph;

pub use family::{build_family, trivial_expression, Family};
pub use parse::{parse_expression, ExprParseError, ParseErrorKind};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

/// 1-based label.
pub type Label = u32;
pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    /// `i(v)`
    Create { vertex: String, label: Label },
    /// `e₁ ⊕ e₂`
    Union { left: NodeId, right: NodeId },
    /// `η_{i,j}(e)`
    Join { i: Label, j: Label, child: NodeId },
    /// `ρ_{from→to}(e)`
    Rename { from: Label, to: Label, child: NodeId },
}

impl Node {
    pub fn kind(&self) -> &'static str {
        match self {
            Node::Create { .. } => "node",
            Node::Union { .. } => "union",
            Node::Join { .. } => "join",
            Node::Rename { .. } => "rename",
        }
    }

    fn children(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Node::Create { .. } => (None, None),
            Node::Union { left, right } => (Some(left), Some(right)),
            Node::Join { child, .. } | Node::Rename { child, .. } => (Some(child), None),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("expression has no nodes")]
    Empty,
    #[error("node {0} refers to a child that is not an earlier node")]
    BadChild(NodeId),
    #[error("node {0} is used more than once or not reachable from the root")]
    NotATree(NodeId),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("label 0 is not allowed")]
    ZeroLabel,
    #[error("{op} with identical labels {label}")]
    SameLabels { op: &'static str, label: Label },
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("family `{family}` does not accept size {size}")]
    FamilySize { family: &'static str, size: usize },
}

/// A clique-width k-expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwExpression {
    nodes: Vec<Node>,
    root: NodeId,
    k: u32,
}

/// Incremental construction of an expression; children must be built
/// before their parents.
#[derive(Default, Debug)]
pub struct ExprBuilder {
    nodes: Vec<Node>,
    max_label: Label,
}

impl ExprBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn see(&mut self, l: Label) {
        self.max_label = self.max_label.max(l);
    }

    pub fn create(&mut self, vertex: impl Into<String>, label: Label) -> NodeId {
        self.see(label);
        self.push(Node::Create { vertex: vertex.into(), label })
    }

    pub fn union(&mut self, left: NodeId, right: NodeId) -> NodeId {
        self.push(Node::Union { left, right })
    }

    pub fn join(&mut self, i: Label, j: Label, child: NodeId) -> NodeId {
        self.see(i);
        self.see(j);
        self.push(Node::Join { i, j, child })
    }

    pub fn rename(&mut self, from: Label, to: Label, child: NodeId) -> NodeId {
        self.see(from);
        self.see(to);
        self.push(Node::Rename { from, to, child })
    }

    /// Finishes with the last node as root and `k = max(max label, k_min)`.
    pub fn finish(self, k_min: Option<u32>) -> Result<CwExpression, ExprError> {
        let root = self.nodes.len().checked_sub(1).ok_or(ExprError::Empty)?;
        let k = self.max_label.max(k_min.unwrap_or(0));
        CwExpression::from_nodes(self.nodes, root, k)
    }
}

impl CwExpression {
    /// Checks structural well-formedness: post-order arena forming a tree,
    /// unique vertex names, positive labels, `i ≠ j` in joins and renames.
    /// Semantic constraints (irredundancy, rename targets, label range) are
    /// the job of [`validate`].
    pub fn from_nodes(nodes: Vec<Node>, root: NodeId, k: u32) -> Result<Self, ExprError> {
        if nodes.is_empty() {
            return Err(ExprError::Empty);
        }
        let mut parent_count = vec![0u32; nodes.len()];
        let mut names = BTreeSet::new();
        for (id, node) in nodes.iter().enumerate() {
            for c in node.children() {
                if c >= id {
                    return Err(ExprError::BadChild(id));
                }
                parent_count[c] += 1;
            }
            match node {
                Node::Create { vertex, label } => {
                    if !crate::graph::is_valid_name(vertex) {
                        return Err(ExprError::InvalidName(vertex.clone()));
                    }
                    if *label == 0 {
                        return Err(ExprError::ZeroLabel);
                    }
                    if !names.insert(vertex.as_str()) {
                        return Err(ExprError::DuplicateVertex(vertex.clone()));
                    }
                }
                Node::Union { .. } => {}
                Node::Join { i, j, .. } => check_pair("join", *i, *j)?,
                Node::Rename { from, to, .. } => check_pair("rename", *from, *to)?,
            }
        }
        if root != nodes.len() - 1 {
            return Err(ExprError::NotATree(root));
        }
        for (id, &c) in parent_count.iter().enumerate() {
            let expected = if id == root { 0 } else { 1 };
            if c != expected {
                return Err(ExprError::NotATree(id));
            }
        }
        Ok(CwExpression { nodes, root, k })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Declared label budget.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest label occurring anywhere in the expression.
    pub fn max_label(&self) -> Label {
        self.nodes
            .iter()
            .map(|n| match *n {
                Node::Create { label, .. } => label,
                Node::Union { .. } => 0,
                Node::Join { i, j, .. } => i.max(j),
                Node::Rename { from, to, .. } => from.max(to),
            })
            .max()
            .unwrap_or(0)
    }

    /// Vertex names in creation (arena) order.
    pub fn vertex_names(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Create { vertex, .. } => Some(vertex.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Per node, the size of every label class (index `label - 1`) in the
    /// graph built by that subexpression. Labels beyond `k` are ignored, so
    /// call this only on validated expressions.
    pub fn class_sizes(&self) -> Vec<Vec<u32>> {
        let k = self.k as usize;
        let mut out: Vec<Vec<u32>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let sizes = match *node {
                Node::Create { label, .. } => {
                    let mut s = vec![0; k];
                    if let Some(slot) = s.get_mut(label as usize - 1) {
                        *slot = 1;
                    }
                    s
                }
                Node::Union { left, right } => out[left].iter().zip(&out[right]).map(|(a, b)| a + b).collect(),
                Node::Join { child, .. } => out[child].clone(),
                Node::Rename { from, to, child } => {
                    let mut s = out[child].clone();
                    let (f, t) = (from as usize - 1, to as usize - 1);
                    if f < k && t < k {
                        s[t] += s[f];
                        s[f] = 0;
                    }
                    s
                }
            };
            out.push(sizes);
        }
        out
    }

    /// Labels of every vertex of the subexpression rooted at `id`.
    pub fn label_state(&self, id: NodeId) -> LabelState {
        // Walk the subtree top-down, composing renames from the node down to
        // each leaf.
        let mut labels = BTreeMap::new();
        let mut stack: Vec<(NodeId, Vec<(Label, Label)>)> = vec![(id, Vec::new())];
        while let Some((n, renames)) = stack.pop() {
            match &self.nodes[n] {
                Node::Create { vertex, label } => {
                    let mut l = *label;
                    for &(from, to) in renames.iter().rev() {
                        if l == from {
                            l = to;
                        }
                    }
                    labels.insert(vertex.clone(), l);
                }
                Node::Union { left, right } => {
                    stack.push((*left, renames.clone()));
                    stack.push((*right, renames));
                }
                Node::Join { child, .. } => stack.push((*child, renames)),
                Node::Rename { from, to, child } => {
                    let mut r = renames;
                    r.push((*from, *to));
                    stack.push((*child, r));
                }
            }
        }
        LabelState { labels, k: self.k }
    }

    /// Final label of every vertex, `ℓ_e`.
    pub fn final_labels(&self) -> BTreeMap<String, Label> {
        self.label_state(self.root).labels
    }

    /// Labels in `[1, k]` carried by no vertex of the final graph.
    pub fn unused_labels(&self) -> BTreeSet<Label> {
        self.label_state(self.root).unused()
    }

    /// Builds `G_e` together with the final labels. Joins add the complete
    /// bipartite edge set between the current classes.
    pub fn realize(&self) -> (Graph, LabelState) {
        let mut g = Graph::new();
        // current label of each vertex index
        let mut label_of: Vec<Label> = Vec::new();
        // per node, the vertex indices of its subgraph
        let mut members: Vec<Vec<usize>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let m = match node {
                Node::Create { vertex, label } => {
                    let id = g.add_vertex(vertex).expect("names checked at construction");
                    label_of.push(*label);
                    vec![id]
                }
                Node::Union { left, right } => {
                    let mut m = std::mem::take(&mut members[*left]);
                    m.append(&mut std::mem::take(&mut members[*right]));
                    m
                }
                Node::Join { i, j, child } => {
                    let m = std::mem::take(&mut members[*child]);
                    let ci: Vec<usize> = m.iter().copied().filter(|&v| label_of[v] == *i).collect();
                    let cj: Vec<usize> = m.iter().copied().filter(|&v| label_of[v] == *j).collect();
                    for &u in &ci {
                        for &v in &cj {
                            g.add_edge_by_index(u, v);
                        }
                    }
                    m
                }
                Node::Rename { from, to, child } => {
                    let m = std::mem::take(&mut members[*child]);
                    for &v in &m {
                        if label_of[v] == *from {
                            label_of[v] = *to;
                        }
                    }
                    m
                }
            };
            members.push(m);
        }
        let labels = (0..g.vertex_count()).map(|v| (g.name(v).to_string(), label_of[v])).collect();
        (g, LabelState { labels, k: self.k })
    }

    /// True iff `realize(self)` has exactly the vertex names and edges of `g`.
    pub fn check_realizes(&self, g: &Graph) -> bool {
        self.realize().0.same_as(g)
    }

    /// Renders the expression in the s-expression file syntax. A `(k n ...)`
    /// wrapper is emitted only when `k` exceeds the largest label used.
    pub fn to_sexpr(&self) -> String {
        let mut rendered: Vec<String> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut s = String::new();
            match node {
                Node::Create { vertex, label } => {
                    let _ = write!(s, "(node {vertex} {label})");
                }
                Node::Union { left, right } => {
                    let l = std::mem::take(&mut rendered[*left]);
                    let r = std::mem::take(&mut rendered[*right]);
                    let _ = write!(s, "(union {l} {r})");
                }
                Node::Join { i, j, child } => {
                    let c = std::mem::take(&mut rendered[*child]);
                    let _ = write!(s, "(join {i} {j} {c})");
                }
                Node::Rename { from, to, child } => {
                    let c = std::mem::take(&mut rendered[*child]);
                    let _ = write!(s, "(rename {from} {to} {c})");
                }
            }
            rendered.push(s);
        }
        let body = std::mem::take(&mut rendered[self.root]);
        if self.k > self.max_label() {
            format!("(k {} {body})", self.k)
        } else {
            body
        }
    }
}

fn check_pair(op: &'static str, a: Label, b: Label) -> Result<(), ExprError> {
    if a == 0 || b == 0 {
        return Err(ExprError::ZeroLabel);
    }
    if a == b {
        return Err(ExprError::SameLabels { op, label: a });
    }
    Ok(())
}

/// Vertex labels of a (sub)expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelState {
    pub labels: BTreeMap<String, Label>,
    pub k: u32,
}

impl LabelState {
    pub fn label(&self, vertex: &str) -> Option<Label> {
        self.labels.get(vertex).copied()
    }

    pub fn unused(&self) -> BTreeSet<Label> {
        let used: BTreeSet<Label> = self.labels.values().copied().collect();
        (1..=self.k).filter(|l| !used.contains(l)).collect()
    }
}
