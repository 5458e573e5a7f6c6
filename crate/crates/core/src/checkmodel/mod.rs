//! Problem models: colors, per-vertex color lists and weights, a
//! color-counting check, the stability cap `𝒩`, and optional per-color size
//! constraints.

mod builtin;
mod lcvp;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::Graph;
use crate::sizedfa::CountingAutomaton;
use crate::weights::{WeightSet, WeightValue};

pub use builtin::{instantiate_builtin, Builtin, Ratio, RomanVariant};
pub use lcvp::{DegreeConstraintMatrix, DegreeSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("vertex `{0}` has an empty color list")]
    EmptyList(String),
    #[error("weight of vertex `{vertex}` with color {color} is Error")]
    ErrorWeight { vertex: String, color: String },
    #[error("stability cap {cap} outside [1, {max}]")]
    CapOutOfRange { cap: u32, max: u32 },
    #[error("color {0} out of range")]
    ColorOutOfRange(usize),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("sizes sum to {sum}, expected {expected}")]
    SizesDontSum { sum: u64, expected: u64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// Signature of a user-supplied check: `(vertex index, color, counts)`.
pub type CheckFn = dyn Fn(usize, usize, &[u32]) -> bool + Send + Sync;

/// A color-counting check `check(v, a, n_1, …, n_q)`.
#[derive(Clone)]
pub enum Check {
    /// `n_a = 0`
    KColoring,
    /// `a = 0 ∨ n_1 = 0`
    IndependentSet,
    /// `a + n_1 ≡ 1 (mod 2)`
    OddDomination,
    /// `a + Σ_{j≥1} (j−1)·n_j ≥ k`
    KRoman {
        k: u32,
    },
    /// [k]-Roman condition in `G` and in the complement, with exact class
    /// sizes `sizes[j]`.
    GlobalKRoman {
        k: u32,
        sizes: Vec<u32>,
        variant: RomanVariant,
    },
    /// `∀b. n_a·s_b ≥ n_b·(s_a − 1)`
    Community {
        sizes: Vec<u32>,
    },
    /// Color 0 is `S`: `a = S ⇒ n_S·s_out ≥ n_out·(s_in − 1)`
    Pds {
        s_in: u32,
        s_out: u32,
    },
    /// Color 0 is `S`: `a = S ⇒ r·n_S ≥ p·(s_in − 1)` for `γ = p/r`
    QuasiClique {
        gamma: Ratio,
        s_in: u32,
    },
    /// `∀j. n_j ∈ D[a][j]`
    Lcvp(DegreeConstraintMatrix),
    Custom(Arc<CheckFn>),
}

impl fmt::Debug for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::KColoring => f.write_str("KColoring"),
            Check::IndependentSet => f.write_str("IndependentSet"),
            Check::OddDomination => f.write_str("OddDomination"),
            Check::KRoman { k } => write!(f, "KRoman {{ k: {k} }}"),
            Check::GlobalKRoman { k, sizes, variant } => {
                write!(f, "GlobalKRoman {{ k: {k}, sizes: {sizes:?}, variant: {variant:?} }}")
            }
            Check::Community { sizes } => write!(f, "Community {{ sizes: {sizes:?} }}"),
            Check::Pds { s_in, s_out } => write!(f, "Pds {{ s_in: {s_in}, s_out: {s_out} }}"),
            Check::QuasiClique { gamma, s_in } => {
                write!(f, "QuasiClique {{ gamma: {gamma}, s_in: {s_in} }}")
            }
            Check::Lcvp(d) => write!(f, "Lcvp({d})"),
            Check::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl Check {
    pub fn eval(&self, v: usize, a: usize, n: &[u32]) -> bool {
        match self {
            Check::KColoring => n[a] == 0,
            Check::IndependentSet => a == 0 || n[1] == 0,
            Check::OddDomination => (a as u64 + n[1] as u64) % 2 == 1,
            Check::KRoman { k } => roman_sum(a, n) >= *k as i64,
            Check::GlobalKRoman { k, sizes, variant } => {
                let k = *k as i64;
                if roman_sum(a, n) < k {
                    return false;
                }
                // Σ_{j≥1} (j−1)(s_j − n_j)
                let outside: i64 = (1..n.len()).map(|j| (j as i64 - 1) * (sizes[j] as i64 - n[j] as i64)).sum();
                match variant {
                    RomanVariant::Paper => outside >= k,
                    // In the complement the vertex itself is not a neighbor:
                    // a + Σ_{j≥1} (j−1)(s_j − n_j − [j = a]) ≥ k.
                    RomanVariant::Strict => {
                        let own = if a >= 1 { a as i64 - 1 } else { 0 };
                        a as i64 + outside - own >= k
                    }
                }
            }
            Check::Community { sizes } => {
                let na = n[a] as u64;
                let sa = sizes[a] as u64;
                (0..sizes.len()).all(|b| na * sizes[b] as u64 >= n[b] as u64 * (sa - 1))
            }
            Check::Pds { s_in, s_out } => a != 0 || n[0] as u64 * *s_out as u64 >= n[1] as u64 * (*s_in as u64 - 1),
            Check::QuasiClique { gamma, s_in } => {
                a != 0 || n[0] as u64 * gamma.den as u64 >= gamma.num as u64 * (*s_in as u64 - 1)
            }
            Check::Lcvp(d) => d.admits(a, n),
            Check::Custom(f) => f(v, a, n),
        }
    }
}

/// `a + Σ_{j≥1} (j−1)·n_j`, the Roman closed-neighborhood surplus.
fn roman_sum(a: usize, n: &[u32]) -> i64 {
    a as i64 + (1..n.len()).map(|j| (j as i64 - 1) * n[j] as i64).sum::<i64>()
}

/// A color-counting locally checkable problem instantiated on a vertex set.
#[derive(Clone, Debug)]
pub struct ProblemModel {
    name: String,
    colors: Vec<String>,
    weight_set: WeightSet,
    vertices: Vec<String>,
    lists: Vec<Vec<usize>>,
    /// `weights[v * q + a]`; meaningful only for `a ∈ L_v`.
    weights: Vec<WeightValue>,
    check: Check,
    cap: u32,
    size_constraints: Vec<Option<CountingAutomaton>>,
}

/// Assembles a [`ProblemModel`] and enforces its invariants in `build`.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    model: ProblemModel,
}

impl ModelBuilder {
    /// Every vertex of `g` may take every color with weight 0.
    pub fn new(name: &str, g: &Graph, colors: Vec<String>, weight_set: WeightSet, check: Check) -> Self {
        let q = colors.len();
        let n = g.vertex_count();
        ModelBuilder {
            model: ProblemModel {
                name: name.to_string(),
                colors,
                weight_set,
                vertices: g.names().to_vec(),
                lists: vec![(0..q).collect(); n],
                weights: vec![WeightValue::Finite(0); n * q],
                check,
                cap: n.max(1) as u32,
                size_constraints: vec![None; q],
            },
        }
    }

    /// `w_{v,a} = f(a)` for every vertex.
    pub fn weights_by_color(mut self, f: impl Fn(usize) -> i64) -> Self {
        let q = self.model.colors.len();
        for (idx, w) in self.model.weights.iter_mut().enumerate() {
            *w = WeightValue::Finite(f(idx % q));
        }
        self
    }

    pub fn weight(mut self, v: usize, a: usize, w: WeightValue) -> Self {
        let q = self.model.colors.len();
        self.model.weights[v * q + a] = w;
        self
    }

    pub fn list(mut self, vertex: &str, colors: Vec<usize>) -> Result<Self, ModelError> {
        let v = self
            .model
            .vertices
            .iter()
            .position(|n| n == vertex)
            .ok_or_else(|| ModelError::UnknownVertex(vertex.into()))?;
        let mut colors = colors;
        colors.sort_unstable();
        colors.dedup();
        self.model.lists[v] = colors;
        Ok(self)
    }

    /// Sets `𝒩 = min(d, |V|)` (at least 1). Counts never exceed `|V| − 1`,
    /// so capping at `|V|` is always exact.
    pub fn stable(mut self, d: u32) -> Self {
        let n = self.model.vertices.len().max(1) as u32;
        self.model.cap = d.clamp(1, n);
        self
    }

    pub fn size_constraint(mut self, color: usize, automaton: CountingAutomaton) -> Self {
        self.model.size_constraints[color] = Some(automaton);
        self
    }

    pub fn build(self) -> Result<ProblemModel, ModelError> {
        let m = self.model;
        let q = m.colors.len();
        if q == 0 {
            return Err(ModelError::Parameter("at least one color is required".into()));
        }
        for (v, list) in m.lists.iter().enumerate() {
            if list.is_empty() {
                return Err(ModelError::EmptyList(m.vertices[v].clone()));
            }
            if let Some(&a) = list.iter().find(|&&a| a >= q) {
                return Err(ModelError::ColorOutOfRange(a));
            }
            for &a in list {
                if m.weight_set.normalize(m.weights[v * q + a]).is_error() {
                    return Err(ModelError::ErrorWeight { vertex: m.vertices[v].clone(), color: m.colors[a].clone() });
                }
            }
        }
        let max = m.vertices.len().max(1) as u32;
        if m.cap < 1 || m.cap > max {
            return Err(ModelError::CapOutOfRange { cap: m.cap, max });
        }
        Ok(m)
    }
}

impl ProblemModel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn q(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_name(&self, a: usize) -> &str {
        &self.colors[a]
    }

    pub fn weight_set(&self) -> WeightSet {
        self.weight_set
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn check(&self) -> &Check {
        &self.check
    }

    /// `𝒩`
    pub fn stability_cap(&self) -> u32 {
        self.cap
    }

    /// `w_{v,a}`
    pub fn weight_of(&self, v: usize, a: usize) -> WeightValue {
        self.weights[v * self.q() + a]
    }

    /// `L_v`, ascending.
    pub fn color_list(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn allows(&self, v: usize, a: usize) -> bool {
        self.lists[v].binary_search(&a).is_ok()
    }

    pub fn size_constraints(&self) -> &[Option<CountingAutomaton>] {
        &self.size_constraints
    }

    /// Constrained colors in ascending order.
    pub fn constrained_colors(&self) -> Vec<usize> {
        (0..self.q()).filter(|&a| self.size_constraints[a].is_some()).collect()
    }

    /// Same model with a different cap. The caller is responsible for the
    /// check being stable at `cap`; any value `≥ d` is for a d-stable check.
    pub fn with_stability_cap(&self, cap: u32) -> Result<ProblemModel, ModelError> {
        let max = self.vertices.len().max(1) as u32;
        if cap < 1 || cap > max {
            return Err(ModelError::CapOutOfRange { cap, max });
        }
        let mut m = self.clone();
        m.cap = cap;
        Ok(m)
    }

    /// Weight of a coloring, `⊛_v w_{v,c(v)}`.
    pub fn coloring_weight(&self, coloring: &[usize]) -> WeightValue {
        self.weight_set.combine_all(coloring.iter().enumerate().map(|(v, &a)| self.weight_of(v, a)))
    }
}

/// `check(v, a, counts)` for the model's predicate.
pub fn evaluate_check(m: &ProblemModel, v: usize, a: usize, counts: &[u32]) -> bool {
    m.check.eval(v, a, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn p3() -> Graph {
        parse_graph("v a\nv b\nv c\ne a b\ne b c").unwrap()
    }

    #[test]
    fn builder_rejects_empty_list() {
        let b = ModelBuilder::new("x", &p3(), vec!["0".into(), "1".into()], WeightSet::MinSum, Check::KColoring);
        let err = b.list("b", vec![]).unwrap().build().unwrap_err();
        assert_eq!(err, ModelError::EmptyList("b".into()));
    }

    #[test]
    fn builder_rejects_error_weight() {
        let b = ModelBuilder::new("x", &p3(), vec!["0".into()], WeightSet::MinSum, Check::KColoring).weight(
            1,
            0,
            WeightValue::Error,
        );
        assert!(matches!(b.build(), Err(ModelError::ErrorWeight { .. })));
    }

    #[test]
    fn cap_is_clamped_to_vertex_count() {
        let m = ModelBuilder::new("x", &p3(), vec!["0".into()], WeightSet::MinSum, Check::KColoring)
            .stable(10)
            .build()
            .unwrap();
        assert_eq!(m.stability_cap(), 3);
        assert!(m.with_stability_cap(4).is_err());
        assert!(m.with_stability_cap(0).is_err());
        assert_eq!(m.with_stability_cap(2).unwrap().stability_cap(), 2);
    }

    #[test]
    fn custom_check() {
        let check = Check::Custom(Arc::new(|v, a, n: &[u32]| v == 0 || a + n[0] as usize > 1));
        assert!(check.eval(0, 0, &[0]));
        assert!(!check.eval(1, 0, &[1]));
        assert!(check.eval(1, 1, &[1]));
    }
}
