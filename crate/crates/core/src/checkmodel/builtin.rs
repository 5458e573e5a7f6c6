use std::fmt;
use std::str::FromStr;

use super::{Check, DegreeConstraintMatrix, DegreeSet, ModelBuilder, ModelError, ProblemModel};
use crate::graph::Graph;
use crate::sizedfa::CountingAutomaton;
use crate::weights::WeightSet;

/// Positive rational `num/den` with `0 < num ≤ den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub num: u32,
    pub den: u32,
}

impl Ratio {
    pub fn new(num: u32, den: u32) -> Result<Self, ModelError> {
        if num == 0 || den == 0 || num > den {
            return Err(ModelError::Parameter(format!("gamma {num}/{den} must lie in (0, 1]")));
        }
        Ok(Ratio { num, den })
    }
}

impl FromStr for Ratio {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::Parameter(format!("cannot parse gamma `{s}` (expected p/r)"));
        let (p, r) = match s.split_once('/') {
            Some((p, r)) => (p.trim(), r.trim()),
            None => (s.trim(), "1"),
        };
        Ratio::new(p.parse().map_err(|_| bad())?, r.parse().map_err(|_| bad())?)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Which complement-side inequality the specified-size global [k]-Roman
/// check uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RomanVariant {
    /// `Σ_{j≥1} (j−1)(s_j − n_j) ≥ k`, unguarded.
    Paper,
    /// The [k]-Roman condition evaluated on the complement neighborhood,
    /// which excludes the vertex itself.
    Strict,
}

/// Built-in problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    KColoring {
        k: u32,
    },
    MaxIndependentSet,
    MinDominatingSet,
    OddDominatingSet,
    KRoman {
        k: u32,
    },
    /// Global [k]-Roman domination with prescribed class sizes `s_0..s_{k+1}`.
    SpecifiedSizeGlobalKRoman {
        k: u32,
        sizes: Vec<u32>,
        variant: RomanVariant,
    },
    /// k-community with prescribed community sizes.
    SpecifiedSizeKCommunity {
        sizes: Vec<u32>,
    },
    /// Proportionally dense subgraph with `|S| = s_in`, containing `required`.
    SpecifiedSizePds {
        s_in: u32,
        required: Vec<String>,
    },
    /// Degree-based γ-quasi-clique with `|S| = s_in`.
    QuasiClique {
        gamma: Ratio,
        s_in: u32,
    },
    /// Generic LCVP problem with per-color weights.
    Lcvp {
        d: DegreeConstraintMatrix,
        weights: Vec<i64>,
        weight_set: WeightSet,
    },
}

fn numbered(from: u32, to: u32) -> Vec<String> {
    (from..=to).map(|i| i.to_string()).collect()
}

fn param(msg: impl Into<String>) -> ModelError {
    ModelError::Parameter(msg.into())
}

fn check_sum(sizes: &[u32], g: &Graph) -> Result<(), ModelError> {
    let sum: u64 = sizes.iter().map(|&s| s as u64).sum();
    if sum != g.vertex_count() as u64 {
        return Err(ModelError::SizesDontSum { sum, expected: g.vertex_count() as u64 });
    }
    Ok(())
}

/// `D` for minimum dominating set: a vertex of color 0 needs at least one
/// neighbor of color 1.
pub(crate) fn domination_matrix() -> DegreeConstraintMatrix {
    DegreeConstraintMatrix::new(vec![
        vec![DegreeSet::all(), DegreeSet::positive()],
        vec![DegreeSet::all(), DegreeSet::all()],
    ])
    .expect("2x2")
}

/// Instantiates a built-in problem on the vertex set of `g`.
pub fn instantiate_builtin(spec: &Builtin, g: &Graph) -> Result<ProblemModel, ModelError> {
    let n = g.vertex_count() as u32;
    match spec {
        Builtin::KColoring { k } => {
            if *k < 1 {
                return Err(param("k-coloring needs k >= 1"));
            }
            ModelBuilder::new(&format!("kcoloring{k}"), g, numbered(1, *k), WeightSet::Decision, Check::KColoring)
                .stable(1)
                .build()
        }
        Builtin::MaxIndependentSet => {
            ModelBuilder::new("mis", g, numbered(0, 1), WeightSet::MaxSum, Check::IndependentSet)
                .weights_by_color(|a| a as i64)
                .stable(1)
                .build()
        }
        Builtin::OddDominatingSet => {
            ModelBuilder::new("odd-ds", g, numbered(0, 1), WeightSet::MinSum, Check::OddDomination)
                .weights_by_color(|a| a as i64)
                .stable(n)
                .build()
        }
        Builtin::MinDominatingSet => {
            let d = domination_matrix();
            let stability = d.stability();
            ModelBuilder::new("mds", g, numbered(0, 1), WeightSet::MinSum, Check::Lcvp(d))
                .weights_by_color(|a| a as i64)
                .stable(stability)
                .build()
        }
        Builtin::KRoman { k } => {
            if *k < 1 {
                return Err(param("[k]-Roman domination needs k >= 1"));
            }
            ModelBuilder::new(&format!("kroman{k}"), g, numbered(0, k + 1), WeightSet::MinSum, Check::KRoman { k: *k })
                .weights_by_color(|a| a as i64)
                .stable(k + 1)
                .build()
        }
        Builtin::SpecifiedSizeGlobalKRoman { k, sizes, variant } => {
            if *k < 1 {
                return Err(param("[k]-Roman domination needs k >= 1"));
            }
            if sizes.len() != *k as usize + 2 {
                return Err(param(format!("expected {} sizes s_0..s_{}", k + 2, k + 1)));
            }
            check_sum(sizes, g)?;
            let check = Check::GlobalKRoman { k: *k, sizes: sizes.clone(), variant: *variant };
            let mut b =
                ModelBuilder::new(&format!("global-kroman{k}"), g, numbered(0, k + 1), WeightSet::MinSum, check)
                    .weights_by_color(|a| a as i64)
                    .stable(n);
            for (a, &s) in sizes.iter().enumerate() {
                b = b.size_constraint(a, CountingAutomaton::exact(s));
            }
            b.build()
        }
        Builtin::SpecifiedSizeKCommunity { sizes } => {
            if sizes.len() < 2 {
                return Err(param("a community structure needs at least 2 communities"));
            }
            if sizes.iter().any(|&s| s < 2) {
                return Err(param("community sizes must be >= 2"));
            }
            check_sum(sizes, g)?;
            let k = sizes.len() as u32;
            let check = Check::Community { sizes: sizes.clone() };
            let mut b =
                ModelBuilder::new(&format!("community{k}"), g, numbered(1, k), WeightSet::Decision, check).stable(n);
            for (a, &s) in sizes.iter().enumerate() {
                b = b.size_constraint(a, CountingAutomaton::exact(s));
            }
            b.build()
        }
        Builtin::SpecifiedSizePds { s_in, required } => {
            if *s_in < 2 || *s_in >= n {
                return Err(param(format!("PDS size {s_in} must satisfy 2 <= |S| < {n}")));
            }
            let check = Check::Pds { s_in: *s_in, s_out: n - s_in };
            let mut b = ModelBuilder::new("pds", g, vec!["S".into(), "Sbar".into()], WeightSet::Decision, check)
                .stable(n)
                .size_constraint(0, CountingAutomaton::exact(*s_in));
            for v in required {
                b = b.list(v, vec![0])?;
            }
            b.build()
        }
        Builtin::QuasiClique { gamma, s_in } => {
            if *s_in < 2 || *s_in > n {
                return Err(param(format!("quasi-clique size {s_in} must satisfy 2 <= |S| <= {n}")));
            }
            let check = Check::QuasiClique { gamma: *gamma, s_in: *s_in };
            ModelBuilder::new("quasi-clique", g, vec!["S".into(), "Sbar".into()], WeightSet::Decision, check)
                .stable(n)
                .size_constraint(0, CountingAutomaton::exact(*s_in))
                .build()
        }
        Builtin::Lcvp { d, weights, weight_set } => {
            if weights.len() != d.q() {
                return Err(param(format!("{} weights for {} colors", weights.len(), d.q())));
            }
            let stability = d.stability();
            let ws = weights.clone();
            ModelBuilder::new("lcvp", g, numbered(0, d.q() as u32 - 1), *weight_set, Check::Lcvp(d.clone()))
                .weights_by_color(move |a| ws[a])
                .stable(stability)
                .build()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkmodel::evaluate_check;
    use crate::graph::{parse_graph, Graph};
    use crate::weights::WeightValue;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..n {
            g.add_vertex(&format!("v{i}")).unwrap();
        }
        for i in 1..n {
            g.add_edge(&format!("v{}", i - 1), &format!("v{i}")).unwrap();
        }
        g
    }

    #[test]
    fn check_examples() {
        let g = path(6);
        let kc = instantiate_builtin(&Builtin::KColoring { k: 3 }, &g).unwrap();
        assert!(evaluate_check(&kc, 0, 1, &[0, 0, 0]));
        assert!(!evaluate_check(&kc, 0, 1, &[0, 1, 0]));
        let mis = instantiate_builtin(&Builtin::MaxIndependentSet, &g).unwrap();
        assert!(!evaluate_check(&mis, 0, 1, &[5, 1]));
        assert!(evaluate_check(&mis, 0, 0, &[5, 1]));
        let odd = instantiate_builtin(&Builtin::OddDominatingSet, &g).unwrap();
        assert!(evaluate_check(&odd, 0, 0, &[2, 1]));
        assert!(!evaluate_check(&odd, 0, 1, &[2, 1]));
    }

    #[test]
    fn kroman_model() {
        let g = path(6);
        let m = instantiate_builtin(&Builtin::KRoman { k: 3 }, &g).unwrap();
        assert_eq!(m.q(), 5);
        assert_eq!(m.weight_set(), WeightSet::MinSum);
        for a in 0..5 {
            assert_eq!(m.weight_of(2, a), WeightValue::Finite(a as i64));
        }
        let m2 = instantiate_builtin(&Builtin::KRoman { k: 2 }, &g).unwrap();
        assert_eq!(m2.stability_cap(), 3);
    }

    #[test]
    fn caps() {
        let g = path(6);
        let cap = |b: Builtin| instantiate_builtin(&b, &g).unwrap().stability_cap();
        assert_eq!(cap(Builtin::KColoring { k: 3 }), 1);
        assert_eq!(cap(Builtin::MaxIndependentSet), 1);
        assert_eq!(cap(Builtin::MinDominatingSet), 1);
        assert_eq!(cap(Builtin::OddDominatingSet), 6);
        assert_eq!(cap(Builtin::SpecifiedSizePds { s_in: 3, required: vec![] }), 6);
        // On a single vertex the cap is clamped to |V|.
        let k1 = parse_graph("v a").unwrap();
        assert_eq!(instantiate_builtin(&Builtin::KRoman { k: 3 }, &k1).unwrap().stability_cap(), 1);
    }

    #[test]
    fn community_on_k4() {
        let k4 = parse_graph("v a\nv b\nv c\nv d\ne a b\ne a c\ne a d\ne b c\ne b d\ne c d").unwrap();
        let m = instantiate_builtin(&Builtin::SpecifiedSizeKCommunity { sizes: vec![2, 2] }, &k4).unwrap();
        assert_eq!(m.weight_set(), WeightSet::Decision);
        assert!((0..4).all(|v| (0..2).all(|a| m.weight_of(v, a) == WeightValue::Finite(0))));
        assert_eq!(m.constrained_colors(), vec![0, 1]);
        // 1/1 >= 2/2
        assert!(evaluate_check(&m, 0, 0, &[1, 2]));
        assert!(!evaluate_check(&m, 0, 0, &[0, 2]));
        assert!(instantiate_builtin(&Builtin::SpecifiedSizeKCommunity { sizes: vec![1, 3] }, &k4).is_err());
        assert!(matches!(
            instantiate_builtin(&Builtin::SpecifiedSizeKCommunity { sizes: vec![2, 3] }, &k4),
            Err(ModelError::SizesDontSum { sum: 5, expected: 4 })
        ));
    }

    #[test]
    fn quasi_clique_cross_multiplied() {
        let g = path(4);
        let m = instantiate_builtin(&Builtin::QuasiClique { gamma: "1/2".parse().unwrap(), s_in: 3 }, &g).unwrap();
        // 2·1 >= 1·(3−1)
        assert!(evaluate_check(&m, 0, 0, &[1, 0]));
        assert!(!evaluate_check(&m, 0, 0, &[0, 3]));
        assert!(evaluate_check(&m, 0, 1, &[0, 3]));
    }

    #[test]
    fn pds_required_vertices_restrict_lists() {
        let g = path(4);
        let m = instantiate_builtin(&Builtin::SpecifiedSizePds { s_in: 2, required: vec!["v1".into()] }, &g).unwrap();
        assert_eq!(m.color_list(1), &[0]);
        assert_eq!(m.color_list(0), &[0, 1]);
        assert!(instantiate_builtin(&Builtin::SpecifiedSizePds { s_in: 4, required: vec![] }, &g).is_err());
        assert!(instantiate_builtin(&Builtin::SpecifiedSizePds { s_in: 2, required: vec!["nope".into()] }, &g).is_err());
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!("1/2".parse::<Ratio>().unwrap(), Ratio { num: 1, den: 2 });
        assert_eq!("1".parse::<Ratio>().unwrap(), Ratio { num: 1, den: 1 });
        assert!("3/2".parse::<Ratio>().is_err());
        assert!("0/2".parse::<Ratio>().is_err());
    }

    fn all_builtins(n: u32) -> Vec<Builtin> {
        let mut out = vec![
            Builtin::KColoring { k: 2 },
            Builtin::KColoring { k: 3 },
            Builtin::MaxIndependentSet,
            Builtin::MinDominatingSet,
            Builtin::OddDominatingSet,
            Builtin::KRoman { k: 1 },
            Builtin::KRoman { k: 2 },
            Builtin::KRoman { k: 3 },
            Builtin::SpecifiedSizePds { s_in: 2, required: vec![] },
            Builtin::QuasiClique { gamma: Ratio { num: 1, den: 2 }, s_in: 3 },
            Builtin::SpecifiedSizeKCommunity { sizes: vec![2, n - 2] },
        ];
        for variant in [RomanVariant::Paper, RomanVariant::Strict] {
            out.push(Builtin::SpecifiedSizeGlobalKRoman { k: 1, sizes: vec![1, 1, n - 2], variant });
        }
        out
    }

    proptest! {
        // Capping counts at 𝒩 never changes the verdict (the defining
        // property of the stability cap).
        #[test]
        fn cap_consistency(n in 4u32..8, v in 0usize..4, raw in proptest::collection::vec(0u32..8, 5)) {
            let g = path(n as usize);
            for spec in all_builtins(n) {
                let m = instantiate_builtin(&spec, &g).unwrap();
                let cap = m.stability_cap();
                let exact: Vec<u32> = raw.iter().take(m.q()).map(|&c| c.min(n)).collect();
                let capped: Vec<u32> = exact.iter().map(|&c| c.min(cap)).collect();
                for a in 0..m.q() {
                    prop_assert_eq!(
                        evaluate_check(&m, v, a, &capped),
                        evaluate_check(&m, v, a, &exact),
                        "{:?} a={} counts={:?}", spec, a, exact
                    );
                }
            }
        }

        #[test]
        fn roman_with_large_value_always_passes(k in 1u32..4, raw in proptest::collection::vec(0u32..6, 5)) {
            let check = Check::KRoman { k };
            let counts: Vec<u32> = raw.into_iter().take(k as usize + 2).collect();
            for a in k as usize..=k as usize + 1 {
                prop_assert!(check.eval(0, a, &counts));
            }
        }
    }
}
