//! Expressions for standard graph families.
//!
//! Every constructor emits irredundant expressions in which renames only
//! target nonempty classes.

use super::{CwExpression, ExprBuilder, ExprError, Label, NodeId};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `P_n` on `v1..vn`, k = 3.
    Path,
    /// `C_n` on `v1..vn`, k = 4 (`n = 3` is built as `K_3`).
    Cycle,
    /// `K_n` on `v1..vn`, k = 2.
    Complete,
    /// `K_{m,n}` on `a1..am` and `b1..bn`, k = 2.
    CompleteBipartite,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Complete => "complete",
            Family::CompleteBipartite => "complete_bipartite",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        match s {
            "path" => Some(Family::Path),
            "cycle" => Some(Family::Cycle),
            "complete" => Some(Family::Complete),
            "complete_bipartite" | "complete-bipartite" | "biclique" => Some(Family::CompleteBipartite),
            _ => None,
        }
    }
}

fn vname(i: usize) -> String {
    format!("v{i}")
}

/// Appends `v_from..=v_to` to a path whose last vertex carries label `tail`.
/// Labels rotate over `{1, 2, 3}`: one for the tail, one for retired
/// vertices, one for the newcomer. `retired` is `None` until some vertex has
/// been retired, so renames never target an empty class.
fn extend_path(
    b: &mut ExprBuilder,
    mut acc: NodeId,
    mut tail: Label,
    mut retired: Option<Label>,
    from: usize,
    to: usize,
) -> (NodeId, Label) {
    for idx in from..=to {
        let fresh = (1..=3).find(|&l| l != tail && Some(l) != retired).expect("three labels leave one free");
        let leaf = b.create(vname(idx), fresh);
        acc = b.union(acc, leaf);
        acc = b.join(tail, fresh, acc);
        match retired {
            Some(r) => acc = b.rename(tail, r, acc),
            None => retired = Some(tail),
        }
        tail = fresh;
    }
    (acc, tail)
}

/// Builds an expression for `family` with size `n` (and `m` for the second
/// side of a complete bipartite graph).
pub fn build_family(family: Family, n: usize, m: Option<usize>) -> Result<CwExpression, ExprError> {
    let too_small = |size| Err(ExprError::FamilySize { family: family.name(), size });
    let mut b = ExprBuilder::new();
    match family {
        Family::Path => {
            if n < 1 {
                return too_small(n);
            }
            let first = b.create(vname(1), 1);
            extend_path(&mut b, first, 1, None, 2, n);
            b.finish(Some(3))
        }
        Family::Cycle => {
            if n < 3 {
                return too_small(n);
            }
            if n == 3 {
                return build_family(Family::Complete, 3, None);
            }
            // v1 keeps label 4 until the closing join.
            let anchor = b.create(vname(1), 4);
            let second = b.create(vname(2), 1);
            let mut acc = b.union(anchor, second);
            acc = b.join(4, 1, acc);
            let (acc, tail) = extend_path(&mut b, acc, 1, None, 3, n);
            b.join(tail, 4, acc);
            b.finish(Some(4))
        }
        Family::Complete => {
            if n < 1 {
                return too_small(n);
            }
            let mut acc = b.create(vname(1), 1);
            for idx in 2..=n {
                let leaf = b.create(vname(idx), 2);
                acc = b.union(acc, leaf);
                acc = b.join(1, 2, acc);
                acc = b.rename(2, 1, acc);
            }
            b.finish(Some(2))
        }
        Family::CompleteBipartite => {
            let m_side = m.unwrap_or(0);
            if n < 1 {
                return too_small(n);
            }
            if m_side < 1 {
                return too_small(m_side);
            }
            let mut acc = b.create("a1", 1);
            for idx in 2..=n {
                let leaf = b.create(format!("a{idx}"), 1);
                acc = b.union(acc, leaf);
            }
            for idx in 1..=m_side {
                let leaf = b.create(format!("b{idx}"), 2);
                acc = b.union(acc, leaf);
            }
            b.join(1, 2, acc);
            b.finish(Some(2))
        }
    }
}

/// The `|V|`-label expression: every vertex gets its own label (declaration
/// order), all vertices are unioned, then one join per edge.
pub fn trivial_expression(g: &Graph) -> Result<CwExpression, ExprError> {
    let mut b = ExprBuilder::new();
    let mut acc: Option<NodeId> = None;
    for v in 0..g.vertex_count() {
        let leaf = b.create(g.name(v), v as Label + 1);
        acc = Some(match acc {
            None => leaf,
            Some(a) => b.union(a, leaf),
        });
    }
    let mut acc = acc.ok_or(ExprError::Empty)?;
    for (u, v) in g.edges() {
        acc = b.join(u as Label + 1, v as Label + 1, acc);
    }
    b.finish(Some(g.vertex_count() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cwexpr::{validate, Node};

    pub(crate) fn path_graph(n: usize) -> Graph {
        let mut g = Graph::new();
        for i in 1..=n {
            g.add_vertex(&vname(i)).unwrap();
        }
        for i in 1..n {
            g.add_edge(&vname(i), &vname(i + 1)).unwrap();
        }
        g
    }

    fn cycle_graph(n: usize) -> Graph {
        let mut g = path_graph(n);
        g.add_edge(&vname(n), &vname(1)).unwrap();
        g
    }

    fn complete_graph(n: usize) -> Graph {
        let mut g = path_graph(n);
        for i in 1..=n {
            for j in i + 1..=n {
                g.add_edge(&vname(i), &vname(j)).unwrap();
            }
        }
        g
    }

    fn biclique(n: usize, m: usize) -> Graph {
        let mut g = Graph::new();
        for i in 1..=n {
            g.add_vertex(&format!("a{i}")).unwrap();
        }
        for j in 1..=m {
            g.add_vertex(&format!("b{j}")).unwrap();
        }
        for i in 1..=n {
            for j in 1..=m {
                g.add_edge(&format!("a{i}"), &format!("b{j}")).unwrap();
            }
        }
        g
    }

    fn assert_good(e: &CwExpression, target: &Graph, k: u32) {
        let r = validate(e);
        assert!(r.ok(), "{r:?}\n{}", e.to_sexpr());
        assert!(r.warnings.is_empty(), "{r:?}");
        assert!(e.check_realizes(target), "{}", e.to_sexpr());
        assert_eq!(e.k(), k);
    }

    #[test]
    fn families_validate_and_realize() {
        for n in 1..=12 {
            assert_good(&build_family(Family::Path, n, None).unwrap(), &path_graph(n), 3);
            assert_good(&build_family(Family::Complete, n, None).unwrap(), &complete_graph(n), 2);
            for m in 1..=4 {
                assert_good(&build_family(Family::CompleteBipartite, n, Some(m)).unwrap(), &biclique(n, m), 2);
            }
        }
        for n in 4..=12 {
            assert_good(&build_family(Family::Cycle, n, None).unwrap(), &cycle_graph(n), 4);
        }
        assert!(build_family(Family::Cycle, 3, None).unwrap().check_realizes(&complete_graph(3)));
    }

    #[test]
    fn size_errors() {
        assert!(build_family(Family::Path, 0, None).is_err());
        assert!(build_family(Family::Cycle, 2, None).is_err());
        assert!(build_family(Family::CompleteBipartite, 2, None).is_err());
    }

    #[test]
    fn path_two_is_k2() {
        let e = build_family(Family::Path, 2, None).unwrap();
        assert_eq!(e.realize().0.edge_count(), 1);
    }

    #[test]
    fn trivial_p4_shape() {
        let e = trivial_expression(&path_graph(4)).unwrap();
        let count = |kind: &str| e.nodes().iter().filter(|n| n.kind() == kind).count();
        assert_eq!((count("node"), count("union"), count("join")), (4, 3, 3));
        assert_eq!(e.k(), 4);
        assert!(matches!(e.node(e.root()), Node::Join { .. }));
        assert_good(&e, &path_graph(4), 4);
    }
}
