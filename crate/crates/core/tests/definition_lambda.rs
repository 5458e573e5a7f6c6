//! `Solver::lambda` against a brute-force evaluation of its definition: the
//! best coloring of the subtree's graph whose capped label×color counts are
//! exactly `C`, whose checks pass with `N[label]` extra neighbors, and whose
//! constrained classes drive each tracker into its predicate. Neighbor
//! counts seen by the check are capped like every other count.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cwcolor::cwexpr::{ExprBuilder, Node, NodeId};
use cwcolor::sizedfa::predicate_holds;
use cwcolor::{
    build_family, connected_graphs, instantiate_builtin, trivial_expression, Builtin, CountMatrix, CwExpression,
    Family, Graph, ProblemModel, Solver, StatePredicate, Tracker, WeightValue,
};

/// The subtree rooted at `id` as an expression of its own.
fn subtree(e: &CwExpression, id: NodeId) -> CwExpression {
    fn copy(e: &CwExpression, id: NodeId, b: &mut ExprBuilder) -> NodeId {
        match e.node(id).clone() {
            Node::Create { vertex, label } => b.create(vertex, label),
            Node::Union { left, right } => {
                let l = copy(e, left, b);
                let r = copy(e, right, b);
                b.union(l, r)
            }
            Node::Join { i, j, child } => {
                let c = copy(e, child, b);
                b.join(i, j, c)
            }
            Node::Rename { from, to, child } => {
                let c = copy(e, child, b);
                b.rename(from, to, c)
            }
        }
    }
    let mut b = ExprBuilder::new();
    copy(e, id, &mut b);
    b.finish(Some(e.k())).expect("subtree is well formed")
}

struct Instance {
    model: ProblemModel,
    expr: CwExpression,
}

fn instances() -> Vec<Instance> {
    let mut exprs: Vec<CwExpression> =
        (1..=4).flat_map(connected_graphs).map(|g| trivial_expression(&g).expect("trivial")).collect();
    for n in 1..=5 {
        exprs.push(build_family(Family::Path, n, None).unwrap());
    }
    for n in 3..=5 {
        exprs.push(build_family(Family::Cycle, n, None).unwrap());
    }
    exprs.push(build_family(Family::CompleteBipartite, 2, Some(2)).unwrap());
    let mut out = vec![];
    for expr in exprs {
        let (g, _) = expr.realize();
        let n = g.vertex_count() as u32;
        let mut specs = vec![
            Builtin::MaxIndependentSet,
            Builtin::MinDominatingSet,
            Builtin::OddDominatingSet,
            Builtin::KColoring { k: 3 },
            Builtin::KRoman { k: 2 },
        ];
        if n == 4 {
            specs.push(Builtin::SpecifiedSizeKCommunity { sizes: vec![2, 2] });
        }
        if n >= 3 {
            specs.push(Builtin::SpecifiedSizePds { s_in: 2, required: vec![] });
            specs.push(Builtin::QuasiClique { gamma: cwcolor::Ratio::new(1, 2).unwrap(), s_in: n - 1 });
        }
        for spec in specs {
            let model = instantiate_builtin(&spec, &g).expect("model");
            out.push(Instance { model, expr: expr.clone() });
        }
    }
    out
}

/// Brute force over colorings of the subtree graph.
fn by_definition(
    m: &ProblemModel,
    sub: &CwExpression,
    c: &CountMatrix,
    n: &CountMatrix,
    trackers: &[Tracker],
) -> WeightValue {
    let (g, labels): (Graph, _) = sub.realize();
    let ws = m.weight_set();
    let cap = m.stability_cap();
    let q = m.q();
    let index: Vec<usize> = g.names().iter().map(|v| m.vertices().iter().position(|u| u == v).unwrap()).collect();
    let label: Vec<usize> = g.names().iter().map(|v| labels.label(v).unwrap() as usize - 1).collect();
    let constrained = m.constrained_colors();
    let lists: Vec<&[usize]> = index.iter().map(|&v| m.color_list(v)).collect();
    let mut best = WeightValue::Error;
    let mut coloring = vec![0usize; g.vertex_count()];
    let total: usize = lists.iter().map(|l| l.len()).product();
    for mut code in 0..total {
        for (slot, list) in coloring.iter_mut().zip(&lists) {
            *slot = list[code % list.len()];
            code /= list.len();
        }
        let mut counts = CountMatrix::zeros(c.k(), q);
        for (v, &a) in coloring.iter().enumerate() {
            let x = counts.get(label[v], a);
            counts.set(label[v], a, (x + 1).min(cap));
        }
        if &counts != c {
            continue;
        }
        let checks = (0..g.vertex_count()).all(|v| {
            let mut around: Vec<u32> = n.row(label[v]);
            for u in g.neighbor_indices(v) {
                around[coloring[u]] += 1;
            }
            around.iter_mut().for_each(|x| *x = (*x).min(cap));
            m.check().eval(index[v], coloring[v], &around)
        });
        if !checks {
            continue;
        }
        let sizes_ok = constrained.iter().zip(trackers).all(|(&a, t)| {
            let aut = m.size_constraints()[a].as_ref().unwrap();
            let size = coloring.iter().filter(|&&b| b == a).count() as u64;
            predicate_holds(aut, t.pred, aut.power(t.state, size))
        });
        if !sizes_ok {
            continue;
        }
        let w = ws.combine_all(coloring.iter().zip(&index).map(|(&a, &v)| m.weight_of(v, a)));
        best = ws.prefer(best, w);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn lambda_matches_definition(pick in any::<u64>(), seed in any::<u64>(), prune in any::<bool>()) {
        let all = instances();
        let inst = &all[(pick % all.len() as u64) as usize];
        let (m, e) = (&inst.model, &inst.expr);
        let mut rng = StdRng::seed_from_u64(seed);
        let node = rng.random_range(0..e.len());
        let sub = subtree(e, node);
        let (g, labels) = sub.realize();
        let cap = m.stability_cap();
        let (k, q) = (e.k() as usize, m.q());

        // Half the time C comes from an actual coloring, so feasible keys
        // are exercised and not only rejections.
        let mut c = CountMatrix::zeros(k, q);
        if rng.random_bool(0.5) {
            for v in g.names() {
                let list = m.color_list(m.vertices().iter().position(|u| u == v).unwrap());
                let a = list[rng.random_range(0..list.len())];
                let row = labels.label(v).unwrap() as usize - 1;
                let x = c.get(row, a);
                c.set(row, a, (x + 1).min(cap));
            }
        } else {
            for i in 0..k {
                for a in 0..q {
                    c.set(i, a, rng.random_range(0..=cap.min(2)));
                }
            }
        }
        let mut n = CountMatrix::zeros(k, q);
        for i in 0..k {
            for a in 0..q {
                if rng.random_bool(0.3) {
                    n.set(i, a, rng.random_range(0..=cap));
                }
            }
        }
        let trackers: Vec<Tracker> = m
            .constrained_colors()
            .iter()
            .map(|&a| {
                let aut = m.size_constraints()[a].as_ref().unwrap();
                let states = aut.state_count() as u32;
                let state = rng.random_range(0..states);
                let pred = match rng.random_range(0..4) {
                    0 => StatePredicate::Equals(rng.random_range(0..states)),
                    1 => StatePredicate::Never,
                    _ => StatePredicate::Accepting,
                };
                Tracker { state, pred }
            })
            .collect();

        let mut solver = Solver::new(m, e, prune).unwrap();
        let got = solver.lambda(node, &c, &n, &trackers);
        let want = by_definition(m, &sub, &c, &n, &trackers);
        prop_assert_eq!(got, want, "{} at node {} ({:?}) C=[{}] N=[{}] trackers={:?}",
            m.name(), node, e.node(node).kind(), c, n, trackers);
    }
}
