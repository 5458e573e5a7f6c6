use rustc_hash::FxHashSet;

use crate::checkmodel::ProblemModel;
use crate::cwexpr::{CwExpression, Node, NodeId};

/// Reachable capped count profiles per node. Joins share their child's set.
pub(crate) struct Profiles {
    sets: Vec<Vec<Box<[u16]>>>,
    of: Vec<usize>,
}

impl Profiles {
    pub(crate) fn compute(
        e: &CwExpression,
        m: &ProblemModel,
        vertex_of: &[usize],
        k: usize,
        q: usize,
        cap: u16,
    ) -> Self {
        let kq = k * q;
        let mut sets: Vec<Vec<Box<[u16]>>> = Vec::new();
        let mut of: Vec<usize> = Vec::with_capacity(e.len());
        let finish = |s: FxHashSet<Box<[u16]>>| {
            let mut v: Vec<_> = s.into_iter().collect();
            v.sort_unstable();
            v
        };
        for (id, node) in e.nodes().iter().enumerate() {
            let set = match *node {
                Node::Join { child, .. } => {
                    of.push(of[child]);
                    continue;
                }
                Node::Create { label, .. } => {
                    let row = label as usize - 1;
                    let mut set: Vec<Box<[u16]>> = m
                        .color_list(vertex_of[id])
                        .iter()
                        .map(|&a| {
                            let mut c = vec![0u16; kq];
                            c[row * q + a] = 1;
                            c.into_boxed_slice()
                        })
                        .collect();
                    set.sort_unstable();
                    set
                }
                Node::Union { left, right } => {
                    let mut s = FxHashSet::default();
                    for p1 in &sets[of[left]] {
                        for p2 in &sets[of[right]] {
                            let sum: Box<[u16]> = p1.iter().zip(p2.iter()).map(|(&x, &y)| (x + y).min(cap)).collect();
                            s.insert(sum);
                        }
                    }
                    finish(s)
                }
                Node::Rename { from, to, child } => {
                    let (ri, rj) = (from as usize - 1, to as usize - 1);
                    let s: FxHashSet<Box<[u16]>> = sets[of[child]]
                        .iter()
                        .map(|p| {
                            let mut c = p.clone();
                            for a in 0..q {
                                c[rj * q + a] = (c[rj * q + a] + c[ri * q + a]).min(cap);
                                c[ri * q + a] = 0;
                            }
                            c
                        })
                        .collect();
                    finish(s)
                }
            };
            of.push(sets.len());
            sets.push(set);
        }
        Profiles { sets, of }
    }

    pub(crate) fn at(&self, node: NodeId) -> &[Box<[u16]>] {
        &self.sets[self.of[node]]
    }

    pub(crate) fn contains(&self, node: NodeId, c: &[u16]) -> bool {
        self.at(node).binary_search_by(|p| p[..].cmp(c)).is_ok()
    }

    pub(crate) fn total(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }
}
