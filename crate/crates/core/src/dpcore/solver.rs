use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::profiles::Profiles;
use super::{CountMatrix, Solution, SolveError, SolveStats, Tracker};
use crate::checkmodel::ProblemModel;
use crate::cwexpr::{validate, CwExpression, Label, Node, NodeId};
use crate::sizedfa::{CountingAutomaton, State, StatePredicate};
use crate::weights::{WeightSet, WeightValue};

// A key is `C ++ N ++ (state, predicate) per tracker`, all as u16.

fn encode(p: StatePredicate) -> u16 {
    match p {
        StatePredicate::Accepting => 0,
        StatePredicate::Never => 1,
        StatePredicate::Equals(s) => s as u16 + 2,
    }
}

fn decode(x: u16) -> StatePredicate {
    match x {
        0 => StatePredicate::Accepting,
        1 => StatePredicate::Never,
        s => StatePredicate::Equals(s as State - 2),
    }
}

/// All `(c₁, c₂)` with `min(cap, c₁ + c₂) = c`, lexicographic.
pub fn split_pairs(c: u16, cap: u16) -> Vec<(u16, u16)> {
    if c < cap {
        (0..=c).map(|x| (x, c - x)).collect()
    } else {
        (0..=cap).flat_map(|x| (cap - x..=cap).map(move |y| (x, y))).collect()
    }
}

/// Whether a row of capped counts can describe a class of `size` vertices.
fn row_feasible(row: &[u16], size: u32, cap: u16) -> bool {
    let sum: u32 = row.iter().map(|&x| x as u32).sum();
    if row.contains(&cap) {
        sum <= size
    } else {
        sum == size
    }
}

/// Rows in `[0, cap]^q` feasible for a class of `size` vertices, ascending.
fn feasible_rows(size: u32, q: usize, cap: u16) -> Vec<Vec<u16>> {
    fn go(prefix: &mut Vec<u16>, q: usize, size: u32, cap: u16, out: &mut Vec<Vec<u16>>) {
        if prefix.len() == q {
            if row_feasible(prefix, size, cap) {
                out.push(prefix.clone());
            }
            return;
        }
        let used: u32 = prefix.iter().map(|&x| x as u32).sum();
        let top = (size.saturating_sub(used)).min(cap as u32) as u16;
        for x in 0..=top {
            prefix.push(x);
            go(prefix, q, size, cap, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(q), q, size, cap, &mut out);
    out
}

/// Calls `f` on every element of the Cartesian product, first list
/// outermost.
fn for_each_product<T: Copy>(lists: &[Vec<T>], mut f: impl FnMut(&[T])) {
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    let mut cur: Vec<T> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                cur[pos] = lists[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            cur[pos] = lists[pos][0];
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    weight: WeightValue,
    choice: u32,
}

const ERROR: Entry = Entry { weight: WeightValue::Error, choice: 0 };

/// Memoized evaluator for one `(model, expression)` pair.
pub struct Solver<'a> {
    model: &'a ProblemModel,
    expr: &'a CwExpression,
    ws: WeightSet,
    k: usize,
    q: usize,
    cap: u16,
    /// Model vertex of each create node.
    vertex_of: Vec<usize>,
    sizes: Vec<Vec<u32>>,
    totals: Vec<u32>,
    tracked: Vec<(usize, &'a CountingAutomaton)>,
    profiles: Option<Profiles>,
    memo: Vec<FxHashMap<Box<[u16]>, Entry>>,
}

impl<'a> Solver<'a> {
    pub fn new(model: &'a ProblemModel, expr: &'a CwExpression, prune: bool) -> Result<Self, SolveError> {
        let report = validate(expr);
        if !report.ok() {
            return Err(SolveError::Invalid(report));
        }
        let index: FxHashMap<&str, usize> = model.vertices().iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut vertex_of = vec![usize::MAX; expr.len()];
        let mut extra = Vec::new();
        let mut seen = BTreeSet::new();
        for (id, node) in expr.nodes().iter().enumerate() {
            if let Node::Create { vertex, .. } = node {
                match index.get(vertex.as_str()) {
                    Some(&v) => {
                        vertex_of[id] = v;
                        seen.insert(v);
                    }
                    None => extra.push(vertex.clone()),
                }
            }
        }
        let missing: Vec<String> =
            (0..model.vertex_count()).filter(|v| !seen.contains(v)).map(|v| model.vertices()[v].clone()).collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(SolveError::VertexMismatch { missing, extra });
        }
        if model.vertex_count() >= 1 << 15 {
            return Err(SolveError::TooLarge(format!("{} vertices", model.vertex_count())));
        }
        let tracked: Vec<(usize, &CountingAutomaton)> =
            model.size_constraints().iter().enumerate().filter_map(|(a, c)| c.as_ref().map(|aut| (a, aut))).collect();
        if let Some((a, _)) = tracked.iter().find(|(_, aut)| aut.state_count() + 2 > u16::MAX as usize) {
            return Err(SolveError::TooLarge(format!("automaton of color {a}")));
        }
        let (k, q) = (expr.k() as usize, model.q());
        let cap = model.stability_cap() as u16;
        let sizes = expr.class_sizes();
        let totals = sizes.iter().map(|s| s.iter().sum()).collect();
        let profiles = prune.then(|| Profiles::compute(expr, model, &vertex_of, k, q, cap));
        Ok(Solver {
            model,
            expr,
            ws: model.weight_set(),
            k,
            q,
            cap,
            vertex_of,
            sizes,
            totals,
            tracked,
            profiles,
            memo: vec![FxHashMap::default(); expr.len()],
        })
    }

    fn kq(&self) -> usize {
        self.k * self.q
    }

    pub fn stats(&self) -> SolveStats {
        SolveStats {
            nodes: self.expr.len(),
            memo_entries: self.memo.iter().map(FxHashMap::len).sum(),
            profiles: self.profiles.as_ref().map_or(0, Profiles::total),
        }
    }

    pub(crate) fn profiles_at(&self, node: NodeId) -> Vec<CountMatrix> {
        let p = self.profiles.as_ref().expect("profiles computed");
        p.at(node).iter().map(|c| CountMatrix::from_cells(self.k, self.q, c)).collect()
    }

    /// `λ(node, C, N, trackers)`; trackers are listed by ascending
    /// constrained color.
    pub fn lambda(&mut self, node: NodeId, c: &CountMatrix, n: &CountMatrix, trackers: &[Tracker]) -> WeightValue {
        assert_eq!((c.k(), c.q()), (self.k, self.q), "C has the wrong shape");
        assert_eq!((n.k(), n.q()), (self.k, self.q), "N has the wrong shape");
        assert_eq!(trackers.len(), self.tracked.len(), "one tracker per constrained color");
        let mut key = Vec::with_capacity(2 * self.kq() + 2 * trackers.len());
        key.extend_from_slice(c.cells());
        key.extend_from_slice(n.cells());
        for t in trackers {
            key.push(t.state as u16);
            key.push(encode(t.pred));
        }
        self.lam(node, key)
    }

    fn is_floor(&self, w: WeightValue) -> bool {
        self.ws == WeightSet::Decision && w == WeightValue::Finite(0)
    }

    /// Rejects keys no coloring can match and canonicalizes the rest:
    /// rows of empty classes must be zero in `C` and are zeroed in `N`.
    fn normalize(&self, node: NodeId, key: &mut [u16]) -> bool {
        let (q, kq, cap) = (self.q, self.kq(), self.cap);
        for (i, &size) in self.sizes[node].iter().enumerate() {
            let row = &key[i * q..(i + 1) * q];
            if row.iter().any(|&x| x > cap) {
                return false;
            }
            if size == 0 {
                if row.iter().any(|&x| x != 0) {
                    return false;
                }
                key[kq + i * q..kq + (i + 1) * q].fill(0);
            } else if !row_feasible(row, size, cap) {
                return false;
            }
        }
        if key[kq..2 * kq].iter().any(|&x| x > cap) {
            return false;
        }
        for (t, &(a, aut)) in self.tracked.iter().enumerate() {
            let s = key[2 * kq + 2 * t] as State;
            if s as usize >= aut.state_count() {
                return false;
            }
            let column = (0..self.k).map(|i| key[i * q + a]);
            if column.clone().all(|x| x < cap) {
                let n: u64 = column.map(u64::from).sum();
                if !aut.holds(decode(key[2 * kq + 2 * t + 1]), aut.power(s, n)) {
                    return false;
                }
            }
        }
        match &self.profiles {
            Some(p) => p.contains(node, &key[..kq]),
            None => true,
        }
    }

    fn lam(&mut self, node: NodeId, mut key: Vec<u16>) -> WeightValue {
        // A join's child key is a function of its own key and the child
        // sees the same classes, so joins are neither normalized nor
        // memoized; long join chains would otherwise dominate the table.
        if let Node::Join { i, j, child } = *self.expr.node(node) {
            let kq = self.kq();
            if key[kq..2 * kq].iter().any(|&x| x > self.cap) {
                return WeightValue::Error;
            }
            self.join_child_key(i, j, &mut key);
            return self.lam(child, key);
        }
        if !self.normalize(node, &mut key) {
            return WeightValue::Error;
        }
        if let Some(e) = self.memo[node].get(&key[..]) {
            return e.weight;
        }
        let entry = match *self.expr.node(node) {
            Node::Create { label, .. } => self.eval_create(node, label, &key),
            Node::Join { .. } => unreachable!("joins are evaluated without memo"),
            Node::Rename { from, to, child } => {
                let cands = self.rename_candidates(from, to, child, &key);
                let mut best = ERROR;
                for (idx, ck) in cands.into_iter().enumerate() {
                    let w = self.lam(child, ck);
                    if self.ws.improves(w, best.weight) {
                        best = Entry { weight: w, choice: idx as u32 };
                        if self.is_floor(w) {
                            break;
                        }
                    }
                }
                best
            }
            Node::Union { left, right } => {
                let cands = self.union_candidates(left, right, &key);
                let mut best = ERROR;
                for (idx, (lk, rk)) in cands.into_iter().enumerate() {
                    let w1 = self.lam(left, lk);
                    if w1.is_error() {
                        continue;
                    }
                    let w = self.ws.combine(w1, self.lam(right, rk));
                    if self.ws.improves(w, best.weight) {
                        best = Entry { weight: w, choice: idx as u32 };
                        if self.is_floor(w) {
                            break;
                        }
                    }
                }
                best
            }
        };
        self.memo[node].insert(key.into_boxed_slice(), entry);
        entry.weight
    }

    fn eval_create(&self, node: NodeId, label: Label, key: &[u16]) -> Entry {
        let (q, kq) = (self.q, self.kq());
        let v = self.vertex_of[node];
        let row = label as usize - 1;
        let c = &key[row * q..(row + 1) * q];
        let mut nonzero = c.iter().enumerate().filter(|(_, &x)| x != 0);
        let a = match (nonzero.next(), nonzero.next()) {
            (Some((a, 1)), None) => a,
            _ => return ERROR,
        };
        if !self.model.allows(v, a) {
            return ERROR;
        }
        let n: Vec<u32> = key[kq + row * q..kq + (row + 1) * q].iter().map(|&x| x as u32).collect();
        if !self.model.check().eval(v, a, &n) {
            return ERROR;
        }
        for (t, &(b, aut)) in self.tracked.iter().enumerate() {
            let s = key[2 * kq + 2 * t] as State;
            let s = if b == a { aut.step(s) } else { s };
            if !aut.holds(decode(key[2 * kq + 2 * t + 1]), s) {
                return ERROR;
            }
        }
        Entry { weight: self.ws.normalize(self.model.weight_of(v, a)), choice: a as u32 }
    }

    /// Turns a join's key into its child's key in place.
    fn join_child_key(&self, i: Label, j: Label, key: &mut [u16]) {
        let (q, kq) = (self.q, self.kq());
        let (ri, rj) = (i as usize - 1, j as usize - 1);
        for a in 0..q {
            key[kq + ri * q + a] = key[kq + ri * q + a].saturating_add(key[rj * q + a]).min(self.cap);
            key[kq + rj * q + a] = key[kq + rj * q + a].saturating_add(key[ri * q + a]).min(self.cap);
        }
    }

    /// Child keys of a rename, ascending by `C_e`.
    fn rename_candidates(&self, from: Label, to: Label, child: NodeId, key: &[u16]) -> Vec<Vec<u16>> {
        let (q, kq, cap) = (self.q, self.kq(), self.cap);
        let (ri, rj) = (from as usize - 1, to as usize - 1);
        if key[ri * q..(ri + 1) * q].iter().any(|&x| x != 0) {
            return Vec::new();
        }
        let mut base = key.to_vec();
        base.copy_within(kq + rj * q..kq + (rj + 1) * q, kq + ri * q);
        let target = &key[rj * q..(rj + 1) * q];
        let mut out = Vec::new();
        match &self.profiles {
            Some(p) => {
                for prof in p.at(child) {
                    let others_match = (0..self.k)
                        .filter(|&h| h != ri && h != rj)
                        .all(|h| prof[h * q..(h + 1) * q] == key[h * q..(h + 1) * q]);
                    let folds = (0..q).all(|a| (prof[ri * q + a] + prof[rj * q + a]).min(cap) == target[a]);
                    if others_match && folds {
                        let mut ck = base.clone();
                        ck[..kq].copy_from_slice(prof);
                        out.push(ck);
                    }
                }
            }
            None => {
                let pairs: Vec<Vec<(u16, u16)>> = target.iter().map(|&t| split_pairs(t, cap)).collect();
                let (si, sj) = (self.sizes[child][ri], self.sizes[child][rj]);
                for_each_product(&pairs, |combo| {
                    let mut ck = base.clone();
                    for (a, &(x, y)) in combo.iter().enumerate() {
                        ck[ri * q + a] = x;
                        ck[rj * q + a] = y;
                    }
                    if row_feasible(&ck[ri * q..(ri + 1) * q], si, cap)
                        && row_feasible(&ck[rj * q..(rj + 1) * q], sj, cap)
                    {
                        out.push(ck);
                    }
                });
                out.sort_unstable();
            }
        }
        out
    }

    /// `(C₁, C₂)` splits with `min(𝒩, C₁ + C₂) = C`, ascending.
    fn count_splits(&self, left: NodeId, right: NodeId, c: &[u16]) -> Vec<(Vec<u16>, Vec<u16>)> {
        let (q, cap) = (self.q, self.cap);
        let mut out = Vec::new();
        match &self.profiles {
            Some(p) => {
                let left_smaller = p.at(left).len() <= p.at(right).len();
                let (small, large) = if left_smaller { (left, right) } else { (right, left) };
                for prof in p.at(small) {
                    let mut other = vec![0u16; c.len()];
                    let mut ranges: Vec<(usize, Vec<u16>)> = Vec::new();
                    let mut ok = true;
                    for (cell, (&total, &x)) in c.iter().zip(prof.iter()).enumerate() {
                        if total < cap {
                            if x > total {
                                ok = false;
                                break;
                            }
                            other[cell] = total - x;
                        } else if x == 0 {
                            other[cell] = cap;
                        } else {
                            ranges.push((cell, (cap - x..=cap).collect()));
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let cells: Vec<usize> = ranges.iter().map(|(cell, _)| *cell).collect();
                    let lists: Vec<Vec<u16>> = ranges.into_iter().map(|(_, r)| r).collect();
                    for_each_product(&lists, |vals| {
                        for (&cell, &v) in cells.iter().zip(vals) {
                            other[cell] = v;
                        }
                        if p.contains(large, &other) {
                            let mine = prof.to_vec();
                            out.push(if left_smaller { (mine, other.clone()) } else { (other.clone(), mine) });
                        }
                    });
                }
            }
            None => {
                let mut rows: Vec<Vec<(&[u16], &[u16])>> = Vec::new();
                let mut storage: Vec<Vec<(Vec<u16>, Vec<u16>)>> = Vec::new();
                for i in 0..self.k {
                    let pairs: Vec<Vec<(u16, u16)>> =
                        c[i * q..(i + 1) * q].iter().map(|&t| split_pairs(t, cap)).collect();
                    let (s1, s2) = (self.sizes[left][i], self.sizes[right][i]);
                    let mut opts = Vec::new();
                    for_each_product(&pairs, |combo| {
                        let r1: Vec<u16> = combo.iter().map(|p| p.0).collect();
                        let r2: Vec<u16> = combo.iter().map(|p| p.1).collect();
                        let ok1 = if s1 == 0 { r1.iter().all(|&x| x == 0) } else { row_feasible(&r1, s1, cap) };
                        let ok2 = if s2 == 0 { r2.iter().all(|&x| x == 0) } else { row_feasible(&r2, s2, cap) };
                        if ok1 && ok2 {
                            opts.push((r1, r2));
                        }
                    });
                    storage.push(opts);
                }
                for opts in &storage {
                    rows.push(opts.iter().map(|(a, b)| (a.as_slice(), b.as_slice())).collect());
                }
                for_each_product(&rows, |combo| {
                    let c1: Vec<u16> = combo.iter().flat_map(|r| r.0.iter().copied()).collect();
                    let c2: Vec<u16> = combo.iter().flat_map(|r| r.1.iter().copied()).collect();
                    out.push((c1, c2));
                });
            }
        }
        out.sort_unstable();
        out
    }

    /// Child key pairs of a union: count splits, then intermediate automaton
    /// states per tracker (left ends in `q`, right starts from `q`).
    fn union_candidates(&self, left: NodeId, right: NodeId, key: &[u16]) -> Vec<(Vec<u16>, Vec<u16>)> {
        let (q, kq, cap) = (self.q, self.kq(), self.cap);
        let splits = self.count_splits(left, right, &key[..kq]);
        if self.tracked.is_empty() {
            return splits
                .into_iter()
                .map(|(c1, c2)| {
                    let mut lk = c1;
                    lk.extend_from_slice(&key[kq..]);
                    let mut rk = c2;
                    rk.extend_from_slice(&key[kq..]);
                    (lk, rk)
                })
                .collect();
        }
        let mut out = Vec::new();
        for (c1, c2) in splits {
            let states: Vec<Vec<u16>> = self
                .tracked
                .iter()
                .enumerate()
                .map(|(t, &(a, aut))| {
                    if self.profiles.is_none() {
                        return (0..aut.state_count() as u16).collect();
                    }
                    let s = key[2 * kq + 2 * t] as State;
                    let column = (0..self.k).map(|i| c1[i * q + a]);
                    let lb: u64 = column.clone().map(u64::from).sum();
                    let ub = if column.clone().all(|x| x < cap) { lb } else { (self.totals[left] as u64).max(lb) };
                    let mut v: Vec<u16> = (lb..=ub).map(|n| aut.power(s, n) as u16).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                })
                .collect();
            for_each_product(&states, |mid| {
                let mut lk = c1.clone();
                lk.extend_from_slice(&key[kq..2 * kq]);
                let mut rk = c2.clone();
                rk.extend_from_slice(&key[kq..2 * kq]);
                for (t, &m) in mid.iter().enumerate() {
                    lk.push(key[2 * kq + 2 * t]);
                    lk.push(encode(StatePredicate::Equals(m as State)));
                    rk.push(m);
                    rk.push(key[2 * kq + 2 * t + 1]);
                }
                out.push((lk, rk));
            });
        }
        out
    }

    /// Root matrices: profiles (or every row-consistent matrix) with zero
    /// rows on unused labels, ascending.
    fn root_candidates(&self) -> Vec<Vec<u16>> {
        let root = self.expr.root();
        if let Some(p) = &self.profiles {
            return p.at(root).iter().map(|c| c.to_vec()).collect();
        }
        let rows: Vec<Vec<Vec<u16>>> = self.sizes[root].iter().map(|&s| feasible_rows(s, self.q, self.cap)).collect();
        let refs: Vec<Vec<&[u16]>> = rows.iter().map(|r| r.iter().map(Vec::as_slice).collect()).collect();
        let mut out = Vec::new();
        for_each_product(&refs, |combo| out.push(combo.concat()));
        out
    }

    /// Minimum over root matrices of `λ(root, C, N₀, (q₀, ∈_F)…)`.
    pub fn solve(&mut self, want_coloring: bool) -> Solution {
        let root = self.expr.root();
        let kq = self.kq();
        let mut best: Option<(WeightValue, Vec<u16>)> = None;
        for c in self.root_candidates() {
            let mut key = c;
            key.resize(2 * kq, 0);
            for &(_, aut) in &self.tracked {
                key.push(aut.start() as u16);
                key.push(encode(StatePredicate::Accepting));
            }
            let w = self.lam(root, key.clone());
            if best.as_ref().map_or(!w.is_error(), |(b, _)| self.ws.improves(w, *b)) {
                let floor = self.is_floor(w);
                best = Some((w, key));
                if floor {
                    break;
                }
            }
        }
        let weight = best.as_ref().map_or(WeightValue::Error, |(w, _)| *w);
        let coloring = match (want_coloring, best) {
            (true, Some((_, key))) => {
                let mut out = vec![usize::MAX; self.model.vertex_count()];
                self.reconstruct(root, key, &mut out);
                Some(out)
            }
            _ => None,
        };
        Solution { weight, coloring, stats: self.stats() }
    }

    /// Follows stored choices from a non-Error entry down to the leaves.
    fn reconstruct(&self, node: NodeId, mut key: Vec<u16>, out: &mut [usize]) {
        if let Node::Join { i, j, child } = *self.expr.node(node) {
            self.join_child_key(i, j, &mut key);
            return self.reconstruct(child, key, out);
        }
        let ok = self.normalize(node, &mut key);
        let entry = self.memo[node]
            .get(&key[..])
            .filter(|e| ok && !e.weight.is_error())
            .copied()
            .expect("reconstruction reached a key without a feasible entry");
        match *self.expr.node(node) {
            Node::Create { .. } => out[self.vertex_of[node]] = entry.choice as usize,
            Node::Join { .. } => unreachable!("handled above"),
            Node::Rename { from, to, child } => {
                let ck = self.rename_candidates(from, to, child, &key).swap_remove(entry.choice as usize);
                self.reconstruct(child, ck, out);
            }
            Node::Union { left, right } => {
                let (lk, rk) = self.union_candidates(left, right, &key).swap_remove(entry.choice as usize);
                self.reconstruct(left, lk, out);
                self.reconstruct(right, rk, out);
            }
        }
    }
}
