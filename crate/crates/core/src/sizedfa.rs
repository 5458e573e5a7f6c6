//! Unary counting automata used to constrain the size of a color class.

use std::collections::BTreeSet;

pub type State = u32;

/// Deterministic automaton over the unary alphabet `{1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountingAutomaton {
    delta: Vec<State>,
    start: State,
    accepting: BTreeSet<State>,
}

impl CountingAutomaton {
    /// Builds an automaton from an explicit transition table.
    ///
    /// Panics if a transition, the start state or an accepting state is out
    /// of range.
    pub fn new(delta: Vec<State>, start: State, accepting: BTreeSet<State>) -> Self {
        let n = delta.len() as State;
        assert!(n > 0, "automaton needs at least one state");
        assert!(delta.iter().all(|&s| s < n), "transition out of range");
        assert!(start < n, "start state out of range");
        assert!(accepting.iter().all(|&s| s < n), "accepting state out of range");
        CountingAutomaton { delta, start, accepting }
    }

    /// Chain automaton `s_0 → s_1 → … → s_{m+1} ↺` accepting exactly the
    /// lengths in `sizes`, where `m = max(sizes)`. An empty set yields a
    /// one-state automaton that rejects everything.
    pub fn from_finite_set(sizes: &BTreeSet<u32>) -> Self {
        let Some(&m) = sizes.iter().next_back() else {
            return CountingAutomaton::new(vec![0], 0, BTreeSet::new());
        };
        let states = m + 2;
        let delta = (0..states).map(|s| (s + 1).min(states - 1)).collect();
        CountingAutomaton::new(delta, 0, sizes.clone())
    }

    /// Accepts exactly the single length `size`.
    pub fn exact(size: u32) -> Self {
        Self::from_finite_set(&BTreeSet::from([size]))
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<State> {
        &self.accepting
    }

    pub fn step(&self, s: State) -> State {
        self.delta[s as usize]
    }

    /// `δⁿ(s)`. Iteration stops early once a fixed point is reached.
    pub fn power(&self, mut s: State, n: u64) -> State {
        for _ in 0..n {
            let next = self.step(s);
            if next == s {
                break;
            }
            s = next;
        }
        s
    }

    pub fn accepts_length(&self, n: u64) -> bool {
        self.accepting.contains(&self.power(self.start, n))
    }

    /// `∈_F`
    pub fn accepting_predicate(&self) -> StatePredicate {
        StatePredicate::Accepting
    }

    pub fn holds(&self, p: StatePredicate, s: State) -> bool {
        match p {
            StatePredicate::Accepting => self.accepting.contains(&s),
            StatePredicate::Equals(q) => s == q,
            StatePredicate::Never => false,
        }
    }
}

/// Shorthand for [`CountingAutomaton::from_finite_set`].
pub fn dfa_from_finite_set(sizes: &BTreeSet<u32>) -> CountingAutomaton {
    CountingAutomaton::from_finite_set(sizes)
}

/// A set of states, in the only shapes the DP ever produces: the accepting
/// set `F`, or a singleton `{q}`. `Never` is the empty predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatePredicate {
    Accepting,
    Equals(State),
    Never,
}

/// Membership test of `s` in `p` for automaton `a`.
pub fn predicate_holds(a: &CountingAutomaton, p: StatePredicate, s: State) -> bool {
    a.holds(p, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_two() {
        let a = CountingAutomaton::exact(2);
        assert_eq!(a.state_count(), 4);
        assert_eq!(a.power(0, 2), 2);
        assert!(a.holds(StatePredicate::Accepting, a.power(0, 2)));
        assert_eq!(a.power(0, 3), 3);
        assert!(!a.holds(StatePredicate::Accepting, a.power(0, 3)));
        assert_eq!(a.power(0, 0), 0);
        assert_eq!(a.power(0, 5), 3);
        assert_eq!(a.power(a.power(0, 1), 1), a.power(0, 2));
    }

    #[test]
    fn empty_and_zero_sets() {
        let none = dfa_from_finite_set(&BTreeSet::new());
        assert!((0..10).all(|n| !none.accepts_length(n)));
        let zero = dfa_from_finite_set(&BTreeSet::from([0]));
        assert!(zero.accepts_length(0));
        assert!(!zero.accepts_length(1));
    }

    #[test]
    fn predicates() {
        let a = CountingAutomaton::exact(2);
        assert!(predicate_holds(&a, a.accepting_predicate(), 2));
        assert!(!predicate_holds(&a, StatePredicate::Equals(1), 2));
        assert!((0..4).all(|s| !predicate_holds(&a, StatePredicate::Never, s)));
    }

    proptest! {
        #[test]
        fn accepts_exactly_the_set(sizes in proptest::collection::btree_set(0u32..8, 0..4)) {
            let a = dfa_from_finite_set(&sizes);
            let top = sizes.iter().next_back().copied().unwrap_or(0);
            for t in 0..=top + 3 {
                prop_assert_eq!(a.accepts_length(t as u64), sizes.contains(&t));
            }
        }

        #[test]
        fn power_composes(sizes in proptest::collection::btree_set(0u32..6, 1..3), m in 0u64..16, n in 0u64..16) {
            let a = dfa_from_finite_set(&sizes);
            let bound = 2 * a.state_count() as u64;
            prop_assume!(m <= bound && n <= bound);
            for s in 0..a.state_count() as State {
                prop_assert_eq!(a.power(s, m + n), a.power(a.power(s, m), n));
            }
        }
    }
}
