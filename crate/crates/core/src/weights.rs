//! Weight sets: a totally ordered commutative monoid whose maximum element,
//! `Error`, is absorbing.
//!
//! Three concrete sets are supported:
//!
//! * [`WeightSet::MinSum`]: `(ℕ ∪ {+∞}, ≤, +)`, the usual minimization set.
//! * [`WeightSet::MaxSum`]: `(ℕ ∪ {−∞}, ≥, +)`, used for maximization.
//! * [`WeightSet::Decision`]: `({0, 1}, ≤, max)`, where `1` is the maximum and
//!   therefore coincides with `Error`.
//!
//! The dynamic program only ever calls [`WeightSet::combine`] and
//! [`WeightSet::prefer`], so it never needs to know which of the three it is
//! working with.

use std::cmp::Ordering;
use std::fmt;

/// A weight: either a finite integer or the distinguished maximum `Error`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightValue {
    Finite(i64),
    Error,
}

impl WeightValue {
    pub fn is_error(self) -> bool {
        matches!(self, WeightValue::Error)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            WeightValue::Finite(v) => Some(v),
            WeightValue::Error => None,
        }
    }
}

impl From<i64> for WeightValue {
    fn from(v: i64) -> Self {
        WeightValue::Finite(v)
    }
}

impl fmt::Display for WeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightValue::Finite(v) => write!(f, "{v}"),
            WeightValue::Error => f.write_str("INFEASIBLE"),
        }
    }
}

/// Free-function form of [`WeightValue::is_error`].
pub fn is_error(a: WeightValue) -> bool {
    a.is_error()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightSet {
    /// `(ℕ ∪ {+∞}, ≤, +)`
    MinSum,
    /// `(ℕ ∪ {−∞}, ≥, +)`
    MaxSum,
    /// `({0, 1}, ≤, max)`; the value `1` is `Error`.
    Decision,
}

impl WeightSet {
    pub fn name(self) -> &'static str {
        match self {
            WeightSet::MinSum => "min-sum",
            WeightSet::MaxSum => "max-sum",
            WeightSet::Decision => "decision",
        }
    }

    /// Neutral element of `⊛`.
    pub fn neutral(self) -> WeightValue {
        WeightValue::Finite(0)
    }

    /// Maps a finite value into the set. Only relevant for `Decision`, where
    /// every positive value is the maximum.
    pub fn normalize(self, a: WeightValue) -> WeightValue {
        match (self, a) {
            (WeightSet::Decision, WeightValue::Finite(v)) if v >= 1 => WeightValue::Error,
            _ => a,
        }
    }

    /// `a ⊛ b`.
    pub fn combine(self, a: WeightValue, b: WeightValue) -> WeightValue {
        let (x, y) = match (self.normalize(a), self.normalize(b)) {
            (WeightValue::Finite(x), WeightValue::Finite(y)) => (x, y),
            _ => return WeightValue::Error,
        };
        match self {
            WeightSet::MinSum | WeightSet::MaxSum => match x.checked_add(y) {
                Some(s) => WeightValue::Finite(s),
                None => WeightValue::Error,
            },
            WeightSet::Decision => self.normalize(WeightValue::Finite(x.max(y))),
        }
    }

    /// Total order `⪯`. `Error` is the maximum.
    pub fn compare(self, a: WeightValue, b: WeightValue) -> Ordering {
        match (self.normalize(a), self.normalize(b)) {
            (WeightValue::Error, WeightValue::Error) => Ordering::Equal,
            (WeightValue::Error, _) => Ordering::Greater,
            (_, WeightValue::Error) => Ordering::Less,
            (WeightValue::Finite(x), WeightValue::Finite(y)) => match self {
                WeightSet::MaxSum => y.cmp(&x),
                WeightSet::MinSum | WeightSet::Decision => x.cmp(&y),
            },
        }
    }

    /// Minimum under `⪯`. On ties the first argument is returned.
    pub fn prefer(self, a: WeightValue, b: WeightValue) -> WeightValue {
        if self.compare(b, a) == Ordering::Less {
            self.normalize(b)
        } else {
            self.normalize(a)
        }
    }

    /// True iff `a` is strictly better (smaller under `⪯`) than `b`.
    pub fn improves(self, a: WeightValue, b: WeightValue) -> bool {
        self.compare(a, b) == Ordering::Less
    }

    /// `⊛` over an iterator, starting from the neutral element.
    pub fn combine_all<I: IntoIterator<Item = WeightValue>>(self, it: I) -> WeightValue {
        it.into_iter().fold(self.neutral(), |acc, w| self.combine(acc, w))
    }
}
