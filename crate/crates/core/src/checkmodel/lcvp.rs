use std::collections::BTreeSet;
use std::fmt;

use super::ModelError;

/// A finite or cofinite set of non-negative integers. Cofinite sets are
/// stored as their finite complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DegreeSet {
    Finite(BTreeSet<u32>),
    Cofinite(BTreeSet<u32>),
}

impl DegreeSet {
    /// ℕ
    pub fn all() -> Self {
        DegreeSet::Cofinite(BTreeSet::new())
    }

    /// {0}
    pub fn zero() -> Self {
        DegreeSet::Finite(BTreeSet::from([0]))
    }

    /// {1, 2, …}
    pub fn positive() -> Self {
        DegreeSet::Cofinite(BTreeSet::from([0]))
    }

    pub fn contains(&self, n: u32) -> bool {
        match self {
            DegreeSet::Finite(s) => s.contains(&n),
            DegreeSet::Cofinite(excluded) => !excluded.contains(&n),
        }
    }

    /// Largest integer written down in the representation, if any.
    pub fn max_mentioned(&self) -> Option<u32> {
        match self {
            DegreeSet::Finite(s) | DegreeSet::Cofinite(s) => s.iter().next_back().copied(),
        }
    }

    fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let list = |body: &str| -> Result<BTreeSet<u32>, String> {
            if body.is_empty() {
                return Ok(BTreeSet::new());
            }
            body.split('|').map(|t| t.trim().parse::<u32>().map_err(|_| format!("bad integer `{t}`"))).collect()
        };
        match s {
            "*" => Ok(DegreeSet::all()),
            "-" => Ok(DegreeSet::Finite(BTreeSet::new())),
            _ => match s.strip_prefix('~') {
                Some(rest) => Ok(DegreeSet::Cofinite(list(rest)?)),
                None => Ok(DegreeSet::Finite(list(s)?)),
            },
        }
    }
}

impl fmt::Display for DegreeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<u32>| s.iter().map(u32::to_string).collect::<Vec<_>>().join("|");
        match self {
            DegreeSet::Cofinite(s) if s.is_empty() => f.write_str("*"),
            DegreeSet::Finite(s) if s.is_empty() => f.write_str("-"),
            DegreeSet::Cofinite(s) => write!(f, "~{}", join(s)),
            DegreeSet::Finite(s) => f.write_str(&join(s)),
        }
    }
}

/// The `q × q` matrix `D`: a vertex of color `a` must have a number of
/// color-`j` neighbors in `D[a][j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeConstraintMatrix {
    entries: Vec<Vec<DegreeSet>>,
}

impl DegreeConstraintMatrix {
    pub fn new(entries: Vec<Vec<DegreeSet>>) -> Result<Self, ModelError> {
        let q = entries.len();
        if q == 0 || entries.iter().any(|row| row.len() != q) {
            return Err(ModelError::Parameter("degree constraint matrix must be square and nonempty".into()));
        }
        Ok(DegreeConstraintMatrix { entries })
    }

    /// Parses `row;row;…` where each row is a comma-separated list of
    /// entries: `*` (all of ℕ), `-` (empty), `0|2|5` (finite list) or
    /// `~0|1` (everything except the list).
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let rows = text
            .split(';')
            .map(|row| row.split(',').map(DegreeSet::parse).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(ModelError::Parameter)?;
        Self::new(rows)
    }

    pub fn q(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, a: usize, j: usize) -> &DegreeSet {
        &self.entries[a][j]
    }

    /// `∀j. n_j ∈ D[a][j]`
    pub fn admits(&self, a: usize, counts: &[u32]) -> bool {
        self.entries[a].iter().zip(counts).all(|(set, &n)| set.contains(n))
    }

    /// `1 + (largest integer mentioned anywhere)`, the stability bound of
    /// the induced check.
    pub fn stability(&self) -> u32 {
        1 + self.entries.iter().flatten().filter_map(DegreeSet::max_mentioned).max().unwrap_or(0)
    }
}

impl fmt::Display for DegreeConstraintMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.entries.iter().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")).collect();
        f.write_str(&rows.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let d = DegreeConstraintMatrix::parse("*,~0; *, *").unwrap();
        assert_eq!(d.q(), 2);
        assert_eq!(d.to_string(), "*,~0;*,*");
        assert!(!d.admits(0, &[3, 0]));
        assert!(d.admits(0, &[3, 1]));
        assert_eq!(d.stability(), 1);
        let d = DegreeConstraintMatrix::parse("0|2,-;*,~1|4").unwrap();
        assert_eq!(d.stability(), 5);
        assert!(DegreeConstraintMatrix::parse("*,*;*").is_err());
        assert!(DegreeConstraintMatrix::parse("x").is_err());
    }

    proptest! {
        #[test]
        fn cofinite_membership_matches_list(list in proptest::collection::btree_set(0u32..20, 0..6)) {
            let co = DegreeSet::Cofinite(list.clone());
            let fin = DegreeSet::Finite(list.clone());
            for n in 0..=30u32 {
                prop_assert_eq!(co.contains(n), !list.iter().any(|&x| x == n));
                prop_assert_eq!(fin.contains(n), list.iter().any(|&x| x == n));
            }
        }
    }
}
