//! Partitions (Young diagrams), index subsets of `{1..n}`, and the
//! correspondence between them that indexes Schubert classes and Horn
//! inequalities.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A partition: weakly decreasing nonnegative integers.  Trailing zeros are
/// stripped, so two partitions differing by a string of zeros compare equal.
///
/// Serialized as a plain JSON array, e.g. `[5,4,3,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from a weakly decreasing sequence, stripping
    /// trailing zeros.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Canonical parts, without trailing zeros.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The `i`-th part (0-based), zero beyond the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total number of boxes.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Componentwise containment of Young diagrams.
    pub fn contains(&self, other: &Partition) -> bool {
        (0..other.len()).all(|i| self.part(i) >= other.part(i))
    }

    /// Whether the diagram fits in a `rows x cols` rectangle.
    pub fn fits_rectangle(&self, rows: usize, cols: u32) -> bool {
        self.len() <= rows && self.part(0) <= cols
    }

    /// The conjugate (transposed) diagram: `conj_p = #{i : parts_i >= p}`.
    pub fn conjugate(&self) -> Partition {
        let Some(&first) = self.parts.first() else {
            return Partition::empty();
        };
        let parts = (1..=first)
            .map(|p| self.parts.iter().filter(|&&x| x >= p).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Componentwise scaling by `n`.
    pub fn scale(&self, n: u32) -> Partition {
        Partition {
            parts: self.parts.iter().map(|&p| p * n).collect(),
        }
    }

    /// Adds `t` to each of the first `len` rows (rows beyond the current
    /// length count as zero).
    pub fn shift(&self, t: u32, len: usize) -> Partition {
        let mut parts: Vec<u32> = (0..len.max(self.len())).map(|i| self.part(i) + t).collect();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    /// Enumerates every partition of weight `weight` with at most `rows`
    /// parts, each at most `cols`.
    pub fn enumerate_in_rectangle(weight: u64, rows: usize, cols: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut acc = Vec::new();
        fn rec(remaining: u64, max_part: u32, rows_left: usize, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if remaining == 0 {
                out.push(Partition { parts: acc.clone() });
                return;
            }
            if rows_left == 0 || (max_part as u64) * (rows_left as u64) < remaining {
                return;
            }
            let hi = max_part.min(remaining.min(u32::MAX as u64) as u32);
            for p in (1..=hi).rev() {
                acc.push(p);
                rec(remaining - p as u64, p, rows_left - 1, acc, out);
                acc.pop();
            }
        }
        rec(weight, cols, rows, &mut acc, &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

/// A strictly increasing subset of `{1..n}`.  Elements are 1-based, matching
/// the usual indexing of eigenvalues and Schubert conditions.
///
/// Serialized as `{"set":[1,3,5],"n":6}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IndexSetRepr", into = "IndexSetRepr")]
pub struct IndexSet {
    elements: Vec<u32>,
    ambient: u32,
}

#[derive(Serialize, Deserialize)]
struct IndexSetRepr {
    set: Vec<u32>,
    n: u32,
}

impl IndexSet {
    pub fn new(elements: impl Into<Vec<u32>>, ambient: u32) -> Result<Self> {
        let elements = elements.into();
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation(format!(
                "index set must be strictly increasing: {elements:?}"
            )));
        }
        if elements.first().is_some_and(|&e| e < 1)
            || elements.last().is_some_and(|&e| e > ambient)
        {
            return Err(Error::validation(format!(
                "index set {elements:?} out of range 1..={ambient}"
            )));
        }
        Ok(IndexSet { elements, ambient })
    }

    /// The full set `{1..r}` inside ambient `n`.
    pub fn initial(r: u32, n: u32) -> Result<Self> {
        IndexSet::new((1..=r).collect::<Vec<_>>(), n)
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn cardinality(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, i: u32) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn sum(&self) -> u64 {
        self.elements.iter().map(|&e| e as u64).sum()
    }

    /// The reflected complement `I' = {i : n+1-i not in I}`, of cardinality
    /// `n - r`.  The partition of `I'` is the conjugate of the partition of
    /// `I` (within the transposed rectangle).
    pub fn complement(&self) -> IndexSet {
        let n = self.ambient;
        let elements = (1..=n).filter(|&i| !self.contains(n + 1 - i)).collect();
        IndexSet {
            elements,
            ambient: n,
        }
    }

    /// The reflection `{n+1-i : i in I}` (used by the singular-value
    /// transformation, where it is written I').
    pub fn reflect(&self) -> IndexSet {
        let n = self.ambient;
        let mut elements: Vec<u32> = self.elements.iter().map(|&i| n + 1 - i).collect();
        elements.reverse();
        IndexSet {
            elements,
            ambient: n,
        }
    }

    /// Enumerates all cardinality-`r` subsets of `{1..n}` in lexicographic
    /// order.
    pub fn enumerate(r: usize, n: u32) -> Vec<IndexSet> {
        let mut out = Vec::new();
        let mut acc: Vec<u32> = Vec::with_capacity(r);
        fn rec(start: u32, n: u32, r: usize, acc: &mut Vec<u32>, out: &mut Vec<IndexSet>) {
            if acc.len() == r {
                out.push(IndexSet {
                    elements: acc.clone(),
                    ambient: n,
                });
                return;
            }
            let need = (r - acc.len()) as u32;
            for i in start..=(n + 1 - need) {
                acc.push(i);
                rec(i + 1, n, r, acc, out);
                acc.pop();
            }
        }
        if r as u32 <= n {
            rec(1, n, r, &mut acc, &mut out);
        }
        out
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl TryFrom<IndexSetRepr> for IndexSet {
    type Error = Error;
    fn try_from(r: IndexSetRepr) -> Result<Self> {
        IndexSet::new(r.set, r.n)
    }
}

impl From<IndexSet> for IndexSetRepr {
    fn from(s: IndexSet) -> IndexSetRepr {
        IndexSetRepr {
            set: s.elements,
            n: s.ambient,
        }
    }
}

/// The partition corresponding to a subset: `lambda_p = i_{r+1-p} - (r+1-p)`.
/// It fits in the `r x (n-r)` rectangle.
pub fn partition_from_subset(set: &IndexSet) -> Partition {
    let parts: Vec<u32> = set
        .elements()
        .iter()
        .enumerate()
        .rev()
        .map(|(idx, &i)| i - (idx as u32 + 1))
        .collect();
    Partition::new(parts).expect("subset differences are weakly decreasing")
}

/// Inverse of [`partition_from_subset`]: recovers `I` from `lambda` once the
/// cardinality `r` and ambient `n` are specified.  Errors if `lambda` does
/// not fit the `r x (n-r)` rectangle.
pub fn subset_from_partition(lambda: &Partition, r: usize, n: u32) -> Result<IndexSet> {
    if n < r as u32 {
        return Err(Error::domain(format!("cardinality {r} exceeds ambient {n}")));
    }
    if !lambda.fits_rectangle(r, n - r as u32) {
        return Err(Error::domain(format!(
            "partition {lambda} does not fit the {r} x {} rectangle",
            n - r as u32
        )));
    }
    let elements: Vec<u32> = (1..=r as u32)
        .map(|p| lambda.part((r as u32 - p) as usize) + p)
        .collect();
    IndexSet::new(elements, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iset(e: &[u32], n: u32) -> IndexSet {
        IndexSet::new(e.to_vec(), n).unwrap()
    }

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_strips_trailing_zeros() {
        assert_eq!(part(&[2, 1, 0, 0]), part(&[2, 1]));
        assert_eq!(part(&[]).weight(), 0);
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn subset_to_partition_known_triples() {
        // I = {1,3,5} and {2,4,6} give (2,1,0) and (3,2,1).
        assert_eq!(partition_from_subset(&iset(&[1, 3, 5], 6)), part(&[2, 1]));
        assert_eq!(partition_from_subset(&iset(&[2, 4, 6], 6)), part(&[3, 2, 1]));
        assert_eq!(partition_from_subset(&iset(&[1, 2, 3], 6)), Partition::empty());
    }

    #[test]
    fn partition_to_subset_known_triples() {
        assert_eq!(subset_from_partition(&part(&[2, 1]), 3, 6).unwrap(), iset(&[1, 3, 5], 6));
        assert_eq!(subset_from_partition(&part(&[3, 2, 1]), 3, 6).unwrap(), iset(&[2, 4, 6], 6));
        assert_eq!(subset_from_partition(&Partition::empty(), 2, 5).unwrap(), iset(&[1, 2], 5));
        // Rectangle violations are hard errors.
        assert!(subset_from_partition(&part(&[4]), 3, 6).is_err());
        assert!(subset_from_partition(&part(&[1, 1, 1, 1]), 3, 6).is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(part(&[1, 1, 1]).conjugate(), part(&[3]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(part(&[5, 4, 3, 1]).conjugate(), part(&[4, 3, 3, 2, 1]));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(iset(&[1], 2).complement(), iset(&[1], 2));
        assert_eq!(iset(&[1, 2, 3, 4], 4).complement().cardinality(), 0);
        // (3,2,1) is self-conjugate, so {2,4,6} is its own complement.
        assert_eq!(iset(&[2, 4, 6], 6).complement(), iset(&[2, 4, 6], 6));
    }

    #[test]
    fn complement_matches_conjugate_up_to_n8() {
        // lambda(I') = lambda(I)' for every subset with ambient <= 8.
        for n in 1..=8u32 {
            for r in 0..=n as usize {
                for set in IndexSet::enumerate(r, n) {
                    let lhs = partition_from_subset(&set.complement());
                    let rhs = partition_from_subset(&set).conjugate();
                    assert_eq!(lhs, rhs, "I = {set}, n = {n}");
                }
            }
        }
    }

    #[test]
    fn enumerate_rectangle() {
        let all = Partition::enumerate_in_rectangle(3, 2, 3);
        assert_eq!(all.len(), 2); // (3), (2,1)
        assert!(all.contains(&part(&[3])));
        assert!(all.contains(&part(&[2, 1])));
    }

    #[test]
    fn json_round_trip() {
        let p = part(&[5, 4, 3, 1]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[5,4,3,1]");
        let s = iset(&[1, 3, 5], 6);
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"set":[1,3,5],"n":6}"#);
        let back: IndexSet = serde_json::from_str(r#"{"set":[1,3,5],"n":6}"#).unwrap();
        assert_eq!(back, s);
    }

    proptest! {
        #[test]
        fn subset_partition_round_trip(r in 0usize..6, extra in 0u32..6, seed in any::<u64>()) {
            let n = r as u32 + extra;
            let sets = IndexSet::enumerate(r, n);
            prop_assume!(!sets.is_empty());
            let set = &sets[(seed as usize) % sets.len()];
            let lambda = partition_from_subset(set);
            let back = subset_from_partition(&lambda, r, n).unwrap();
            prop_assert_eq!(&back, set);
        }

        #[test]
        fn conjugate_is_weight_preserving_involution(parts in proptest::collection::vec(0u32..8, 0..8)) {
            let mut sorted = parts.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let p = Partition::new(sorted).unwrap();
            let c = p.conjugate();
            prop_assert_eq!(c.weight(), p.weight());
            prop_assert_eq!(c.conjugate(), p);
        }
    }
}
