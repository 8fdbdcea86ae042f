//! Integer partitions, skew shapes and the diagram statistics built on them.
//!
//! A [`Partition`] is always stored in canonical form: parts are positive and
//! weakly decreasing, with trailing zeros stripped. The empty partition is a
//! regular value and stands for the empty diagram.
//!
//! The text form is a comma-separated list of parts (`"3,3,2"`); the empty
//! partition is written `""` or `"-"`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts. Trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(invalid(&parts, "parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(&parts, "parts must be weakly decreasing"));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    /// The one-row partition `(n)`; empty for `n = 0`.
    pub fn row(n: usize) -> Self {
        Self::rectangle(usize::from(n > 0), n)
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Self::rectangle(n, 1)
    }

    /// `rows` rows of length `cols`.
    pub fn rectangle(rows: usize, cols: usize) -> Self {
        if rows == 0 || cols == 0 {
            return Partition::empty();
        }
        Partition { parts: vec![cols; rows], size: rows * cols }
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of rows `r(p)`.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Number of columns `c(p)`, i.e. the first part.
    pub fn cols(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn rows_cols(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    /// Part `i` (0-based), zero past the last row.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.cols();
        let mut out = vec![0usize; cols];
        for &p in &self.parts {
            for c in out.iter_mut().take(p) {
                *c += 1;
            }
        }
        Partition { parts: out, size: self.size }
    }

    /// `b(p) = Σ (i−1)·p_i` with rows indexed from 1.
    pub fn b_statistic(&self) -> u64 {
        self.parts.iter().enumerate().map(|(i, &p)| (i * p) as u64).sum()
    }

    /// `inner_i ≤ self_i` for every row.
    pub fn contains(&self, inner: &Partition) -> bool {
        inner.rows() <= self.rows() && inner.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Rows and columns both at most `l·√size`.
    pub fn is_balanced(&self, l: f64) -> bool {
        assert!(l > 0.0, "balancedness constant must be positive");
        let bound = l * (self.size as f64).sqrt();
        self.rows() as f64 <= bound && self.cols() as f64 <= bound
    }

    /// Hook lengths in row-major cell order.
    pub fn hook_lengths(&self) -> Vec<usize> {
        let conj = self.conjugate();
        let mut out = Vec::with_capacity(self.size);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                out.push(row - j + conj.parts[j] - i - 1);
            }
        }
        out
    }

    /// Multiplicity of each hook length; index `h` holds the number of cells with hook `h`.
    ///
    /// Linear in the number of cells without materialising the hook list, which
    /// matters for diagrams with tens of millions of cells.
    pub fn hook_histogram(&self) -> Vec<u64> {
        let conj = self.conjugate();
        let mut hist = vec![0u64; self.rows() + self.cols()];
        for (i, &row) in self.parts.iter().enumerate() {
            for (j, &col) in conj.parts[..row].iter().enumerate() {
                hist[row - j + col - i - 1] += 1;
            }
        }
        hist
    }

    /// Iterates over all partitions of `n` in reverse lexicographic order.
    pub fn all(n: usize) -> PartitionsOf {
        PartitionsOf { next: Some(if n == 0 { Vec::new() } else { vec![n] }) }
    }

    /// All partitions of `k` contained in `self`.
    pub fn sub_partitions(&self, k: usize) -> impl Iterator<Item = Partition> + '_ {
        Partition::all(k).filter(move |mu| self.contains(mu))
    }
}

fn invalid(parts: &[usize], reason: &str) -> Error {
    let input = parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
    Error::InvalidPartition { input, reason: reason.into() }
}

/// Free-function form of [`Partition::contains`].
pub fn contains(outer: &Partition, inner: &Partition) -> bool {
    outer.contains(inner)
}

pub struct PartitionsOf {
    next: Option<Vec<usize>>,
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        let mut parts = current.clone();
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        if let Some(last) = parts.pop() {
            let x = last - 1;
            let mut rest = ones + 1;
            parts.push(x);
            while rest >= x {
                parts.push(x);
                rest -= x;
            }
            if rest > 0 {
                parts.push(rest);
            }
            self.next = Some(parts);
        }
        Some(Partition::from_sorted_unchecked(current))
    }
}

impl fmt::Display for Partition {
    /// `{}` writes `3,3,2` (empty string for ∅); `{:#}` writes `-` for ∅.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() && f.alternate() {
            return f.write_str("-");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Partition::empty());
        }
        let bad = |reason: &str| Error::InvalidPartition { input: s.to_string(), reason: reason.into() };
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad("parts must be positive integers")))
            .collect::<Result<Vec<_>>>()?;
        if parts.contains(&0) {
            return Err(bad("parts must be positive"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(bad("parts must be weakly decreasing"));
        }
        Ok(Partition::from_sorted_unchecked(parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The skew diagram `outer / inner`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains(&inner) {
            return Err(Error::NotContained { outer: outer.to_string(), inner: inner.to_string() });
        }
        Ok(SkewShape { outer, inner })
    }

    /// The straight shape `p / ∅`.
    pub fn straight(p: Partition) -> Self {
        SkewShape { outer: p, inner: Partition::empty() }
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn cells(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// The transposed skew shape `outer′ / inner′`.
    pub fn conjugate(&self) -> SkewShape {
        SkewShape { outer: self.outer.conjugate(), inner: self.inner.conjugate() }
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}/{:#}", self.outer, self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p("").conjugate(), p(""));
        assert_eq!(p("4,2,1").conjugate(), p("3,2,1,1"));
        assert_eq!(p("3,3,2").conjugate(), p("3,3,2"));
    }

    #[test]
    fn b_statistic_examples() {
        assert_eq!(p("").b_statistic(), 0);
        assert_eq!(p("2,1,1").b_statistic(), 3);
        assert_eq!(p("3,1").b_statistic(), 1);
    }

    #[test]
    fn containment() {
        assert!(contains(&p("2,2"), &p("1")));
        assert!(!contains(&p("2,2"), &p("3")));
        assert!(contains(&p("3,1"), &p("")));
        assert!(!contains(&p("2"), &p("1,1")));
    }

    #[test]
    fn rows_and_cols() {
        assert_eq!(p("3,3,2").rows_cols(), (3, 3));
        assert_eq!(p("").rows_cols(), (0, 0));
        assert_eq!(p("5").rows_cols(), (1, 5));
    }

    #[test]
    fn balancedness() {
        assert!(p("2,2").is_balanced(2.0));
        assert!(!p("9").is_balanced(1.0));
        assert!(p("").is_balanced(0.5));
    }

    #[test]
    fn hook_examples() {
        assert_eq!(p("1").hook_lengths(), vec![1]);
        let mut h = p("2,1").hook_lengths();
        h.sort();
        assert_eq!(h, vec![1, 1, 3]);
        assert_eq!(p("3,3,2").hook_lengths(), vec![5, 4, 2, 4, 3, 1, 2, 1]);
    }

    #[test]
    fn hook_histogram_matches_list() {
        for n in 0..=9 {
            for q in Partition::all(n) {
                let mut hist = vec![0u64; q.rows() + q.cols()];
                for h in q.hook_lengths() {
                    hist[h] += 1;
                }
                assert_eq!(q.hook_histogram(), hist, "{q:?}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("-"), Partition::empty());
        assert_eq!(p(" 3, 1 "), Partition::new(vec![3, 1]).unwrap());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert!("-1".parse::<Partition>().is_err());
        assert_eq!(Partition::new(vec![3, 1, 0, 0]).unwrap().to_string(), "3,1");
        assert!(Partition::new(vec![3, 0, 1]).is_err());
        assert_eq!(format!("{:#}", Partition::empty()), "-");
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=12).map(|n| Partition::all(n).count()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]);
        for n in 0..=10 {
            for q in Partition::all(n) {
                assert_eq!(q.size(), n);
            }
        }
    }

    #[test]
    fn skew_shape_validation() {
        assert!(SkewShape::new(p("2"), p("3")).is_err());
        let s = SkewShape::new(p("3,1"), p("2")).unwrap();
        assert_eq!(s.cells(), 2);
        assert_eq!(s.to_string(), "3,1/2");
        assert_eq!(SkewShape::straight(p("2")).to_string(), "2/-");
    }

    #[test]
    fn exhaustive_diagram_identities() {
        for n in 0..=12 {
            for q in Partition::all(n) {
                let c = q.conjugate();
                assert_eq!(c.conjugate(), q);
                let binom: u64 = q.parts().iter().map(|&x| (x * x.saturating_sub(1) / 2) as u64).sum();
                assert_eq!(c.b_statistic(), binom);
                let mut h1 = q.hook_lengths();
                let mut h2 = c.hook_lengths();
                h1.sort();
                h2.sort();
                assert_eq!(h1, h2);
            }
        }
    }
}
