//! Edge tables behind the index queries.

use std::cmp::Ordering;

use crate::gnfa::{colex_compare, is_suffix};

/// Distinct non-empty labels in co-lex order. A label's id is its rank.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LabelDictionary {
    labels: Vec<Vec<u8>>,
}

impl LabelDictionary {
    pub fn from_sorted(labels: Vec<Vec<u8>>) -> Self {
        debug_assert!(labels
            .windows(2)
            .all(|w| colex_compare(&w[0], &w[1]) == Ordering::Less));
        LabelDictionary { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, id: usize) -> &[u8] {
        &self.labels[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.labels.iter().map(Vec::as_slice)
    }

    pub fn lookup(&self, label: &[u8]) -> Option<usize> {
        self.labels
            .binary_search_by(|l| colex_compare(l, label))
            .ok()
    }

    /// Smallest id whose label is co-lex `>= s` (`len()` if none).
    pub fn first_at_least(&self, s: &[u8]) -> usize {
        self.labels
            .partition_point(|l| colex_compare(l, s) == Ordering::Less)
    }

    /// Ids of labels having `s` as a suffix, as a half-open range. These are
    /// contiguous in co-lex order and start at the first label `>= s`.
    pub fn suffixed_by(&self, s: &[u8]) -> (usize, usize) {
        let lo = self.first_at_least(s);
        let hi = lo + self.labels[lo..].partition_point(|l| is_suffix(s, l));
        (lo, hi)
    }
}

/// Per label id: ascending sources and ascending targets of its edges.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LabelPostings {
    pub(crate) sources: Vec<Vec<u32>>,
    pub(crate) targets: Vec<Vec<u32>>,
}

impl LabelPostings {
    pub fn multiplicity(&self, id: usize) -> usize {
        self.sources[id].len()
    }

    pub fn sources(&self, id: usize) -> &[u32] {
        &self.sources[id]
    }

    pub fn targets(&self, id: usize) -> &[u32] {
        &self.targets[id]
    }

    /// Edges with this label leaving states `1..=j`.
    #[inline]
    pub fn out_count(&self, id: usize, j: usize) -> usize {
        self.sources[id].partition_point(|&s| s as usize <= j)
    }

    /// Edges with this label entering states `1..=j`.
    #[inline]
    pub fn in_count(&self, id: usize, j: usize) -> usize {
        self.targets[id].partition_point(|&t| t as usize <= j)
    }
}

/// One row per non-empty edge: (label id, target).
pub type Row = (u32, u32);

/// Edges with labels of one length, sorted by (label, target), with the
/// running minimum target from the right.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LengthClass {
    rows: Vec<Row>,
    // suffix_min_target[p] = min target over rows[p..]; u32::MAX past the end
    suffix_min_target: Vec<u32>,
}

impl LengthClass {
    pub fn new(rows: Vec<Row>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0] <= w[1]));
        let mut suffix_min_target = vec![u32::MAX; rows.len() + 1];
        for p in (0..rows.len()).rev() {
            suffix_min_target[p] = suffix_min_target[p + 1].min(rows[p].1);
        }
        LengthClass {
            rows,
            suffix_min_target,
        }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Minimum target over rows whose label id is at least `first_id`.
    #[inline]
    pub fn min_target_from(&self, first_id: usize) -> Option<usize> {
        let p = self.rows.partition_point(|r| (r.0 as usize) < first_id);
        let t = self.suffix_min_target[p];
        (t != u32::MAX).then_some(t as usize)
    }
}

/// Length classes `1..=r`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LengthClassTable {
    pub(crate) classes: Vec<LengthClass>,
}

impl LengthClassTable {
    /// Class for label length `k`, `1 <= k <= r`.
    pub fn class(&self, k: usize) -> &LengthClass {
        &self.classes[k - 1]
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }
}

/// All non-empty edges sorted by (label, target) with range-maximum over
/// targets.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ColexEdgeTable {
    rows: Vec<Row>,
    rmq: SparseMax,
}

impl ColexEdgeTable {
    pub fn new(rows: Vec<Row>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0] <= w[1]));
        let rmq = SparseMax::new(rows.iter().map(|r| r.1).collect());
        ColexEdgeTable { rows, rmq }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Largest target among rows with label id in `lo..hi`, if any.
    pub fn max_target_for_ids(&self, lo: usize, hi: usize) -> Option<usize> {
        let a = self.rows.partition_point(|r| (r.0 as usize) < lo);
        let b = self.rows.partition_point(|r| (r.0 as usize) < hi);
        self.rmq.max(a, b).map(|t| t as usize)
    }
}

/// Sparse table for range maximum in O(1) per query.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct SparseMax {
    levels: Vec<Vec<u32>>,
}

impl SparseMax {
    fn new(base: Vec<u32>) -> Self {
        let mut levels = vec![base];
        let mut width = 1;
        while 2 * width <= levels[0].len() {
            let prev = levels.last().unwrap();
            let next: Vec<u32> = (0..prev.len() - width)
                .map(|i| prev[i].max(prev[i + width]))
                .collect();
            levels.push(next);
            width *= 2;
        }
        SparseMax { levels }
    }

    /// Maximum over `a..b`.
    fn max(&self, a: usize, b: usize) -> Option<u32> {
        if a >= b {
            return None;
        }
        let level = (usize::BITS - 1 - (b - a).leading_zeros()) as usize;
        let row = &self.levels[level];
        Some(row[a].max(row[b - (1 << level)]))
    }
}
