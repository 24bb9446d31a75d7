//! The immutable query structure.
//!
//! Built from a validated automaton, optionally over its sentinel
//! augmentation. All query positions refer to the numbering of the automaton
//! the index was built over (the augmented one in sentinel mode).

mod format;
mod tables;

use thiserror::Error;

pub use format::FormatError;
pub use tables::{ColexEdgeTable, LabelDictionary, LabelPostings, LengthClass, LengthClassTable};

use crate::bits::RankSelectBits;
use crate::closure::{build_closure_arrays, build_marker_bits, ClosureError};
use crate::gnfa::{
    augment_with_sentinel, colex_compare, AutomatonSummary, GeneralizedAutomaton, ModelError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("automaton too large for 32-bit state indices")]
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelerIndex {
    pub(crate) summary: AutomatonSummary,
    pub(crate) sentinel_mode: bool,
    pub(crate) finals: RankSelectBits,
    pub(crate) b_max: RankSelectBits,
    pub(crate) b_min: RankSelectBits,
    pub(crate) dictionary: LabelDictionary,
    pub(crate) postings: LabelPostings,
    pub(crate) length_tables: LengthClassTable,
    pub(crate) colex_table: ColexEdgeTable,
}

impl WheelerIndex {
    /// Builds the index. With `with_sentinel`, the automaton is first
    /// augmented with a sentinel initial state so acceptance can be decided.
    pub fn build(a: &GeneralizedAutomaton, with_sentinel: bool) -> Result<Self, IndexError> {
        let augmented;
        let a = if with_sentinel {
            augmented = augment_with_sentinel(a)?;
            &augmented
        } else {
            a
        };
        if a.state_count() >= u32::MAX as usize || a.edges().len() >= u32::MAX as usize {
            return Err(IndexError::TooLarge);
        }
        let closure = build_closure_arrays(a)?;
        let markers = build_marker_bits(&closure);
        let n = a.state_count();

        let mut finals = vec![false; n + 1];
        for &f in a.finals() {
            finals[f] = true;
        }

        let mut labels: Vec<Vec<u8>> = a
            .edges()
            .iter()
            .filter(|e| !e.label.is_epsilon())
            .map(|e| e.label.as_bytes().to_vec())
            .collect();
        labels.sort_by(|x, y| colex_compare(x, y));
        labels.dedup();
        let dictionary = LabelDictionary::from_sorted(labels);

        let mut postings = LabelPostings {
            sources: vec![Vec::new(); dictionary.len()],
            targets: vec![Vec::new(); dictionary.len()],
        };
        for e in a.edges().iter().filter(|e| !e.label.is_epsilon()) {
            let id = dictionary.lookup(e.label.as_bytes()).expect("label interned");
            postings.sources[id].push(e.source as u32);
            postings.targets[id].push(e.target as u32);
        }
        for v in postings.sources.iter_mut().chain(postings.targets.iter_mut()) {
            v.sort_unstable();
        }

        let (length_tables, colex_table) = edge_tables(&dictionary, &postings, a.r());
        Ok(WheelerIndex {
            summary: a.summary(),
            sentinel_mode: with_sentinel,
            finals: RankSelectBits::from_one_based(&finals),
            b_max: RankSelectBits::from_one_based(&markers.b_max),
            b_min: RankSelectBits::from_one_based(&markers.b_min),
            dictionary,
            postings,
            length_tables,
            colex_table,
        })
    }

    /// Summary of the indexed automaton (the augmented one in sentinel mode).
    pub fn summary(&self) -> &AutomatonSummary {
        &self.summary
    }

    /// Number of states of the indexed automaton.
    pub fn states(&self) -> usize {
        self.summary.states
    }

    /// Number of states of the automaton the index was built from.
    pub fn original_states(&self) -> usize {
        self.summary.states - self.sentinel_mode as usize
    }

    pub fn r(&self) -> usize {
        self.summary.r
    }

    pub fn sentinel_mode(&self) -> bool {
        self.sentinel_mode
    }

    pub fn dictionary(&self) -> &LabelDictionary {
        &self.dictionary
    }

    pub fn postings(&self) -> &LabelPostings {
        &self.postings
    }

    pub fn length_tables(&self) -> &LengthClassTable {
        &self.length_tables
    }

    pub fn colex_table(&self) -> &ColexEdgeTable {
        &self.colex_table
    }

    pub fn b_max(&self) -> &RankSelectBits {
        &self.b_max
    }

    pub fn b_min(&self) -> &RankSelectBits {
        &self.b_min
    }

    pub fn label_id(&self, label: &[u8]) -> Option<usize> {
        self.dictionary.lookup(label)
    }

    /// `out(Q[1..j], label)`.
    pub fn out_count(&self, label: &[u8], j: usize) -> usize {
        self.label_id(label)
            .map_or(0, |id| self.postings.out_count(id, j))
    }

    /// `in(Q[1..j], label)`.
    pub fn in_count(&self, label: &[u8], j: usize) -> usize {
        self.label_id(label)
            .map_or(0, |id| self.postings.in_count(id, j))
    }

    /// Largest `j` with `in(Q[1..j], label) <= f`.
    pub fn max_prefix_with_in_at_most(&self, label: &[u8], f: usize) -> usize {
        match self.label_id(label) {
            Some(id) => self.max_prefix_with_in_at_most_id(id, f),
            None => self.states(),
        }
    }

    #[inline]
    pub(crate) fn max_prefix_with_in_at_most_id(&self, id: usize, f: usize) -> usize {
        let targets = self.postings.targets(id);
        if f >= targets.len() {
            self.states()
        } else {
            targets[f] as usize - 1
        }
    }

    /// Smallest `j` with `in(Q[1..j], label) >= g`, for
    /// `1 <= g <= multiplicity(label)`.
    ///
    /// # Panics
    ///
    /// If `g` is out of that range; the matcher never asks for it.
    pub fn min_prefix_with_in_at_least(&self, label: &[u8], g: usize) -> usize {
        let id = self
            .label_id(label)
            .expect("min_prefix_with_in_at_least on an absent label");
        self.min_prefix_with_in_at_least_id(id, g)
    }

    #[inline]
    pub(crate) fn min_prefix_with_in_at_least_id(&self, id: usize, g: usize) -> usize {
        let targets = self.postings.targets(id);
        assert!(
            g >= 1 && g <= targets.len(),
            "in-count {g} out of range 1..={}",
            targets.len()
        );
        targets[g - 1] as usize
    }

    /// Smallest target of a length-`k` edge whose label is co-lex `>= pattern`.
    pub fn min_state_with_len_k_label_ge(&self, k: usize, pattern: &[u8]) -> Option<usize> {
        if k == 0 || k > self.length_tables.r() {
            return None;
        }
        let first = self.dictionary.first_at_least(pattern);
        self.length_tables.class(k).min_target_from(first)
    }

    /// Largest state entered by an edge whose label has `pattern` as a
    /// suffix, or 0.
    pub fn max_state_in_gstar(&self, pattern: &[u8]) -> usize {
        if pattern.len() > self.r() {
            return 0;
        }
        let (lo, hi) = self.dictionary.suffixed_by(pattern);
        self.colex_table.max_target_for_ids(lo, hi).unwrap_or(0)
    }

    /// Largest `t <= j` with `b_max[t] = 1`, or 0.
    #[inline]
    pub fn marker_floor(&self, j: usize) -> usize {
        match self.b_max.rank1(j) {
            0 => 0,
            r => self.b_max.select1(r),
        }
    }

    /// Smallest `t >= h` with `t = |Q|` or `b_min[t + 1] = 1`.
    #[inline]
    pub fn marker_ceiling(&self, h: usize) -> usize {
        let n = self.states();
        let r = self.b_min.rank1(h);
        if r == self.b_min.count_ones() {
            n
        } else {
            self.b_min.select1(r + 1) - 1
        }
    }

    /// Whether a final state lies in `lo..=hi`.
    pub fn finals_in(&self, lo: usize, hi: usize) -> bool {
        if lo > hi || lo == 0 {
            return false;
        }
        let hi = hi.min(self.states());
        lo <= hi && self.finals.rank1(hi) > self.finals.rank1(lo - 1)
    }

    /// Final states of the indexed automaton, ascending.
    pub fn finals(&self) -> Vec<usize> {
        (1..=self.finals.count_ones())
            .map(|k| self.finals.select1(k))
            .collect()
    }
}

/// Rebuilds the per-length and co-lex tables from the postings.
fn edge_tables(
    dictionary: &LabelDictionary,
    postings: &LabelPostings,
    r: usize,
) -> (LengthClassTable, ColexEdgeTable) {
    let mut all = Vec::new();
    let mut classes = vec![Vec::new(); r];
    for (id, label) in dictionary.iter().enumerate() {
        for &t in postings.targets(id) {
            all.push((id as u32, t));
            classes[label.len() - 1].push((id as u32, t));
        }
    }
    (
        LengthClassTable {
            classes: classes.into_iter().map(LengthClass::new).collect(),
        },
        ColexEdgeTable::new(all),
    )
}
