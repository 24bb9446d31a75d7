//! Pattern matching over a [`WheelerIndex`].
//!
//! For a pattern `α` the states reached by a walk spelling a string suffixed
//! by `α` form the interval `[c + 1, d]` of the Wheeler order, where `c` is
//! the number of states all of whose incoming strings are co-lex smaller than
//! `α`, and `d` adds the matching states on top of those. Both are computed
//! prefix by prefix: `c[ℓ]` and `d[ℓ]` for `p = α[..ℓ]` only depend on
//! `c[ℓ - k]`, `d[ℓ - k]` for label lengths `k <= r`.
//!
//! Epsilon edges are handled by two marker bitvectors: `c[ℓ]` is pulled down
//! to the last state not reachable by an epsilon walk from a later state, and
//! a strictly positive `d[ℓ]` candidate is pushed up over states reachable
//! from earlier ones.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gnfa::{escape_bytes, SENTINEL};
use crate::index::WheelerIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchError {
    #[error("pattern contains the reserved sentinel symbol")]
    SentinelInPattern,
    #[error("acceptance queries need an index built with the sentinel")]
    NotSentinelMode,
}

/// Intermediates of one `ℓ` step. Vectors are indexed by `k - 1`; `None`
/// where `k` is outside `0 < k < min(r + 1, ℓ)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StepRecord {
    pub f: Vec<Option<usize>>,
    pub g: Vec<Option<usize>>,
    pub j_star: usize,
    pub i_star: usize,
    pub h_star: usize,
    /// `marker_ceiling(h_star)`, recorded even when the equality case makes
    /// `d = h_star`.
    pub t_star: usize,
}

/// Full history of a match, in the numbering of the indexed automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchTrace {
    pub pattern: Vec<u8>,
    pub c: Vec<usize>,
    pub d: Vec<usize>,
    /// `steps[ℓ - 1]` for `ℓ = 1..=m`.
    pub steps: Vec<StepRecord>,
    /// Index operations performed.
    pub ops: u64,
}

impl MatchTrace {
    pub fn new(pattern: &[u8], states: usize) -> Self {
        let mut c = Vec::with_capacity(pattern.len() + 1);
        let mut d = Vec::with_capacity(pattern.len() + 1);
        c.push(0);
        d.push(states);
        MatchTrace {
            pattern: pattern.to_vec(),
            c,
            d,
            steps: Vec::with_capacity(pattern.len()),
            ops: 0,
        }
    }

    /// Tab-separated dump, one row per `ℓ` (including `ℓ = 0`):
    /// `l prefix f_1..f_r g_1..g_r j_star i_star h_star t_star c d`.
    pub fn to_tsv(&self, r: usize) -> String {
        let mut out = String::from("l\tprefix");
        for k in 1..=r {
            write!(out, "\tf_{k}").unwrap();
        }
        for k in 1..=r {
            write!(out, "\tg_{k}").unwrap();
        }
        out.push_str("\tj_star\ti_star\th_star\tt_star\tc\td\n");
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for l in 0..self.c.len() {
            let prefix = if l == 0 {
                "-".to_string()
            } else {
                escape_bytes(&self.pattern[..l])
            };
            write!(out, "{l}\t{prefix}").unwrap();
            match l.checked_sub(1).and_then(|i| self.steps.get(i)) {
                Some(s) => {
                    for k in 0..r {
                        write!(out, "\t{}", opt(s.f.get(k).copied().flatten())).unwrap();
                    }
                    for k in 0..r {
                        write!(out, "\t{}", opt(s.g.get(k).copied().flatten())).unwrap();
                    }
                    write!(
                        out,
                        "\t{}\t{}\t{}\t{}",
                        s.j_star, s.i_star, s.h_star, s.t_star
                    )
                    .unwrap();
                }
                None => {
                    for _ in 0..2 * r + 4 {
                        out.push_str("\t-");
                    }
                }
            }
            writeln!(out, "\t{}\t{}", self.c[l], self.d[l]).unwrap();
        }
        out
    }
}

/// Result interval `lo..=hi` (empty iff `lo > hi`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub lo: usize,
    pub hi: usize,
    pub accepted: Option<bool>,
}

impl QueryResult {
    pub fn count(&self) -> usize {
        (self.hi + 1).saturating_sub(self.lo)
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn states(&self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

/// Label ids of `s(p, k)` for `0 < k < min(r + 1, ℓ)`.
fn suffix_label_ids(ix: &WheelerIndex, trace: &mut MatchTrace, l: usize) -> Vec<Option<usize>> {
    let prefix = &trace.pattern[..l];
    let kmax = ix.r().min(l.saturating_sub(1));
    let ids = (1..=kmax)
        .map(|k| ix.label_id(&prefix[l - k..]))
        .collect();
    trace.ops += kmax as u64;
    ids
}

/// Computes `c[ℓ]` from `c[..ℓ]`, returning the partially filled step
/// record (`f`, `j_star`) together with `c[ℓ]`.
pub fn step_less(ix: &WheelerIndex, trace: &mut MatchTrace, l: usize) -> (StepRecord, usize) {
    let ids = suffix_label_ids(ix, trace, l);
    step_less_with(ix, trace, l, &ids)
}

fn step_less_with(
    ix: &WheelerIndex,
    trace: &mut MatchTrace,
    l: usize,
    ids: &[Option<usize>],
) -> (StepRecord, usize) {
    let n = ix.states();
    let r = ix.r();
    let mut rec = StepRecord {
        f: vec![None; r],
        g: vec![None; r],
        ..Default::default()
    };
    let mut j_star = n;
    for (k0, id) in ids.iter().enumerate() {
        let k = k0 + 1;
        let prev_c = trace.c[l - k];
        let f = match *id {
            Some(id) => {
                let f = ix.postings().out_count(id, prev_c);
                j_star = j_star.min(ix.max_prefix_with_in_at_most_id(id, f));
                trace.ops += 2;
                f
            }
            None => 0,
        };
        rec.f[k0] = Some(f);
    }

    // First violator among labels co-lex >= the whole prefix.
    let first = ix.dictionary().first_at_least(&trace.pattern[..l]);
    trace.ops += 1;
    for k in 1..=r {
        if let Some(t) = ix.length_tables().class(k).min_target_from(first) {
            j_star = j_star.min(t - 1);
        }
        trace.ops += 1;
    }
    rec.j_star = j_star;
    trace.ops += 1;
    (rec, ix.marker_floor(j_star))
}

/// Computes `d[ℓ]` given `c[ℓ]`, filling `g`, `i_star`, `h_star` and
/// `t_star` into `rec`.
pub fn step_lesseq(
    ix: &WheelerIndex,
    trace: &mut MatchTrace,
    l: usize,
    c_l: usize,
    rec: &mut StepRecord,
) -> usize {
    let ids = suffix_label_ids(ix, trace, l);
    step_lesseq_with(ix, trace, l, c_l, rec, &ids)
}

fn step_lesseq_with(
    ix: &WheelerIndex,
    trace: &mut MatchTrace,
    l: usize,
    c_l: usize,
    rec: &mut StepRecord,
    ids: &[Option<usize>],
) -> usize {
    let mut j = 0;
    for (k0, id) in ids.iter().enumerate() {
        let k = k0 + 1;
        let f = rec.f[k0].expect("step_less ran first");
        let g = match *id {
            Some(id) => {
                trace.ops += 1;
                ix.postings().out_count(id, trace.d[l - k])
            }
            None => 0,
        };
        assert!(g >= f, "g_{k} = {g} < f_{k} = {f} at step {l}");
        rec.g[k0] = Some(g);
        if g > f {
            let id = id.expect("g > 0 implies the label exists");
            j = j.max(ix.min_prefix_with_in_at_least_id(id, g));
            trace.ops += 1;
        }
    }
    let i_star = ix.max_state_in_gstar(&trace.pattern[..l]);
    trace.ops += 1;
    let h_star = c_l.max(i_star).max(j);
    let t_star = ix.marker_ceiling(h_star);
    trace.ops += 1;
    rec.i_star = i_star;
    rec.h_star = h_star;
    rec.t_star = t_star;
    if h_star == c_l {
        h_star
    } else {
        t_star
    }
}

/// Runs the recursion over the whole pattern in the indexed numbering,
/// without sentinel translation.
pub fn match_raw(ix: &WheelerIndex, pattern: &[u8]) -> MatchTrace {
    let mut trace = MatchTrace::new(pattern, ix.states());
    for l in 1..=pattern.len() {
        let ids = suffix_label_ids(ix, &mut trace, l);
        let (mut rec, c_l) = step_less_with(ix, &mut trace, l, &ids);
        let d_l = step_lesseq_with(ix, &mut trace, l, c_l, &mut rec, &ids);
        debug_assert!(c_l <= d_l);
        trace.c.push(c_l);
        trace.d.push(d_l);
        trace.steps.push(rec);
    }
    trace
}

impl WheelerIndex {
    /// States reached by a walk spelling a string suffixed by `pattern`, in
    /// the numbering of the source automaton.
    pub fn match_interval(&self, pattern: &[u8]) -> Result<QueryResult, MatchError> {
        self.match_with_trace(pattern).map(|(res, _)| res)
    }

    /// Like [`match_interval`](Self::match_interval), also returning the trace
    /// (in the indexed numbering).
    pub fn match_with_trace(&self, pattern: &[u8]) -> Result<(QueryResult, MatchTrace), MatchError> {
        if pattern.contains(&SENTINEL) {
            return Err(MatchError::SentinelInPattern);
        }
        let trace = match_raw(self, pattern);
        let n = self.original_states();
        let res = if pattern.is_empty() {
            QueryResult {
                lo: 1,
                hi: n,
                accepted: None,
            }
        } else {
            let m = pattern.len();
            let shift = self.sentinel_mode() as usize;
            QueryResult {
                lo: trace.c[m] + 1 - shift,
                hi: trace.d[m] - shift,
                accepted: None,
            }
        };
        Ok((res, trace))
    }

    /// Whether `pattern` is read from the initial state to a final state.
    pub fn accepts(&self, pattern: &[u8]) -> Result<bool, MatchError> {
        if !self.sentinel_mode() {
            return Err(MatchError::NotSentinelMode);
        }
        if pattern.contains(&SENTINEL) {
            return Err(MatchError::SentinelInPattern);
        }
        let mut anchored = Vec::with_capacity(pattern.len() + 1);
        anchored.push(SENTINEL);
        anchored.extend_from_slice(pattern);
        let trace = match_raw(self, &anchored);
        let m = anchored.len();
        Ok(self.finals_in(trace.c[m] + 1, trace.d[m]))
    }

    /// Interval plus, on a sentinel index, the acceptance verdict.
    pub fn query(&self, pattern: &[u8]) -> Result<QueryResult, MatchError> {
        let mut res = self.match_interval(pattern)?;
        if self.sentinel_mode() {
            res.accepted = Some(self.accepts(pattern)?);
        }
        Ok(res)
    }
}
