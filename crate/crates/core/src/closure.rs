//! Epsilon-closure arrays.
//!
//! `a_max[i]` (`a_min[i]`) is the largest (smallest) state `j` with an
//! epsilon walk from `j` to `i`. They satisfy
//!
//! ```text
//! a_max[i] = max(i, max{ a_max[j] : j != i, (j, i, ε) ∈ E })
//! ```
//!
//! and are computed by one depth-first search over the reversed epsilon
//! edges, in time linear in the number of edges. On a Wheeler automaton the
//! epsilon edges between distinct states are acyclic, so reaching a gray
//! node proves the input is not Wheeler.

use thiserror::Error;

use crate::gnfa::GeneralizedAutomaton;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("EpsilonCycle: epsilon edge {from} -> {to} closes a cycle; the automaton is not Wheeler")]
    EpsilonCycle { from: usize, to: usize },
}

/// `a_max` and `a_min`, 1-based (index 0 is unused and holds 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonClosureArrays {
    pub a_max: Vec<usize>,
    pub a_min: Vec<usize>,
}

impl EpsilonClosureArrays {
    pub fn identity(n: usize) -> Self {
        let ids: Vec<usize> = (0..=n).collect();
        EpsilonClosureArrays {
            a_max: ids.clone(),
            a_min: ids,
        }
    }

    pub fn len(&self) -> usize {
        self.a_max.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Marker bits: `b_max[i]` iff `a_max[i] == i`, `b_min[i]` iff `a_min[i] == i`.
/// 1-based, index 0 unused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkerBits {
    pub b_max: Vec<bool>,
    pub b_min: Vec<bool>,
}

impl MarkerBits {
    pub fn render(bits: &[bool]) -> String {
        bits[1..].iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Incoming epsilon edges per state, self-loops dropped. Built once and shared
/// by the closure pass.
pub struct EpsilonPredecessors {
    offsets: Vec<u32>,
    sources: Vec<u32>,
}

impl EpsilonPredecessors {
    pub fn new(a: &GeneralizedAutomaton) -> Self {
        let n = a.state_count();
        // one pass over the (wide) edge list, then a counting sort
        let pairs: Vec<(u32, u32)> = a
            .edges()
            .iter()
            .filter(|e| e.label.is_epsilon() && e.source != e.target)
            .map(|e| (e.target as u32, e.source as u32))
            .collect();
        let mut offsets = vec![0u32; n + 2];
        for &(t, _) in &pairs {
            offsets[t as usize] += 1;
        }
        let mut acc = 0;
        for o in offsets.iter_mut() {
            acc += *o;
            *o = acc;
        }
        // offsets[t] is now one past the end of t's block; fill backwards
        let mut sources = vec![0u32; pairs.len()];
        for &(t, s) in pairs.iter().rev() {
            offsets[t as usize] -= 1;
            sources[offsets[t as usize] as usize] = s;
        }
        EpsilonPredecessors { offsets, sources }
    }

    pub fn of(&self, state: usize) -> &[u32] {
        &self.sources[self.offsets[state] as usize..self.offsets[state + 1] as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.sources.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
enum Color {
    White,
    Gray,
    Black,
}

/// Builds `a_max` and `a_min`. Also returns the number of edge visits made by
/// the search, which never exceeds the number of epsilon edges.
pub fn build_closure_arrays_counted(
    a: &GeneralizedAutomaton,
) -> Result<(EpsilonClosureArrays, usize), ClosureError> {
    let n = a.state_count();
    let preds = EpsilonPredecessors::new(a);
    let mut arrays = EpsilonClosureArrays::identity(n);
    let mut color = vec![Color::White; n + 1];
    let mut visits = 0usize;
    // (node, index of the next predecessor to examine)
    let mut stack: Vec<(u32, u32)> = Vec::new();

    for root in 1..=n {
        if color[root] != Color::White {
            continue;
        }
        color[root] = Color::Gray;
        stack.push((root as u32, 0));
        while let Some(top) = stack.last_mut() {
            let (i, next) = (top.0 as usize, top.1 as usize);
            let ps = preds.of(i);
            if next == ps.len() {
                color[i] = Color::Black;
                stack.pop();
                if let Some(&(parent, _)) = stack.last() {
                    absorb(&mut arrays, parent as usize, i);
                }
                continue;
            }
            top.1 += 1;
            visits += 1;
            let j = ps[next] as usize;
            match color[j] {
                Color::Black => absorb(&mut arrays, i, j),
                Color::White => {
                    color[j] = Color::Gray;
                    stack.push((j as u32, 0));
                }
                Color::Gray => return Err(ClosureError::EpsilonCycle { from: j, to: i }),
            }
        }
    }
    Ok((arrays, visits))
}

#[inline]
fn absorb(arrays: &mut EpsilonClosureArrays, into: usize, from: usize) {
    if arrays.a_max[from] > arrays.a_max[into] {
        arrays.a_max[into] = arrays.a_max[from];
    }
    if arrays.a_min[from] < arrays.a_min[into] {
        arrays.a_min[into] = arrays.a_min[from];
    }
}

pub fn build_closure_arrays(a: &GeneralizedAutomaton) -> Result<EpsilonClosureArrays, ClosureError> {
    build_closure_arrays_counted(a).map(|(arrays, _)| arrays)
}

pub fn build_marker_bits(c: &EpsilonClosureArrays) -> MarkerBits {
    let n = c.len();
    let mut b_max = vec![false; n + 1];
    let mut b_min = vec![false; n + 1];
    for i in 1..=n {
        b_max[i] = c.a_max[i] == i;
        b_min[i] = c.a_min[i] == i;
    }
    MarkerBits { b_max, b_min }
}

/// Tab-separated dump: `state a_max a_min b_max b_min`.
pub fn closure_tsv(c: &EpsilonClosureArrays) -> String {
    let bits = build_marker_bits(c);
    let mut out = String::from("state\ta_max\ta_min\tb_max\tb_min\n");
    for i in 1..=c.len() {
        out.push_str(&format!(
            "{i}\t{}\t{}\t{}\t{}\n",
            c.a_max[i], c.a_min[i], bits.b_max[i] as u8, bits.b_min[i] as u8
        ));
    }
    out
}
