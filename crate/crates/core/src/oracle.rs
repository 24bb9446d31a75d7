//! Slow reference implementations and a generator of small Wheeler instances.
//!
//! Nothing here touches the index. Every quantity is recomputed from the edge
//! list on a character-expanded automaton, so agreement with the matcher is
//! meaningful evidence.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::closure::{build_closure_arrays, EpsilonClosureArrays};
use crate::gnfa::{
    axiom1_on_order, bounded_languages, colex_compare, escape_bytes, validate, Axiom1Verdict, Edge,
    GeneralizedAutomaton, Label,
};
use crate::index::WheelerIndex;

/// Single-symbol view of an automaton. Nodes `1..=n` are the original states;
/// every interior position of a multi-symbol label gets its own chain node.
#[derive(Clone, Debug)]
pub struct CharExpandedNfa {
    original: usize,
    nodes: usize,
    initial: usize,
    finals: Vec<bool>,
    // (from, to, symbol); None is epsilon
    edges: Vec<(usize, usize, Option<u8>)>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl CharExpandedNfa {
    pub fn new(a: &GeneralizedAutomaton) -> Self {
        let n = a.state_count();
        let mut nodes = n;
        let mut edges = Vec::new();
        for e in a.edges() {
            let label = e.label.as_bytes();
            if label.is_empty() {
                edges.push((e.source, e.target, None));
                continue;
            }
            let mut from = e.source;
            for (i, &x) in label.iter().enumerate() {
                let to = if i + 1 == label.len() {
                    e.target
                } else {
                    nodes += 1;
                    nodes
                };
                edges.push((from, to, Some(x)));
                from = to;
            }
        }
        let mut out = vec![Vec::new(); nodes + 1];
        let mut inc = vec![Vec::new(); nodes + 1];
        for (i, &(u, v, _)) in edges.iter().enumerate() {
            out[u].push(i);
            inc[v].push(i);
        }
        let mut finals = vec![false; nodes + 1];
        for &f in a.finals() {
            finals[f] = true;
        }
        CharExpandedNfa {
            original: n,
            nodes,
            initial: a.initial(),
            finals,
            edges,
            out,
            inc,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn original_states(&self) -> usize {
        self.original
    }

    /// Follows chain nodes back into labeled edges between original states.
    /// Inverse of the expansion up to edge order.
    pub fn contract(&self) -> Vec<Edge> {
        let mut result = Vec::new();
        for &(u, v, x) in &self.edges {
            if u > self.original {
                continue;
            }
            let Some(x) = x else {
                result.push(Edge::new(u, v, Label::epsilon()));
                continue;
            };
            let mut label = vec![x];
            let mut at = v;
            while at > self.original {
                let &(_, next, y) = &self.edges[self.out[at][0]];
                label.push(y.expect("chain edges carry symbols"));
                at = next;
            }
            result.push(Edge::new(u, at, Label::new(label)));
        }
        result
    }

    fn close(&self, set: &mut [bool]) {
        let mut stack: Vec<usize> = (1..=self.nodes).filter(|&u| set[u]).collect();
        while let Some(u) = stack.pop() {
            for &i in &self.out[u] {
                let (_, v, x) = self.edges[i];
                if x.is_none() && !set[v] {
                    set[v] = true;
                    stack.push(v);
                }
            }
        }
    }

    fn step(&self, set: &[bool], symbol: u8) -> Vec<bool> {
        let mut next = vec![false; self.nodes + 1];
        for u in 1..=self.nodes {
            if set[u] {
                for &i in &self.out[u] {
                    let (_, v, x) = self.edges[i];
                    if x == Some(symbol) {
                        next[v] = true;
                    }
                }
            }
        }
        self.close(&mut next);
        next
    }

    /// Nodes holding a walk suffix spelling `pattern`, from any start node.
    fn run_from_everywhere(&self, pattern: &[u8]) -> Vec<bool> {
        let mut set = vec![true; self.nodes + 1];
        set[0] = false;
        for &x in pattern {
            set = self.step(&set, x);
        }
        set
    }

    fn run_from_initial(&self, pattern: &[u8]) -> Vec<bool> {
        let mut set = vec![false; self.nodes + 1];
        set[self.initial] = true;
        self.close(&mut set);
        for &x in pattern {
            set = self.step(&set, x);
        }
        set
    }
}

/// States reached by a walk spelling a string suffixed by `pattern`.
pub fn brute_match(a: &GeneralizedAutomaton, pattern: &[u8]) -> BTreeSet<usize> {
    brute_match_on(&CharExpandedNfa::new(a), pattern)
}

pub fn brute_match_on(nfa: &CharExpandedNfa, pattern: &[u8]) -> BTreeSet<usize> {
    let set = nfa.run_from_everywhere(pattern);
    (1..=nfa.original).filter(|&u| set[u]).collect()
}

/// Whether `pattern` is read from the initial state to a final state.
pub fn brute_accepts(a: &GeneralizedAutomaton, pattern: &[u8]) -> bool {
    brute_accepts_on(&CharExpandedNfa::new(a), pattern)
}

pub fn brute_accepts_on(nfa: &CharExpandedNfa, pattern: &[u8]) -> bool {
    let set = nfa.run_from_initial(pattern);
    (1..=nfa.original).any(|u| set[u] && nfa.finals[u])
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// The states with every incoming string smaller than the pattern do not
    /// form a prefix of the order, so the numbering is not Wheeler.
    #[error("ShapeViolation: for pattern {pattern}, state {inside} is smaller than the pattern but state {outside} < {inside} is not")]
    ShapeViolation {
        pattern: String,
        outside: usize,
        inside: usize,
    },
}

// Comparator states while reading a string right to left against `pattern`:
// 0..m symbols matched, then GT and LT sinks.
struct Comparator<'p> {
    pattern: &'p [u8],
}

impl Comparator<'_> {
    fn m(&self) -> usize {
        self.pattern.len()
    }
    fn gt(&self) -> usize {
        self.m() + 1
    }
    fn lt(&self) -> usize {
        self.m() + 2
    }
    fn size(&self) -> usize {
        self.m() + 3
    }
    fn accepting(&self, q: usize) -> bool {
        q == self.m() || q == self.gt()
    }
    fn read(&self, q: usize, x: u8) -> usize {
        let m = self.m();
        if q >= m {
            return q;
        }
        let want = self.pattern[m - 1 - q];
        match x.cmp(&want) {
            std::cmp::Ordering::Greater => self.gt(),
            std::cmp::Ordering::Less => self.lt(),
            std::cmp::Ordering::Equal => q + 1,
        }
    }
}

/// `|G^≺(pattern)|`: the number of states all of whose incoming strings are
/// co-lex smaller than `pattern`. Fails if those states are not a prefix.
pub fn brute_gless(a: &GeneralizedAutomaton, pattern: &[u8]) -> Result<usize, OracleError> {
    brute_gless_on(&CharExpandedNfa::new(a), pattern)
}

pub fn brute_gless_on(nfa: &CharExpandedNfa, pattern: &[u8]) -> Result<usize, OracleError> {
    if pattern.is_empty() {
        return Ok(0);
    }
    let cmp = Comparator { pattern };
    let width = cmp.size();
    let mut smaller = vec![false; nfa.original + 1];
    let mut seen = vec![false; (nfa.nodes + 1) * width];
    let mut queue = VecDeque::new();
    for u in 1..=nfa.original {
        seen.iter_mut().for_each(|s| *s = false);
        queue.clear();
        seen[u * width] = true;
        queue.push_back((u, 0));
        let mut found_large = false;
        while let Some((v, q)) = queue.pop_front() {
            if v == nfa.initial && cmp.accepting(q) {
                found_large = true;
                break;
            }
            if q == cmp.lt() {
                continue;
            }
            for &i in &nfa.inc[v] {
                let (w, _, x) = nfa.edges[i];
                let q2 = match x {
                    Some(x) => cmp.read(q, x),
                    None => q,
                };
                if !seen[w * width + q2] {
                    seen[w * width + q2] = true;
                    queue.push_back((w, q2));
                }
            }
        }
        smaller[u] = !found_large;
    }
    let c = smaller[1..].iter().take_while(|&&s| s).count();
    if let Some(inside) = (c + 1..=nfa.original).find(|&u| smaller[u]) {
        return Err(OracleError::ShapeViolation {
            pattern: escape_bytes(pattern),
            outside: c + 1,
            inside,
        });
    }
    Ok(c)
}

/// `a_max` and `a_min` by one search per state over reversed epsilon edges.
pub fn brute_closure(a: &GeneralizedAutomaton) -> EpsilonClosureArrays {
    let n = a.state_count();
    let mut preds = vec![Vec::new(); n + 1];
    for e in a.edges() {
        if e.label.is_epsilon() {
            preds[e.target].push(e.source);
        }
    }
    let mut arrays = EpsilonClosureArrays::identity(n);
    for i in 1..=n {
        let mut seen = vec![false; n + 1];
        let mut stack = vec![i];
        seen[i] = true;
        while let Some(v) = stack.pop() {
            arrays.a_max[i] = arrays.a_max[i].max(v);
            arrays.a_min[i] = arrays.a_min[i].min(v);
            for &w in &preds[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    arrays
}

/// Searches orders with state 1 first for one satisfying Axioms 3 and 4
/// exactly and Axiom 1 on strings up to `depth`. Returns `order` with
/// `order[p - 1]` the state placed at position `p`.
///
/// # Panics
///
/// On automata with more than 8 states.
pub fn brute_wheeler_order(a: &GeneralizedAutomaton, depth: usize) -> Option<Vec<usize>> {
    let n = a.state_count();
    assert!(n <= 8, "brute_wheeler_order is limited to 8 states");
    let langs = bounded_languages(a, depth);
    let mut rest: Vec<usize> = (2..=n).collect();
    loop {
        let mut order = vec![1];
        order.extend_from_slice(&rest);
        let r = validate(&a.renumbered(&order), 0);
        if r.axiom3_ok() && r.axiom4_ok() {
            if let Axiom1Verdict::PassedBounded { .. } = axiom1_on_order(&langs, &order, depth) {
                return Some(order);
            }
        }
        if !next_permutation(&mut rest) {
            return None;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The two oracle sets behind a pattern: `c = |G^≺|` and the matched states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleInterval {
    pub c: usize,
    pub matched: BTreeSet<usize>,
}

impl OracleInterval {
    pub fn d(&self) -> usize {
        self.c + self.matched.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error(transparent)]
    Shape(#[from] OracleError),
    #[error("matched state {state} lies inside the smaller-than prefix 1..={c} for pattern {pattern}")]
    Overlap {
        pattern: String,
        state: usize,
        c: usize,
    },
    #[error("matched states for pattern {pattern} are not the interval {lo}..={hi}: {found:?}")]
    NotAdjacentInterval {
        pattern: String,
        lo: usize,
        hi: usize,
        found: Vec<usize>,
    },
}

/// Recomputes both sets and checks that the smaller-than states form a
/// prefix `1..=c`, that the matched states avoid it, and that they fill
/// `c + 1..=d` exactly (so the union is the prefix `1..=d`).
pub fn interval_structure(
    nfa: &CharExpandedNfa,
    pattern: &[u8],
) -> Result<OracleInterval, StructureError> {
    let matched = brute_match_on(nfa, pattern);
    let c = brute_gless_on(nfa, pattern)?;
    if let Some(&state) = matched.iter().find(|&&u| u <= c) {
        return Err(StructureError::Overlap {
            pattern: escape_bytes(pattern),
            state,
            c,
        });
    }
    let hi = c + matched.len();
    if !matched.iter().copied().eq(c + 1..=hi) {
        return Err(StructureError::NotAdjacentInterval {
            pattern: escape_bytes(pattern),
            lo: c + 1,
            hi,
            found: matched.into_iter().collect(),
        });
    }
    Ok(OracleInterval { c, matched })
}

/// Size and shape knobs for [`generate_instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub max_states: usize,
    /// Alphabet size is drawn from this inclusive range; symbols start at `a`.
    pub alphabet: (usize, usize),
    pub max_strings: usize,
    pub max_string_len: usize,
    /// Longest edge label.
    pub max_label_len: usize,
    /// Epsilon edges to try to add.
    pub epsilon_attempts: usize,
    pub merge_leaves: bool,
    /// Whole-instance attempts before giving up.
    pub budget: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_states: 30,
            alphabet: (2, 4),
            max_strings: 10,
            max_string_len: 6,
            max_label_len: 3,
            epsilon_attempts: 6,
            merge_leaves: true,
            budget: 200,
        }
    }
}

impl GenParams {
    /// Instances small enough for exhaustive sweeps and order search.
    pub fn tiny() -> Self {
        GenParams {
            max_states: 8,
            alphabet: (2, 2),
            max_strings: 4,
            max_string_len: 4,
            max_label_len: 2,
            epsilon_attempts: 4,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("generation budget of {0} attempts exhausted")]
pub struct GenerationExhausted(pub usize);

/// Random Wheeler instance: a co-lex ordered trie with some paths compressed
/// into multi-symbol labels, optionally merged leaves, then random epsilon
/// edges kept only when the result still validates. Every returned instance
/// is acyclic, so Axiom 1 is checked on all of its strings, and passes a
/// probe of [`brute_gless`] for shape violations.
pub fn generate_instance(
    seed: u64,
    params: &GenParams,
) -> Result<GeneralizedAutomaton, GenerationExhausted> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..params.budget {
        if let Some(a) = attempt(&mut rng, params) {
            return Ok(a);
        }
    }
    Err(GenerationExhausted(params.budget))
}

struct TrieNode {
    parent: usize,
    path: Vec<u8>,
    children: Vec<usize>,
    end: bool,
}

fn attempt(rng: &mut ChaCha8Rng, params: &GenParams) -> Option<GeneralizedAutomaton> {
    let sigma = rng.gen_range(params.alphabet.0..=params.alphabet.1);
    let count = rng.gen_range(1..=params.max_strings);
    let mut nodes = vec![TrieNode {
        parent: 0,
        path: Vec::new(),
        children: Vec::new(),
        end: false,
    }];
    for _ in 0..count {
        let len = rng.gen_range(1..=params.max_string_len);
        let mut at = 0;
        for _ in 0..len {
            let x = b'a' + rng.gen_range(0..sigma) as u8;
            let existing = nodes[at]
                .children
                .iter()
                .copied()
                .find(|&c| *nodes[c].path.last().unwrap() == x);
            at = match existing {
                Some(c) => c,
                None => {
                    let mut path = nodes[at].path.clone();
                    path.push(x);
                    nodes.push(TrieNode {
                        parent: at,
                        path,
                        children: Vec::new(),
                        end: false,
                    });
                    let id = nodes.len() - 1;
                    nodes[at].children.push(id);
                    id
                }
            };
        }
        nodes[at].end = true;
    }

    // Keep the root, leaves, string ends some of the time, and enough
    // internal nodes that no label is longer than max_label_len.
    let keep_prob = rng.gen_range(0.2..0.9);
    let mut kept = vec![false; nodes.len()];
    let mut gap = vec![0usize; nodes.len()];
    kept[0] = true;
    for v in 1..nodes.len() {
        // children are created after their parent
        let p = nodes[v].parent;
        let g = if kept[p] { 1 } else { gap[p] + 1 };
        let leaf = nodes[v].children.is_empty();
        kept[v] = leaf || g == params.max_label_len || rng.gen_bool(keep_prob);
        gap[v] = g;
    }
    let mut states: Vec<usize> = (0..nodes.len()).filter(|&v| kept[v]).collect();
    if states.len() > params.max_states {
        return None;
    }
    states.sort_by(|&x, &y| colex_compare(&nodes[x].path, &nodes[y].path));
    let mut number = vec![0usize; nodes.len()];
    for (i, &v) in states.iter().enumerate() {
        number[v] = i + 1;
    }
    let mut edges = Vec::new();
    for &v in &states[1..] {
        let mut p = nodes[v].parent;
        while !kept[p] {
            p = nodes[p].parent;
        }
        let label = nodes[v].path[nodes[p].path.len()..].to_vec();
        edges.push(Edge::new(number[p], number[v], Label::new(label)));
    }
    let mut finals: BTreeSet<usize> = states
        .iter()
        .filter(|&&v| nodes[v].children.is_empty() || (nodes[v].end && rng.gen_bool(0.5)))
        .map(|&v| number[v])
        .collect();
    let mut n = states.len();

    if params.merge_leaves && n > 2 && rng.gen_bool(0.5) {
        let leaves: Vec<usize> = (2..=n)
            .filter(|&u| !edges.iter().any(|e: &Edge| e.source == u))
            .collect();
        let pairs: Vec<(usize, usize)> = leaves
            .windows(2)
            .filter(|w| w[1] == w[0] + 1)
            .map(|w| (w[0], w[1]))
            .collect();
        if let Some(&(u, v)) = pairs.choose(rng) {
            let candidate = merge_states(&edges, &finals, n, u, v);
            if accept_candidate(&candidate.0, candidate.1, &candidate.2) {
                (edges, n, finals) = candidate;
            }
        }
    }

    let mut a = GeneralizedAutomaton::new(n, edges.clone(), 1, finals.iter().copied()).ok()?;
    if a.alphabet().len() < params.alphabet.0 || !fully_valid(&a) {
        return None;
    }
    for _ in 0..params.epsilon_attempts {
        if n < 2 {
            break;
        }
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(2..=n);
        if u == v {
            continue;
        }
        let mut trial = edges.clone();
        trial.push(Edge::new(u, v, Label::epsilon()));
        if accept_candidate(&trial, n, &finals) {
            edges = trial;
            a = GeneralizedAutomaton::new(n, edges.clone(), 1, finals.iter().copied()).ok()?;
        }
    }
    if !passes_shape_probe(&a, rng) {
        return None;
    }
    Some(a)
}

fn merge_states(
    edges: &[Edge],
    finals: &BTreeSet<usize>,
    n: usize,
    keep: usize,
    drop: usize,
) -> (Vec<Edge>, usize, BTreeSet<usize>) {
    let relabel = |s: usize| match s.cmp(&drop) {
        std::cmp::Ordering::Less => s,
        std::cmp::Ordering::Equal => keep,
        std::cmp::Ordering::Greater => s - 1,
    };
    let edges = edges
        .iter()
        .map(|e| Edge::new(relabel(e.source), relabel(e.target), e.label.clone()))
        .collect();
    let finals = finals.iter().map(|&f| relabel(f)).collect();
    (edges, n - 1, finals)
}

fn accept_candidate(edges: &[Edge], n: usize, finals: &BTreeSet<usize>) -> bool {
    match GeneralizedAutomaton::new(n, edges.to_vec(), 1, finals.iter().copied()) {
        Ok(a) => fully_valid(&a),
        Err(_) => false,
    }
}

/// Longest string length over all walks, or `None` if the automaton has a
/// cycle through a labeled edge or any epsilon cycle.
pub fn longest_walk(a: &GeneralizedAutomaton) -> Option<usize> {
    let n = a.state_count();
    let mut indeg = vec![0usize; n + 1];
    let mut out = vec![Vec::new(); n + 1];
    for e in a.edges() {
        if e.source == e.target {
            if e.label.is_epsilon() {
                continue;
            }
            return None;
        }
        indeg[e.target] += 1;
        out[e.source].push(e);
    }
    let mut stack: Vec<usize> = (1..=n).filter(|&u| indeg[u] == 0).collect();
    let mut longest = vec![0usize; n + 1];
    let mut done = 0;
    while let Some(u) = stack.pop() {
        done += 1;
        for e in &out[u] {
            longest[e.target] = longest[e.target].max(longest[u] + e.label.len());
            indeg[e.target] -= 1;
            if indeg[e.target] == 0 {
                stack.push(e.target);
            }
        }
    }
    (done == n).then(|| longest.into_iter().max().unwrap_or(0))
}

/// Reachability, Axioms 2-4, no epsilon cycle, acyclic, and Axiom 1 on every
/// string (exact because the automaton is acyclic).
fn fully_valid(a: &GeneralizedAutomaton) -> bool {
    let Some(depth) = longest_walk(a) else {
        return false;
    };
    if build_closure_arrays(a).is_err() {
        return false;
    }
    let r = validate(a, 0);
    if !(r.reachable_ok() && r.coreachable_ok() && r.local_axioms_ok()) {
        return false;
    }
    let langs = bounded_languages(a, depth);
    let order: Vec<usize> = (1..=a.state_count()).collect();
    matches!(
        axiom1_on_order(&langs, &order, depth),
        Axiom1Verdict::PassedBounded { .. }
    )
}

fn passes_shape_probe(a: &GeneralizedAutomaton, rng: &mut ChaCha8Rng) -> bool {
    let nfa = CharExpandedNfa::new(a);
    probe_patterns(a, rng, 30, 6)
        .iter()
        .all(|p| interval_structure(&nfa, p).is_ok())
}

/// Symbols used by the automaton's labels, ascending.
pub fn alphabet(a: &GeneralizedAutomaton) -> Vec<u8> {
    a.alphabet()
}

/// `count` patterns of length up to `max_len`: about half are substrings of
/// strings spelled by random walks, the rest random strings over the
/// automaton's alphabet plus one symbol outside it. Always includes the
/// empty pattern.
pub fn probe_patterns<R: Rng>(
    a: &GeneralizedAutomaton,
    rng: &mut R,
    count: usize,
    max_len: usize,
) -> Vec<Vec<u8>> {
    let mut symbols = a.alphabet();
    let extra = symbols.last().map_or(b'a', |&x| x.saturating_add(1).max(b'a'));
    symbols.push(extra);
    let walks = sample_walk_strings(a, rng, 16, max_len.max(1) * 2);
    let mut out = vec![Vec::new()];
    while out.len() < count {
        let p: Vec<u8> = if rng.gen_bool(0.5) && !walks.is_empty() {
            let w = walks.choose(rng).unwrap();
            if w.is_empty() {
                continue;
            }
            let len = rng.gen_range(1..=w.len().min(max_len));
            let start = rng.gen_range(0..=w.len() - len);
            w[start..start + len].to_vec()
        } else {
            let len = rng.gen_range(0..=max_len);
            (0..len).map(|_| *symbols.choose(rng).unwrap()).collect()
        };
        out.push(p);
    }
    out
}

/// Strings spelled by random walks from the initial state.
pub fn sample_walk_strings<R: Rng>(
    a: &GeneralizedAutomaton,
    rng: &mut R,
    walks: usize,
    max_len: usize,
) -> Vec<Vec<u8>> {
    let n = a.state_count();
    let mut out_edges = vec![Vec::new(); n + 1];
    for e in a.edges() {
        out_edges[e.source].push(e);
    }
    (0..walks)
        .map(|_| {
            let mut s = Vec::new();
            let mut at = a.initial();
            for _ in 0..4 * max_len + 4 {
                if s.len() >= max_len {
                    break;
                }
                let Some(e) = out_edges[at].choose(rng) else {
                    break;
                };
                s.extend_from_slice(e.label.as_bytes());
                at = e.target;
            }
            s.truncate(max_len);
            s
        })
        .collect()
}

/// All strings over `symbols` of length `0..=max_len`, shortest first.
pub fn all_patterns(symbols: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * symbols.len());
        for s in &layer {
            for &x in symbols {
                let mut t: Vec<u8> = s.clone();
                t.push(x);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// First disagreement between the index and the oracles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divergence {
    Build(String),
    Closure {
        expected: EpsilonClosureArrays,
        found: EpsilonClosureArrays,
    },
    Structure(StructureError),
    Interval {
        pattern: Vec<u8>,
        expected: (usize, usize),
        found: (usize, usize),
    },
    Gless {
        pattern: Vec<u8>,
        expected: usize,
        found: usize,
    },
    Accepts {
        pattern: Vec<u8>,
        expected: bool,
        found: bool,
    },
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pat = |p: &[u8]| {
            if p.is_empty() {
                "@e".to_string()
            } else {
                escape_bytes(p)
            }
        };
        match self {
            Divergence::Build(e) => write!(f, "build\t{e}"),
            Divergence::Closure { expected, found } => write!(
                f,
                "closure\texpected a_max={:?} a_min={:?}\tfound a_max={:?} a_min={:?}",
                &expected.a_max[1..],
                &expected.a_min[1..],
                &found.a_max[1..],
                &found.a_min[1..]
            ),
            Divergence::Structure(e) => write!(f, "structure\t{e}"),
            Divergence::Interval {
                pattern,
                expected,
                found,
            } => write!(
                f,
                "interval\t{}\texpected {}..={}\tfound {}..={}",
                pat(pattern),
                expected.0,
                expected.1,
                found.0,
                found.1
            ),
            Divergence::Gless {
                pattern,
                expected,
                found,
            } => write!(f, "gless\t{}\texpected {expected}\tfound {found}", pat(pattern)),
            Divergence::Accepts {
                pattern,
                expected,
                found,
            } => write!(f, "accepts\t{}\texpected {expected}\tfound {found}", pat(pattern)),
        }
    }
}

/// Counts of comparisons made by [`check_instance`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub patterns: usize,
    pub comparisons: usize,
}

impl std::ops::AddAssign for CheckStats {
    fn add_assign(&mut self, o: Self) {
        self.patterns += o.patterns;
        self.comparisons += o.comparisons;
    }
}

/// Compares closure arrays, match intervals, `c[m]` and acceptance against
/// the oracles, and checks the interval structure of every oracle answer.
pub fn check_instance(
    a: &GeneralizedAutomaton,
    patterns: &[Vec<u8>],
) -> Result<CheckStats, Divergence> {
    let expected = brute_closure(a);
    let found = build_closure_arrays(a).map_err(|e| Divergence::Build(e.to_string()))?;
    if expected != found {
        return Err(Divergence::Closure { expected, found });
    }
    let plain = WheelerIndex::build(a, false).map_err(|e| Divergence::Build(e.to_string()))?;
    let anchored = WheelerIndex::build(a, true).map_err(|e| Divergence::Build(e.to_string()))?;
    let nfa = CharExpandedNfa::new(a);
    let mut stats = CheckStats {
        patterns: 0,
        comparisons: 1,
    };
    for p in patterns {
        let oracle = interval_structure(&nfa, p).map_err(Divergence::Structure)?;
        let expected = if p.is_empty() {
            (1, a.state_count())
        } else {
            (oracle.c + 1, oracle.d())
        };
        for ix in [&plain, &anchored] {
            let (res, trace) = ix
                .match_with_trace(p)
                .map_err(|e| Divergence::Build(e.to_string()))?;
            if (res.lo, res.hi) != expected {
                return Err(Divergence::Interval {
                    pattern: p.clone(),
                    expected,
                    found: (res.lo, res.hi),
                });
            }
            let shift = ix.sentinel_mode() as usize;
            let c_m = trace.c[p.len()] - if p.is_empty() { 0 } else { shift };
            if c_m != oracle.c {
                return Err(Divergence::Gless {
                    pattern: p.clone(),
                    expected: oracle.c,
                    found: c_m,
                });
            }
        }
        let expected = brute_accepts_on(&nfa, p);
        let found = anchored.accepts(p).map_err(|e| Divergence::Build(e.to_string()))?;
        if expected != found {
            return Err(Divergence::Accepts {
                pattern: p.clone(),
                expected,
                found,
            });
        }
        stats.patterns += 1;
        stats.comparisons += 5;
    }
    Ok(stats)
}

/// Runs [`check_instance`] over many instances, in parallel with the
/// `parallel` feature. Returns per-instance outcomes in input order.
pub fn check_corpus(
    instances: &[(GeneralizedAutomaton, Vec<Vec<u8>>)],
) -> Vec<Result<CheckStats, Divergence>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        instances
            .par_iter()
            .map(|(a, ps)| check_instance(a, ps))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        instances.iter().map(|(a, ps)| check_instance(a, ps)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gnfa::{four_state_example, parse_gnfa, ten_state_example};

    #[test]
    fn expansion_contracts_back() {
        let a = ten_state_example();
        let nfa = CharExpandedNfa::new(&a);
        assert_eq!(nfa.node_count(), 10 + 6);
        let mut back: Vec<String> = nfa.contract().iter().map(|e| e.to_string()).collect();
        let mut orig: Vec<String> = a.edges().iter().map(|e| e.to_string()).collect();
        back.sort();
        orig.sort();
        assert_eq!(back, orig);
    }

    #[test]
    fn match_examples() {
        let a = ten_state_example();
        assert_eq!(brute_match(&a, b"a"), BTreeSet::from([2, 3, 4, 5]));
        assert_eq!(brute_match(&a, b""), (1..=10).collect());
        assert!(brute_match(&a, b"cba").is_empty());
        assert!(brute_match(&four_state_example(), b"bb").is_empty());
        assert_eq!(brute_match(&four_state_example(), b"b"), BTreeSet::from([3, 4]));
    }

    #[test]
    fn gless_examples() {
        let a = ten_state_example();
        assert_eq!(brute_gless(&a, b"cba"), Ok(2));
        assert_eq!(brute_gless(&a, b"c"), Ok(9));
        assert_eq!(brute_gless(&a, b"cb"), Ok(9));
        assert_eq!(brute_gless(&a, b""), Ok(0));
        assert_eq!(brute_gless(&four_state_example(), b"bb"), Ok(3));
    }

    #[test]
    fn gless_detects_misordering() {
        // states 2 and 3 swapped: b-state before a-state
        let a = parse_gnfa("gnfa 1\nstates 3\ninitial 1\nfinal 2 3\nedge 1 2 b\nedge 1 3 a\n")
            .unwrap();
        assert!(matches!(
            brute_gless(&a, b"b"),
            Err(OracleError::ShapeViolation { .. })
        ));
    }

    #[test]
    fn closure_and_acceptance_examples() {
        let a = ten_state_example();
        assert_eq!(brute_closure(&a), build_closure_arrays(&a).unwrap());
        assert_eq!(brute_closure(&four_state_example()).a_min[4], 3);
        assert!(brute_accepts(&four_state_example(), b"ba"));
        assert!(brute_accepts(&four_state_example(), b"b"));
        assert!(brute_accepts(&a, b"bba"));
        assert!(!brute_accepts(&a, b""));
    }

    #[test]
    fn wheeler_order_search() {
        let b = four_state_example();
        assert_eq!(brute_wheeler_order(&b, 6), Some(vec![1, 2, 3, 4]));
        let shuffled = b.renumbered(&[1, 4, 2, 3]);
        let order = brute_wheeler_order(&shuffled, 6).unwrap();
        assert_eq!(validate(&shuffled.renumbered(&order), 6).is_ok(), true);
        let cyc = parse_gnfa("gnfa 1\nstates 2\ninitial 1\nfinal 2\nedge 1 2 @e\nedge 2 1 @e\n")
            .unwrap();
        assert_eq!(brute_wheeler_order(&cyc, 4), None);
    }

    #[test]
    fn permutations_are_enumerated() {
        let mut v = vec![1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(v, [3, 2, 1]);
    }

    #[test]
    fn generated_instances_are_wheeler() {
        let mut with_eps = 0;
        for seed in 0..60 {
            let a = generate_instance(seed, &GenParams::default()).unwrap();
            assert!(a.state_count() <= 30);
            assert!(validate(&a, longest_walk(&a).unwrap()).is_ok(), "seed {seed}");
            with_eps += (a.summary().epsilon_edges > 0) as usize;
        }
        assert!(with_eps > 10, "only {with_eps} instances with epsilon edges");
    }

    #[test]
    fn generated_tiny_instances_have_identity_order() {
        for seed in 0..20 {
            let a = generate_instance(seed, &GenParams::tiny()).unwrap();
            assert!(a.state_count() <= 8);
            let depth = longest_walk(&a).unwrap();
            let order = brute_wheeler_order(&a, depth).unwrap();
            assert_eq!(order, (1..=a.state_count()).collect::<Vec<_>>(), "seed {seed}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = GenParams::default();
        assert_eq!(
            generate_instance(7, &p).unwrap().to_text(),
            generate_instance(7, &p).unwrap().to_text()
        );
    }

    #[test]
    fn examples_pass_the_full_check() {
        for a in [ten_state_example(), four_state_example()] {
            let ps = all_patterns(b"abc", 4);
            assert_eq!(check_instance(&a, &ps).map(|s| s.patterns), Ok(ps.len()));
        }
    }

    #[test]
    fn pattern_enumeration() {
        assert_eq!(all_patterns(b"ab", 2).len(), 7);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ps = probe_patterns(&ten_state_example(), &mut rng, 50, 5);
        assert_eq!(ps.len(), 50);
        assert!(ps[0].is_empty());
        assert!(ps.iter().all(|p| p.len() <= 5));
    }
}
