//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each, and
//! exits non-zero if any failed.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wgnfa::closure::{build_closure_arrays_counted, ClosureError};
use wgnfa::gnfa::{
    colex_compare, four_state_example, parse_gnfa, ten_state_example, validate, Edge,
    GeneralizedAutomaton, Label,
};
use wgnfa::index::IndexError;
use wgnfa::oracle::{
    all_patterns, brute_closure, check_corpus, generate_instance, interval_structure,
    probe_patterns, CharExpandedNfa, GenParams,
};
use wgnfa::WheelerIndex;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Corpus {
    /// (name, automaton)
    instances: Vec<(String, GeneralizedAutomaton)>,
}

const GENERATED: u64 = 220;
const TINY: u64 = 40;

fn shipped_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load_corpus() -> Corpus {
    let mut instances = vec![
        ("ten_state".to_string(), ten_state_example()),
        ("four_state".to_string(), four_state_example()),
    ];
    if let Ok(dir) = std::fs::read_dir(shipped_dir()) {
        let mut paths: Vec<PathBuf> = dir
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "gnfa"))
            .collect();
        paths.sort();
        for p in paths {
            let text = std::fs::read_to_string(&p).expect("corpus file readable");
            let a = parse_gnfa(&text).expect("corpus file parses");
            instances.push((p.file_stem().unwrap().to_string_lossy().into_owned(), a));
        }
    }
    let default = GenParams::default();
    for seed in 0..GENERATED {
        let a = generate_instance(seed, &default).expect("generator succeeds");
        instances.push((format!("generated-{seed}"), a));
    }
    let tiny = GenParams::tiny();
    for seed in 0..TINY {
        let a = generate_instance(1000 + seed, &tiny).expect("generator succeeds");
        instances.push((format!("tiny-{seed}"), a));
    }
    Corpus { instances }
}

/// Best per-iteration time over several trials, each repeating `f` until at
/// least `floor` has elapsed.
fn time_per_iter(mut f: impl FnMut(), floor: Duration, trials: usize) -> Duration {
    let mut best = Duration::MAX;
    for _ in 0..trials {
        let start = Instant::now();
        let mut iters = 0u32;
        while start.elapsed() < floor {
            f();
            iters += 1;
        }
        best = best.min(start.elapsed() / iters);
    }
    best
}

fn ten_state_cba() -> Outcome {
    let ix = WheelerIndex::build(&ten_state_example(), false).unwrap();
    let mut best = Duration::MAX;
    let mut trace = None;
    for _ in 0..5 {
        let start = Instant::now();
        let t = ix.match_with_trace(b"cba").unwrap().1;
        best = best.min(start.elapsed());
        trace = Some(t);
    }
    let t = trace.unwrap();
    let s3 = &t.steps[2];
    let got = (s3.f[0], s3.f[1], t.c[1], t.c[2], s3.j_star, t.c[3]);
    let want = (Some(3), Some(2), 9, 9, 4, 2);
    outcome(
        got == want && best < Duration::from_millis(1),
        format!(
            "f_1={:?} f_2={:?} |G(c)|={} |G(cb)|={} j*={} c[3]={} in {:?}",
            got.0, got.1, got.2, got.3, got.4, got.5, best
        ),
    )
}

fn ten_state_closure() -> Outcome {
    let c = wgnfa::build_closure_arrays(&ten_state_example()).unwrap();
    let mut want: Vec<usize> = (0..=10).collect();
    want[3] = 5;
    want[4] = 5;
    outcome(c.a_max == want, format!("a_max={:?}", &c.a_max[1..]))
}

fn four_state_case_split() -> Outcome {
    let ix = WheelerIndex::build(&four_state_example(), false).unwrap();
    let (_, t) = ix.match_with_trace(b"bb").unwrap();
    let s2 = &t.steps[1];
    let naive = ix.marker_ceiling(3);
    let pass = s2.h_star == 3 && t.c[2] == 3 && t.d[2] == 3 && naive == 4;
    outcome(
        pass,
        format!(
            "h*={} c[2]={} d[2]={} marker_ceiling(3)={}",
            s2.h_star, t.c[2], t.d[2], naive
        ),
    )
}

fn empty_pattern(corpus: &Corpus) -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (name, a) in &corpus.instances {
        for sentinel in [false, true] {
            let ix = WheelerIndex::build(a, sentinel).unwrap();
            let r = ix.match_interval(b"").unwrap();
            checked += 1;
            if (r.lo, r.hi) != (1, a.state_count()) {
                bad.push(format!("{name}: ({}, {})", r.lo, r.hi));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} indexes, {} wrong {:?}", bad.len(), bad.first()),
    )
}

fn oracle_equivalence(corpus: &Corpus) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let work: Vec<(GeneralizedAutomaton, Vec<Vec<u8>>)> = corpus
        .instances
        .iter()
        .filter(|(name, _)| name.starts_with("generated-"))
        .map(|(_, a)| (a.clone(), probe_patterns(a, &mut rng, 120, 10)))
        .collect();
    let with_eps = work
        .iter()
        .filter(|(a, _)| a.summary().epsilon_edges > 0)
        .count();
    let max_states = work.iter().map(|(a, _)| a.state_count()).max().unwrap_or(0);
    let sigmas: std::collections::BTreeSet<usize> =
        work.iter().map(|(a, _)| a.alphabet().len()).collect();
    let results = check_corpus(&work);
    let elapsed = start.elapsed();
    let mut divergences = Vec::new();
    let mut patterns = 0;
    for (i, r) in results.iter().enumerate() {
        match r {
            Ok(s) => patterns += s.patterns,
            Err(d) => divergences.push(format!("generated-{i}: {d}")),
        }
    }
    let pass = work.len() >= 200
        && with_eps > 0
        && with_eps < work.len()
        && max_states <= 30
        && divergences.is_empty()
        && patterns >= 100 * work.len()
        && elapsed <= Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "{} instances ({with_eps} with epsilon, <= {max_states} states, alphabet sizes {sigmas:?}), \
             {patterns} patterns, {} divergences {:?}, {:.1?}",
            work.len(),
            divergences.len(),
            divergences.first(),
            elapsed
        ),
    )
}

fn exhaustive_small(corpus: &Corpus) -> Outcome {
    let patterns = all_patterns(b"ab", 6);
    let work: Vec<(GeneralizedAutomaton, Vec<Vec<u8>>)> = corpus
        .instances
        .iter()
        .filter(|(_, a)| a.state_count() <= 8)
        .map(|(_, a)| (a.clone(), patterns.clone()))
        .collect();
    let results = check_corpus(&work);
    let failures: Vec<String> = results
        .iter()
        .filter_map(|r| r.as_ref().err().map(|d| d.to_string()))
        .collect();
    outcome(
        failures.is_empty() && work.len() >= 10,
        format!(
            "{} instances x {} patterns, {} divergences {:?}",
            work.len(),
            patterns.len(),
            failures.len(),
            failures.first()
        ),
    )
}

fn interval_invariants(corpus: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let short = all_patterns(b"ab", 6);
    let mut evaluations = 0;
    let mut violations = Vec::new();
    for (name, a) in &corpus.instances {
        let nfa = CharExpandedNfa::new(a);
        let mut ps = probe_patterns(a, &mut rng, 100, 10);
        if a.state_count() <= 8 {
            ps.extend(short.iter().cloned());
        }
        for p in &ps {
            evaluations += 1;
            if let Err(e) = interval_structure(&nfa, p) {
                violations.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{evaluations} oracle evaluations, {} violations {:?}",
            violations.len(),
            violations.first()
        ),
    )
}

fn epsilon_chain(e: usize, forward: bool) -> GeneralizedAutomaton {
    let edges = (1..=e)
        .map(|i| {
            if forward {
                Edge::new(i, i + 1, Label::epsilon())
            } else {
                Edge::new(i + 1, i, Label::epsilon())
            }
        })
        .collect();
    GeneralizedAutomaton::new(e + 1, edges, 1, [e + 1]).unwrap()
}

fn closure_linearity() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for forward in [true, false] {
        let sizes = [10_000usize, 100_000, 1_000_000];
        let mut times = Vec::new();
        for &e in &sizes {
            let a = epsilon_chain(e, forward);
            let (_, visits) = build_closure_arrays_counted(&a).unwrap();
            if visits > 2 * e {
                pass = false;
            }
            let t = time_per_iter(
                || {
                    std::hint::black_box(build_closure_arrays_counted(&a).unwrap());
                },
                Duration::from_millis(60),
                5,
            );
            times.push(t);
            parts.push(format!(
                "{} e={e}: {:?}, visits={visits}",
                if forward { "fwd" } else { "bwd" },
                t
            ));
        }
        for w in times.windows(2) {
            let ratio = w[1].as_secs_f64() / w[0].as_secs_f64();
            parts.push(format!("ratio {ratio:.2}"));
            if ratio > 20.0 {
                pass = false;
            }
        }
    }
    outcome(pass, parts.join("; "))
}

/// Path automaton over a random text with labels of length 1 to 3; states
/// are the label boundaries sorted co-lexicographically by the text prefix
/// read so far.
fn long_path(states: usize, seed: u64) -> (GeneralizedAutomaton, Vec<u8>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = Vec::new();
    let mut cuts = vec![0usize];
    for _ in 1..states {
        for _ in 0..rng.gen_range(1..=3) {
            text.push(b'a' + rng.gen_range(0..4u8));
        }
        cuts.push(text.len());
    }
    let mut order: Vec<usize> = (0..states).collect();
    order.sort_by(|&x, &y| colex_compare(&text[..cuts[x]], &text[..cuts[y]]));
    let mut number = vec![0; states];
    for (p, &v) in order.iter().enumerate() {
        number[v] = p + 1;
    }
    let edges = (1..states)
        .map(|i| {
            Edge::new(
                number[i - 1],
                number[i],
                Label::new(text[cuts[i - 1]..cuts[i]].to_vec()),
            )
        })
        .collect();
    let a = GeneralizedAutomaton::new(states, edges, 1, [number[states - 1]]).unwrap();
    (a, text, cuts)
}

fn query_linearity() -> Outcome {
    let (a, text, cuts) = long_path(10_000, 11);
    let report = validate(&a, 0);
    if !(report.local_axioms_ok() && report.reachable_ok()) {
        return outcome(false, format!("benchmark instance invalid: {report}"));
    }
    let ix = WheelerIndex::build(&a, false).unwrap();
    let r = ix.r();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut pass = true;
    let mut parts = vec![format!("states=10000 r={r} text={}", text.len())];
    let mut worst_ops = 0.0f64;
    // fixed starts; each pattern runs to the first state boundary at or past
    // start + m, so shorter patterns are prefixes of longer ones
    let starts: Vec<usize> = (0..32)
        .map(|_| rng.gen_range(0..text.len() - (1 << 14) - 3))
        .collect();
    let lengths: Vec<usize> = (8..=14).map(|k| 1usize << k).collect();
    let mut sets = Vec::new();
    for &m in &lengths {
        let patterns: Vec<Vec<u8>> = starts
            .iter()
            .map(|&s| {
                let end = cuts[cuts.partition_point(|&c| c < s + m)];
                text[s..end].to_vec()
            })
            .collect();
        for p in &patterns {
            let (res, trace) = ix.match_with_trace(p).unwrap();
            if res.is_empty() {
                pass = false;
                parts.push(format!("m={m}: pattern not found"));
                break;
            }
            worst_ops = worst_ops.max(trace.ops as f64 / (r * m) as f64);
        }
        sets.push(patterns);
    }
    // interleaved rounds, best per length
    let mut best = vec![Duration::MAX; lengths.len()];
    for _ in 0..7 {
        for (b, patterns) in best.iter_mut().zip(&sets) {
            let t = time_per_iter(
                || {
                    for p in patterns {
                        std::hint::black_box(ix.match_interval(p).unwrap());
                    }
                },
                Duration::from_millis(40),
                1,
            );
            *b = (*b).min(t / patterns.len() as u32);
        }
    }
    parts.push(format!("m={}: {:?}", lengths[0], best[0]));
    for i in 1..lengths.len() {
        let ratio = best[i].as_secs_f64() / best[i - 1].as_secs_f64();
        if !(1.5..=3.0).contains(&ratio) {
            pass = false;
        }
        parts.push(format!("m={}: {:?} (x{ratio:.2})", lengths[i], best[i]));
    }
    if worst_ops > 16.0 {
        pass = false;
    }
    parts.push(format!("max ops/(r*m)={worst_ops:.2}"));
    outcome(pass, parts.join("; "))
}

fn space_report(corpus: &Corpus) -> Outcome {
    let mut over = Vec::new();
    let mut worst = 0.0f64;
    let mut worst_payload = 0.0f64;
    for (name, a) in &corpus.instances {
        let s = a.summary();
        let budget_bits = 64 * (s.label_length + s.edges + s.states);
        let ix = WheelerIndex::build(a, false).unwrap();
        let bytes = ix.serialize().len();
        let ratio = (bytes * 8) as f64 / budget_bits as f64;
        // fixed framing: 6 header bytes, 8 length fields, checksum
        let payload = bytes - 6 - 64 - 8;
        worst_payload = worst_payload.max((payload * 8) as f64 / budget_bits as f64);
        if ratio > worst {
            worst = ratio;
        }
        if bytes * 8 > budget_bits {
            over.push(format!("{name}: {bytes} B > {} B", budget_bits / 8));
        }
    }
    outcome(
        over.is_empty(),
        format!(
            "{} of {} over budget {:?}; worst size/budget {worst:.2}; \
             worst payload-only size/budget {worst_payload:.2}",
            over.len(),
            corpus.instances.len(),
            over.first()
        ),
    )
}

fn cycle_fixtures() -> Vec<GeneralizedAutomaton> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    // plain cycles of growing length, entered by a labeled edge
    for len in 2..=8 {
        let n = len + 1;
        let mut edges = vec![Edge::new(1, 2, "a")];
        for i in 2..=n {
            let next = if i == n { 2 } else { i + 1 };
            edges.push(Edge::new(i, next, Label::epsilon()));
        }
        out.push(GeneralizedAutomaton::new(n, edges, 1, [n]).unwrap());
    }
    // cycles hidden in generated instances
    let mut seed = 0;
    while out.len() < 17 {
        let a = generate_instance(seed, &GenParams::default()).unwrap();
        seed += 1;
        let n = a.state_count();
        if n < 3 {
            continue;
        }
        let u = rng.gen_range(2..n);
        let v = rng.gen_range(u + 1..=n);
        let mut edges = a.edges().to_vec();
        edges.push(Edge::new(u, v, Label::epsilon()));
        edges.push(Edge::new(v, u, Label::epsilon()));
        edges.push(Edge::new(u, u, Label::epsilon()));
        out.push(GeneralizedAutomaton::new(n, edges, 1, a.finals().iter().copied()).unwrap());
    }
    // a cycle among states with both labeled and epsilon edges
    out.push(
        parse_gnfa(
            "gnfa 1\nstates 4\ninitial 1\nfinal 4\nedge 1 2 a\nedge 2 3 @e\nedge 3 4 @e\n\
             edge 4 2 @e\nedge 2 4 b\n",
        )
        .unwrap(),
    );
    // two-state cycle at the initial state
    out.push(
        parse_gnfa("gnfa 1\nstates 2\ninitial 1\nfinal 2\nedge 1 2 @e\nedge 2 1 @e\n").unwrap(),
    );
    // long cycle with self-loops on every state
    let mut edges = Vec::new();
    for i in 1..=30 {
        edges.push(Edge::new(i, i, Label::epsilon()));
        edges.push(Edge::new(i, i % 30 + 1, Label::epsilon()));
    }
    out.push(GeneralizedAutomaton::new(30, edges, 1, [30]).unwrap());
    out
}

/// Independent check that some epsilon walk leaves a state and returns.
fn has_epsilon_cycle(a: &GeneralizedAutomaton) -> bool {
    let n = a.state_count();
    let mut succ = vec![Vec::new(); n + 1];
    for e in a.edges() {
        if e.label.is_epsilon() && e.source != e.target {
            succ[e.source].push(e.target);
        }
    }
    (1..=n).any(|s| {
        let mut seen = vec![false; n + 1];
        let mut stack = succ[s].clone();
        while let Some(v) = stack.pop() {
            if v == s {
                return true;
            }
            if !seen[v] {
                seen[v] = true;
                stack.extend(&succ[v]);
            }
        }
        false
    })
}

fn cycle_rejection() -> Outcome {
    let mut fixtures = cycle_fixtures();
    let shipped = shipped_dir().join("invalid/epsilon_cycle.gnfa");
    if let Ok(text) = std::fs::read_to_string(&shipped) {
        fixtures.push(parse_gnfa(&text).unwrap());
    }
    let mut rejected = 0;
    let mut genuine = 0;
    for a in &fixtures {
        genuine += has_epsilon_cycle(a) as usize;
        for sentinel in [false, true] {
            if let Err(IndexError::Closure(ClosureError::EpsilonCycle { .. })) =
                WheelerIndex::build(a, sentinel)
            {
                rejected += 1;
            }
        }
    }
    let total = fixtures.len();
    outcome(
        total >= 20 && genuine == total && rejected == 2 * total,
        format!("{total} fixtures ({genuine} with a cycle), {rejected}/{} builds rejected", 2 * total),
    )
}

fn round_trip(corpus: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut mismatches = Vec::new();
    let mut probes = 0;
    for (name, a) in &corpus.instances {
        for sentinel in [false, true] {
            let ix = WheelerIndex::build(a, sentinel).unwrap();
            let back = match WheelerIndex::deserialize(&ix.serialize()) {
                Ok(b) => b,
                Err(e) => {
                    mismatches.push(format!("{name}: {e}"));
                    continue;
                }
            };
            for p in probe_patterns(a, &mut rng, 1000, 10) {
                probes += 1;
                if ix.query(&p) != back.query(&p) {
                    mismatches.push(format!("{name}: pattern {p:?}"));
                }
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{} indexes, {probes} probes, {} mismatches {:?}",
            corpus.instances.len() * 2,
            mismatches.len(),
            mismatches.first()
        ),
    )
}

fn closure_agreement(corpus: &Corpus) -> usize {
    corpus
        .instances
        .iter()
        .filter(|(_, a)| wgnfa::build_closure_arrays(a).ok() != Some(brute_closure(a)))
        .count()
}

fn marker_zero_rate() -> String {
    let p = GenParams::default();
    let mut with_eps = 0;
    let mut zero = 0;
    for seed in 0..1000 {
        let a = generate_instance(10_000 + seed, &p).unwrap();
        if a.summary().epsilon_edges == 0 {
            continue;
        }
        with_eps += 1;
        let bits = wgnfa::build_marker_bits(&wgnfa::build_closure_arrays(&a).unwrap());
        if bits.b_max[1..].iter().chain(&bits.b_min[1..]).any(|&b| !b) {
            zero += 1;
        }
    }
    format!("{zero}/{with_eps} generated instances with epsilon edges have a zero marker bit (1000 seeds)")
}

fn main() {
    let started = Instant::now();
    let corpus = load_corpus();
    println!(
        "corpus: {} instances; {}",
        corpus.instances.len(),
        marker_zero_rate()
    );
    let disagreeing = closure_agreement(&corpus);
    println!("closure cross-check: {disagreeing} disagreements");

    let criteria: Vec<(&str, Box<dyn Fn(&Corpus) -> Outcome>)> = vec![
        ("ten-state worked example for cba", Box::new(|_| ten_state_cba())),
        ("ten-state closure arrays", Box::new(|_| ten_state_closure())),
        ("four-state case split for bb", Box::new(|_| four_state_case_split())),
        ("empty pattern gives all states", Box::new(empty_pattern)),
        ("oracle equivalence on generated instances", Box::new(oracle_equivalence)),
        ("exhaustive sweep on small instances", Box::new(exhaustive_small)),
        ("interval structure of oracle answers", Box::new(interval_invariants)),
        ("closure construction linearity", Box::new(|_| closure_linearity())),
        ("query linearity in pattern length", Box::new(|_| query_linearity())),
        ("serialized size within 64 bits per unit", Box::new(space_report)),
        ("epsilon cycles rejected", Box::new(|_| cycle_rejection())),
        ("serialization round trip", Box::new(round_trip)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run(&corpus);
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}: {name} | {} | {:.2?}",
            i + 1,
            o.detail,
            t.elapsed()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance: {} of {} criteria passed in {:.1?}",
        criteria.len() - failed.len(),
        criteria.len(),
        started.elapsed()
    );
    if !failed.is_empty() || disagreeing > 0 {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
