use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wgnfa::closure::closure_tsv;
use wgnfa::gnfa::{escape_bytes, unescape_bytes, SENTINEL};
use wgnfa::oracle::{self, GenParams};
use wgnfa::{build_closure_arrays, parse_gnfa, validate, GeneralizedAutomaton, WheelerIndex};

#[derive(Parser, Debug)]
#[command(name = "wgnfa", version, about = "Pattern matching on Wheeler generalized automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse, validate and index an automaton.
    Build {
        gnfa: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Add a sentinel initial state so the index can answer acceptance.
        #[arg(long)]
        sentinel: bool,
        /// Longest string length used for the Axiom 1 check (0 skips it).
        #[arg(long, default_value_t = 8)]
        axiom1_depth: usize,
    },
    /// Print the validation report; exit 1 on any failure.
    Validate {
        gnfa: PathBuf,
        #[arg(long, default_value_t = 8)]
        axiom1_depth: usize,
    },
    /// Match patterns against an index, one TSV row per pattern.
    Query {
        index: PathBuf,
        /// Pattern file, one per line (`-` for stdin, the default).
        #[arg(long)]
        patterns: Option<PathBuf>,
        /// Dump the per-prefix trace of every pattern to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Dump the epsilon closure arrays and marker bits.
    Closure { gnfa: PathBuf },
    /// Compare the index against the brute-force oracles.
    OracleCheck {
        #[arg(required = true)]
        gnfa: Vec<PathBuf>,
        /// Pattern file used for every automaton. Without it, a sidecar
        /// `<name>.patterns` is used if present, else random probes.
        #[arg(long)]
        patterns: Option<PathBuf>,
        /// Number of random probes when no pattern file applies.
        #[arg(long, default_value_t = 200)]
        random: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Time queries per pattern length and report the index size.
    Bench {
        gnfa: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64,128")]
        pattern_lengths: Vec<usize>,
        #[arg(long, default_value_t = 256)]
        patterns_per_length: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Write random Wheeler instances with probe-pattern sidecars.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// At most 8 states over {a, b}.
        #[arg(long)]
        tiny: bool,
        #[arg(long, default_value_t = 100)]
        patterns: usize,
    },
}

/// Failure with its exit code: 1 for validation or divergence, 3 for I/O and
/// format problems.
enum Failure {
    Invalid(String),
    Io(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build {
            gnfa,
            output,
            sentinel,
            axiom1_depth,
        } => build(&gnfa, &output, sentinel, axiom1_depth),
        Command::Validate { gnfa, axiom1_depth } => validate_cmd(&gnfa, axiom1_depth),
        Command::Query {
            index,
            patterns,
            trace,
        } => query(&index, patterns.as_deref(), trace),
        Command::Closure { gnfa } => closure(&gnfa),
        Command::OracleCheck {
            gnfa,
            patterns,
            random,
            max_len,
            seed,
        } => oracle_check(&gnfa, patterns.as_deref(), random, max_len, seed),
        Command::Bench {
            gnfa,
            pattern_lengths,
            patterns_per_length,
            seed,
        } => bench(&gnfa, &pattern_lengths, patterns_per_length, seed),
        Command::Generate {
            out,
            seed,
            count,
            tiny,
            patterns,
        } => generate(&out, seed, count, tiny, patterns),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read_gnfa(path: &Path) -> anyhow::Result<GeneralizedAutomaton> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_gnfa(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Patterns, one per LF-terminated line, with `\xNN` and `\\` escapes. A
/// missing final newline is tolerated.
fn parse_patterns(bytes: &[u8]) -> anyhow::Result<Vec<Vec<u8>>> {
    let mut lines: Vec<&[u8]> = bytes.split(|&b| b == b'\n').collect();
    if lines.last().is_some_and(|l| l.is_empty()) {
        lines.pop();
    }
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let p = unescape_bytes(l).ok_or_else(|| anyhow!("line {}: malformed escape", i + 1))?;
            if p.contains(&SENTINEL) {
                return Err(anyhow!("line {}: pattern contains the reserved symbol 0x01", i + 1));
            }
            Ok(p)
        })
        .collect()
}

fn read_patterns(path: Option<&Path>) -> anyhow::Result<Vec<Vec<u8>>> {
    let mut bytes = Vec::new();
    match path {
        None => io::stdin().read_to_end(&mut bytes)?,
        Some(p) if p == Path::new("-") => io::stdin().read_to_end(&mut bytes)?,
        Some(p) => {
            bytes = fs::read(p).with_context(|| format!("reading {}", p.display()))?;
            bytes.len()
        }
    };
    parse_patterns(&bytes)
}

fn write_patterns(patterns: &[Vec<u8>]) -> String {
    patterns
        .iter()
        .map(|p| escape_bytes(p) + "\n")
        .collect()
}

/// Checks everything `build` needs; the error text is the report.
fn hard_failures(a: &GeneralizedAutomaton, depth: usize) -> (String, bool) {
    let report = validate(a, depth);
    let mut text = report.to_string();
    let mut ok = report.is_ok();
    match build_closure_arrays(a) {
        Ok(_) => text.push_str("epsilon-cycle\tok\n"),
        Err(e) => {
            text.push_str(&format!("epsilon-cycle\tFAILED\t{e}\n"));
            ok = false;
        }
    }
    (text, ok)
}

fn build(gnfa: &Path, output: &Path, sentinel: bool, depth: usize) -> Outcome {
    let a = read_gnfa(gnfa)?;
    let (report, ok) = hard_failures(&a, depth);
    if !ok {
        return Err(Failure::Invalid(report));
    }
    let ix = WheelerIndex::build(&a, sentinel).map_err(|e| Failure::Invalid(e.to_string()))?;
    let bytes = ix.serialize();
    fs::write(output, &bytes).with_context(|| format!("writing {}", output.display()))?;
    eprintln!(
        "wrote {} ({} bytes, {} states, {} edges, r={}{})",
        output.display(),
        bytes.len(),
        ix.states(),
        ix.summary().edges,
        ix.r(),
        if sentinel { ", sentinel" } else { "" }
    );
    Ok(())
}

fn validate_cmd(gnfa: &Path, depth: usize) -> Outcome {
    let a = read_gnfa(gnfa)?;
    let (report, ok) = hard_failures(&a, depth);
    print!("{report}");
    if ok {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .lines()
            .filter(|l| l.contains("FAILED"))
            .collect();
        Err(Failure::Invalid(failed.join("\n")))
    }
}

fn load_index(path: &Path) -> anyhow::Result<WheelerIndex> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    WheelerIndex::deserialize(&bytes).with_context(|| format!("loading {}", path.display()))
}

fn query(index: &Path, patterns: Option<&Path>, trace: bool) -> Outcome {
    let ix = load_index(index)?;
    let patterns = read_patterns(patterns)?;
    let results = wgnfa::match_batch(&ix, &patterns);
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    for (p, res) in patterns.iter().zip(results) {
        let res = res.map_err(|e| anyhow!("pattern {}: {e}", escape_bytes(p)))?;
        let states: Vec<String> = res.states().map(|s| s.to_string()).collect();
        let accepted = match res.accepted {
            Some(true) => "true",
            Some(false) => "false",
            None => "-",
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{accepted}",
            escape_bytes(p),
            res.lo,
            res.hi,
            res.count(),
            states.join(",")
        )?;
        if trace {
            let (_, t) = ix
                .match_with_trace(p)
                .map_err(|e| anyhow!("pattern {}: {e}", escape_bytes(p)))?;
            eprint!("# pattern {}\n{}", escape_bytes(p), t.to_tsv(ix.r()));
        }
    }
    out.flush()?;
    Ok(())
}

fn closure(gnfa: &Path) -> Outcome {
    let a = read_gnfa(gnfa)?;
    let c = build_closure_arrays(&a).map_err(|e| Failure::Invalid(e.to_string()))?;
    print!("{}", closure_tsv(&c));
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("patterns")
}

fn oracle_check(
    files: &[PathBuf],
    patterns: Option<&Path>,
    random: usize,
    max_len: usize,
    seed: u64,
) -> Outcome {
    let shared = patterns.map(|p| read_patterns(Some(p))).transpose()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut work = Vec::with_capacity(files.len());
    for f in files {
        let a = read_gnfa(f)?;
        let ps = match &shared {
            Some(ps) => ps.clone(),
            None if sidecar(f).exists() => read_patterns(Some(&sidecar(f)))?,
            None => oracle::probe_patterns(&a, &mut rng, random, max_len),
        };
        work.push((a, ps));
    }
    let results = oracle::check_corpus(&work);
    let mut first = None;
    for (f, r) in files.iter().zip(&results) {
        match r {
            Ok(s) => println!("{}\tok\t{} patterns", f.display(), s.patterns),
            Err(d) => {
                println!("{}\tDIVERGENCE\t{d}", f.display());
                first.get_or_insert_with(|| format!("{}: {d}", f.display()));
            }
        }
    }
    match first {
        None => Ok(()),
        Some(msg) => Err(Failure::Invalid(format!("first divergence: {msg}"))),
    }
}

fn bench(gnfa: &Path, lengths: &[usize], per_length: usize, seed: u64) -> Outcome {
    let a = read_gnfa(gnfa)?;
    let ix = WheelerIndex::build(&a, false).map_err(|e| Failure::Invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = ix.r().max(1);
    println!("length\tpatterns\tseq_ns\tpar_ns\tops\tops_per_rm");
    for &m in lengths {
        let patterns = bench_patterns(&a, &mut rng, per_length, m);
        let ops: u64 = patterns
            .iter()
            .map(|p| ix.match_with_trace(p).map(|(_, t)| t.ops).unwrap_or(0))
            .sum();
        let seq = time_ns(|| {
            std::hint::black_box(wgnfa::match_batch_sequential(&ix, &patterns));
        });
        let par = time_ns(|| {
            std::hint::black_box(wgnfa::match_batch(&ix, &patterns));
        });
        let n = patterns.len().max(1) as f64;
        println!(
            "{m}\t{}\t{:.0}\t{:.0}\t{:.1}\t{:.2}",
            patterns.len(),
            seq / n,
            par / n,
            ops as f64 / n,
            ops as f64 / n / (r * m.max(1)) as f64
        );
    }
    println!();
    println!("index\tbytes\tbudget_bytes\tratio\twithin_budget\tpayload_bytes\tc_succinct");
    let s = a.summary();
    let budget_bits = 64 * (s.label_length + s.edges + s.states);
    for sentinel in [false, true] {
        let ix = WheelerIndex::build(&a, sentinel).map_err(|e| Failure::Invalid(e.to_string()))?;
        let bytes = ix.serialize().len();
        // 6 header bytes, 8 section lengths and the checksum
        let payload = bytes.saturating_sub(6 + 64 + 8);
        let is = ix.summary();
        let log_sigma = (usize::BITS - is.alphabet.saturating_sub(1).leading_zeros()).max(1) as usize;
        let w = (usize::BITS - is.states.leading_zeros()) as usize;
        let reference_bits = (is.label_length * log_sigma + is.edges * w).max(1);
        println!(
            "{}\t{bytes}\t{}\t{:.3}\t{}\t{payload}\t{:.2}",
            if sentinel { "sentinel" } else { "plain" },
            budget_bits / 8,
            (bytes * 8) as f64 / budget_bits as f64,
            if bytes * 8 <= budget_bits { "yes" } else { "no" },
            (bytes * 8) as f64 / reference_bits as f64
        );
    }
    Ok(())
}

/// Substrings of random walks of length exactly `m` where possible, else
/// random strings over the alphabet.
fn bench_patterns(
    a: &GeneralizedAutomaton,
    rng: &mut ChaCha8Rng,
    count: usize,
    m: usize,
) -> Vec<Vec<u8>> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let walks: Vec<Vec<u8>> = oracle::sample_walk_strings(a, rng, 64, m)
        .into_iter()
        .filter(|w| w.len() == m)
        .collect();
    let alphabet = a.alphabet();
    (0..count)
        .map(|_| match walks.choose(rng) {
            Some(w) => w.clone(),
            None if alphabet.is_empty() => vec![b'a'; m],
            None => (0..m).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect(),
        })
        .collect()
}

/// Best of five runs, each repeated until 20 ms have passed.
fn time_ns(mut f: impl FnMut()) -> f64 {
    let mut best = f64::MAX;
    for _ in 0..5 {
        let start = Instant::now();
        let mut iters = 0u32;
        while start.elapsed().as_millis() < 20 {
            f();
            iters += 1;
        }
        best = best.min(start.elapsed().as_nanos() as f64 / iters as f64);
    }
    best
}

fn generate(out: &Path, seed: u64, count: u64, tiny: bool, patterns: usize) -> Outcome {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let params = if tiny { GenParams::tiny() } else { GenParams::default() };
    let prefix = if tiny { "tiny" } else { "gen" };
    for s in seed..seed + count {
        let a = oracle::generate_instance(s, &params).map_err(|e| Failure::Invalid(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(s ^ 0x5eed);
        let ps = oracle::probe_patterns(&a, &mut rng, patterns, if tiny { 6 } else { 10 });
        let base = out.join(format!("{prefix}-{s:04}"));
        let text = format!(
            "# random Wheeler instance, seed {s}{}\n{}",
            if tiny { ", tiny" } else { "" },
            a.to_text().trim_start_matches("gnfa 1\n")
        );
        fs::write(base.with_extension("gnfa"), format!("gnfa 1\n{text}"))?;
        fs::write(base.with_extension("patterns"), write_patterns(&ps))?;
    }
    eprintln!("wrote {count} instances to {}", out.display());
    Ok(())
}
