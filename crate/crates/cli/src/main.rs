use std::fmt;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use wmgraph::analysis::{
    collision_sets, collisions_csv, recovery_csv, timing_bench, timing_csv, verify_recovery_exhaustive,
};
use wmgraph::attack::{apply_attack, random_attack, AttackKind, AttackSpec};
use wmgraph::graph::to_dot;
use wmgraph::recovery::{detect, recover, DamageClass};
use wmgraph::{decode_fast, decode_via_permutation, encode, recognize, Digraph, RecoveryError};

const REJECT: u8 = 1;
const AMBIGUOUS: u8 = 2;
const OUT_OF_CONTRACT: u8 = 3;
const USAGE: u8 = 4;

/// An error that maps to a specific exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl fmt::Display for Exit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn exit(code: u8, msg: impl Into<String>) -> anyhow::Error {
    Exit(code, msg.into()).into()
}

#[derive(Parser)]
#[command(name = "wmgraph", version, about = "Encode, decode, attack and repair graph watermarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Graph file; stdin when omitted.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<Digraph> {
        let text = match &self.input {
            Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
            None => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).context("reading stdin")?;
                s
            }
        };
        Digraph::from_text(&text).map_err(|e| exit(USAGE, format!("bad graph: {e}")))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the watermark of a key.
    Encode {
        #[arg(long)]
        key: u64,
        /// Graphviz output instead of the edge list.
        #[arg(long)]
        dot: bool,
    },
    /// Print the key of a watermark (any vertex labeling).
    Decode {
        #[command(flatten)]
        input: Input,
        /// Also run the permutation decoder and fail on disagreement.
        #[arg(long)]
        oracle: bool,
    },
    /// Accept or reject a graph as a watermark.
    Recognize {
        #[command(flatten)]
        input: Input,
    },
    /// Damage a graph with an attack spec or a random attack.
    Attack {
        #[command(flatten)]
        input: Input,
        /// File of `remove u v` / `insert u v` lines.
        #[arg(long, conflicts_with_all = ["random", "kind"])]
        spec: Option<PathBuf>,
        /// Number of random modifications.
        #[arg(long, value_name = "K", requires = "kind")]
        random: Option<usize>,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<AttackKind>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep the original vertex identifiers.
        #[arg(long)]
        no_shuffle: bool,
    },
    /// Restore a damaged watermark; the report goes to stderr.
    Recover {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        n: usize,
    },
    #[command(subcommand)]
    Analyze(Analyze),
    /// Decoder timing as CSV.
    Bench {
        /// Comma-separated key sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [20usize, 40])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Analyze {
    /// Keys within k edges of another key of the same size, as CSV.
    Collisions {
        #[arg(long, value_parser = parse_range, default_value = "2..16")]
        n: RangeInclusive<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5])]
        k: Vec<usize>,
    },
    /// Recover from every removal attack of the given sizes, as CSV.
    Recovery {
        #[arg(long, value_parser = parse_range, default_value = "3..7")]
        n: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_kind, default_value = "removals")]
        kind: AttackKind,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
        k: Vec<usize>,
    },
}

fn parse_kind(s: &str) -> Result<AttackKind, String> {
    s.parse()
}

/// `A..B` (inclusive) or a single `A`.
fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => (num(s)?, num(s)?),
    };
    if a == 0 || a > b {
        return Err(format!("empty or invalid range `{s}`"));
    }
    Ok(a..=b)
}

fn run(cli: Cli) -> Result<()> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Encode { key, dot } => {
            let w = encode(key).map_err(|e| exit(USAGE, e.to_string()))?;
            let g = w.to_digraph();
            out.write_all(if dot { to_dot(&g) } else { g.to_text() }.as_bytes())?;
        }
        Command::Decode { input, oracle } => {
            let g = input.read()?;
            let rec = recognize(&g).map_err(|e| exit(REJECT, format!("not a watermark: {e}")))?;
            let key = decode_fast(&g.relabel(&rec.labeling.sigma))?;
            if oracle {
                let other = decode_via_permutation(&g).map_err(|e| exit(REJECT, e.to_string()))?;
                if other != key {
                    return Err(exit(REJECT, format!("decoders disagree: {key} vs {other}")));
                }
            }
            writeln!(out, "{key}")?;
        }
        Command::Recognize { input } => {
            let g = input.read()?;
            match recognize(&g) {
                Ok(r) => {
                    let key = decode_fast(&g.relabel(&r.labeling.sigma))?;
                    writeln!(out, "accept n={} key={key} tree={:?}", r.n(), r.kind)?;
                }
                Err(e) => {
                    writeln!(out, "reject: {e}")?;
                    return Err(exit(REJECT, ""));
                }
            }
        }
        Command::Attack { input, spec, random, kind, seed, no_shuffle } => {
            let g = input.read()?;
            let spec = match (spec, random, kind) {
                (Some(path), _, _) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let s = AttackSpec::from_text(&text).map_err(|e| exit(USAGE, e.to_string()))?;
                    if s.seed.is_some() { s } else { s.with_seed(seed) }
                }
                (None, Some(k), Some(kind)) => {
                    random_attack(&g, k, kind, seed).map_err(|e| exit(USAGE, e.to_string()))?
                }
                _ => return Err(exit(USAGE, "give --spec FILE or --random K --kind KIND")),
            };
            let damaged = apply_attack(&g, &spec, !no_shuffle).map_err(|e| exit(USAGE, e.to_string()))?;
            out.write_all(damaged.graph.to_text().as_bytes())?;
        }
        Command::Recover { input, n } => {
            let g = input.read()?;
            if g.vertex_count() != 2 * n + 3 {
                return Err(exit(USAGE, format!("--n {n} needs {} vertices, graph has {}", 2 * n + 3, g.vertex_count())));
            }
            let report = detect(&g, n)?;
            eprint!("{}", report.to_record());
            if report.class == DamageClass::OutOfContract {
                return Err(exit(OUT_OF_CONTRACT, format!("edge delta {} is out of contract", report.k)));
            }
            match recover(&g, n) {
                Ok(r) if r.ambiguous() => {
                    eprint!("{}", r.to_record());
                    return Err(exit(AMBIGUOUS, "several keys explain the damage"));
                }
                Ok(r) => {
                    eprint!("{}", r.to_record());
                    out.write_all(r.watermark.to_digraph().to_text().as_bytes())?;
                }
                Err(e @ RecoveryError::SizeMismatch { .. }) => return Err(exit(USAGE, e.to_string())),
                Err(e) => return Err(exit(OUT_OF_CONTRACT, e.to_string())),
            }
        }
        Command::Analyze(Analyze::Collisions { n, k }) => {
            let sets: Vec<_> = n.flat_map(|n| k.iter().map(move |&k| collision_sets(n, k))).collect();
            out.write_all(collisions_csv(&sets).as_bytes())?;
        }
        Command::Analyze(Analyze::Recovery { n, kind, k }) => {
            let kinds: Vec<_> = k.iter().map(|&k| (kind, k)).collect();
            let rows = verify_recovery_exhaustive(n, &kinds);
            out.write_all(recovery_csv(&rows).as_bytes())?;
            if let Some(row) = rows.iter().find(|r| r.failures > 0) {
                let example = row.first_failure.clone().unwrap_or_default();
                return Err(exit(REJECT, format!("{} failures at n={}; first:\n{example}", row.failures, row.n)));
            }
        }
        Command::Bench { n, samples, seed } => {
            let rows = timing_bench(&n, samples, seed).map_err(|e| exit(USAGE, e.to_string()))?;
            out.write_all(timing_csv(&rows).as_bytes())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = std::env::var("WMGRAPH_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = match e.downcast_ref::<Exit>() {
                Some(Exit(code, msg)) => {
                    if !msg.is_empty() {
                        eprintln!("wmgraph: {msg}");
                    }
                    *code
                }
                None => {
                    eprintln!("wmgraph: {e:#}");
                    USAGE
                }
            };
            ExitCode::from(code)
        }
    }
}
