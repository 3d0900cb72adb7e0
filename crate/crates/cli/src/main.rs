//! `bcongest`: run the distributed detectors and enumerators on graph files,
//! compare them with the brute-force oracle, generate lower-bound instances
//! and produce round-count tables.

mod bench;
mod check;
mod report;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bcongest::detect::{self, budget, order_tree, prepare_pseudotree};
use bcongest::graph::{degeneracy, parse_graph, serialize_graph};
use bcongest::lowerbound::{build_instance, random_sets, verify_instance};
use bcongest::sim::SimConfig;
use bcongest::sparse::{self, EnumOptions, PeelConstant, Target};
use bcongest::{Graph, NodeId};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use check::Expect;
use report::{ConfigReport, GraphSummary, MetricsReport, Outcome, RunReport};

#[derive(Parser)]
#[command(name = "bcongest", version, about = "Broadcast CONGEST subgraph detection and enumeration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect paths, cycles, trees or pseudotrees.
    Detect(DetectArgs),
    /// Enumerate cliques, 4-cycles or 5-cycles.
    Enumerate(EnumerateArgs),
    /// Generate (and optionally verify) a lower-bound instance.
    Genlb(GenlbArgs),
    /// Print a CSV table of round counts.
    Bench(bench::BenchArgs),
}

#[derive(Args, Clone)]
struct SimArgs {
    /// Bandwidth is this factor times ceil(log2 n) bits.
    #[arg(long, default_value_t = 16)]
    bandwidth_factor: usize,
    #[arg(long, default_value_t = 1_000_000)]
    max_rounds: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            bandwidth_factor: self.bandwidth_factor,
            max_rounds: self.max_rounds,
            n_bound: None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Convention {
    /// `k` counts edges.
    Edges,
    /// `k` counts nodes.
    Nodes,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `path`, `cycle`, `tree FILE` or `pseudotree FILE`.
    #[arg(long, num_args = 1..=2, required = true)]
    target: Vec<String>,
    /// Target size; required for paths and cycles.
    #[arg(long)]
    k: Option<usize>,
    /// Only look for cycles through this node.
    #[arg(long)]
    anchor: Option<NodeId>,
    /// Root of a target tree (default: its largest id).
    #[arg(long)]
    root: Option<NodeId>,
    #[arg(long)]
    check: bool,
    #[arg(long, value_enum, default_value = "edges")]
    convention: Convention,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    Congest,
    Supported,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// `clique K`, `c4` or `c5`.
    #[arg(long, num_args = 1..=2, required = true)]
    target: Vec<String>,
    #[arg(long, value_enum, default_value = "congest")]
    model: Model,
    /// Support graph for the supported model.
    #[arg(long)]
    support: Option<PathBuf>,
    /// Report every cycle from a single node.
    #[arg(long)]
    dedup: bool,
    #[arg(long)]
    check: bool,
    /// Degeneracy bound handed to the nodes (default: exact degeneracy).
    #[arg(long)]
    d: Option<usize>,
    /// Peeling constant, e.g. `3`, `5/2` or `2.5`.
    #[arg(long, default_value = "3")]
    c: PeelConstant,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Args)]
struct GenlbArgs {
    #[arg(long)]
    k: usize,
    #[arg(long = "N")]
    n: usize,
    /// Comma-separated elements of 1..=N².
    #[arg(long = "A", requires = "b")]
    a: Option<String>,
    #[arg(long = "B", requires = "a")]
    b: Option<String>,
    #[arg(long, conflicts_with_all = ["a", "b", "random_intersecting"])]
    random_disjoint: bool,
    #[arg(long, conflicts_with_all = ["a", "b"])]
    random_intersecting: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.txt (graph) and PREFIX.json (metadata).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verify: bool,
    /// Also run distributed cycle detection on the instance.
    #[arg(long)]
    detect: bool,
    #[arg(long, default_value_t = 16)]
    bandwidth_factor: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(a) => cmd_detect(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Genlb(a) => cmd_genlb(a),
        Command::Bench(a) => bench::cmd_bench(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn command_echo() -> Vec<String> {
    std::env::args().skip(1).collect()
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_detect(a: DetectArgs) -> Result<bool> {
    let g = read_graph(&a.graph)?;
    let cfg = a.sim.config();
    let kind = a.target[0].as_str();
    let file = a.target.get(1);
    let need_k = || a.k.context("--k is required for this target");
    let mut config = ConfigReport {
        bandwidth_factor: cfg.bandwidth_factor,
        target: kind.to_string(),
        k: a.k,
        anchor: a.anchor,
        ..ConfigReport::default()
    };

    let (result, budget, agreement) = match (kind, file) {
        ("path", None) => {
            let k = need_k()?;
            let edges = match a.convention {
                Convention::Edges => k,
                Convention::Nodes => k.checked_sub(1).context("a path needs at least one node")?,
            };
            config.convention = Some(
                match a.convention {
                    Convention::Edges => "edges",
                    Convention::Nodes => "nodes",
                }
                .into(),
            );
            let r = detect::detect_paths(&g, edges, &cfg)?;
            let agree = if a.check {
                let t = detect::path_target(edges);
                Some(check::detection_agrees(&g, &r, Expect::Tree(&t))?)
            } else {
                None
            };
            (r, budget::paths(&g, edges, &cfg)?, agree)
        }
        ("cycle", None) => {
            let k = need_k()?;
            let (r, b) = match a.anchor {
                Some(w) => (detect::detect_cycles_fixed(&g, k, w, &cfg)?, budget::cycles(&g, k, false, &cfg)?),
                None => (detect::detect_cycles(&g, k, &cfg)?, budget::cycles(&g, k, true, &cfg)?),
            };
            let agree = if a.check {
                let e = match a.anchor {
                    Some(w) => Expect::AnchoredCycle(k, w),
                    None => Expect::Cycle(k),
                };
                Some(check::detection_agrees(&g, &r, e)?)
            } else {
                None
            };
            (r, b, agree)
        }
        ("tree", Some(f)) => {
            let h = read_graph(Path::new(f))?;
            check_k(a.k, h.n())?;
            let t = order_tree(&h, a.root)?;
            let r = detect::detect_tree(&g, &t, &cfg)?;
            let agree = if a.check {
                Some(check::detection_agrees(&g, &r, Expect::Tree(&t))?)
            } else {
                None
            };
            (r, budget::tree(&g, &t, &cfg)?, agree)
        }
        ("pseudotree", Some(f)) => {
            let h = read_graph(Path::new(f))?;
            check_k(a.k, h.n())?;
            let p = prepare_pseudotree(&h)?;
            let r = detect::detect_pseudotree(&g, &p, &cfg)?;
            let agree = if a.check {
                Some(check::detection_agrees(&g, &r, Expect::Pseudotree(&p))?)
            } else {
                None
            };
            (r, budget::pseudotree(&g, &p, &cfg)?, agree)
        }
        _ => bail!("--target must be `path`, `cycle`, `tree FILE` or `pseudotree FILE`"),
    };

    let report = RunReport {
        command: command_echo(),
        graph: GraphSummary::of(&g),
        result: Outcome::detection(&result),
        metrics: MetricsReport::new(&result.metrics, budget),
        oracle_agreement: agreement,
        config,
    };
    emit(&report, a.sim.output.as_deref())?;
    Ok(report.passed())
}

fn check_k(k: Option<usize>, nodes: usize) -> Result<()> {
    match k {
        Some(k) if k != nodes => bail!("--k {k} does not match the target, which has {nodes} nodes"),
        _ => Ok(()),
    }
}

fn parse_target(words: &[String]) -> Result<Target> {
    match words {
        [t] if t == "c4" => Ok(Target::C4),
        [t] if t == "c5" => Ok(Target::C5),
        [t, k] if t == "clique" => Ok(Target::Clique(k.parse().context("clique size must be an integer")?)),
        _ => bail!("--target must be `clique K`, `c4` or `c5`"),
    }
}

fn cmd_enumerate(a: EnumerateArgs) -> Result<bool> {
    let g = read_graph(&a.graph)?;
    let cfg = a.sim.config();
    let target = parse_target(&a.target)?;
    let mut config = ConfigReport {
        bandwidth_factor: cfg.bandwidth_factor,
        target: target.to_string(),
        dedup: Some(a.dedup),
        ..ConfigReport::default()
    };
    if let Target::Clique(k) = target {
        config.k = Some(k);
    }
    let r = match a.model {
        Model::Congest => {
            if a.support.is_some() {
                bail!("--support only applies to --model supported");
            }
            let d = a.d.unwrap_or_else(|| degeneracy(&g).0);
            // No clique of a d-degenerate graph has more than d + 1 nodes.
            let d = match target {
                Target::Clique(k) if a.d.is_none() => d.max(k.saturating_sub(1)),
                _ => d,
            };
            config.model = Some("congest".into());
            config.c = Some(a.c.to_string());
            config.d = Some(d);
            sparse::enumerate(&g, target, d, EnumOptions { c: a.c, dedup: a.dedup }, &cfg)?
        }
        Model::Supported => {
            let path = a.support.as_deref().context("--model supported requires --support FILE")?;
            let support = read_graph(path)?;
            config.model = Some("supported".into());
            config.d = Some(degeneracy(&support).0);
            sparse::supported_enumerate(&support, &g, target, a.dedup, &cfg)?
        }
    };
    let agreement = if a.check {
        Some(check::enumeration_agrees(&g, target, &r.copies)?)
    } else {
        None
    };
    let report = RunReport {
        command: command_echo(),
        graph: GraphSummary::of(&g),
        result: Outcome::enumeration(&r.copies),
        metrics: MetricsReport::new(&r.metrics, r.budget),
        oracle_agreement: agreement,
        config,
    };
    emit(&report, a.sim.output.as_deref())?;
    Ok(report.passed())
}

fn parse_set(s: &str) -> Result<BTreeSet<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("bad set element `{t}`")))
        .collect()
}

#[derive(Serialize)]
struct GenlbReport {
    command: Vec<String>,
    k: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "A")]
    a: Vec<usize>,
    #[serde(rename = "B")]
    b: Vec<usize>,
    nodes: usize,
    edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    files: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<bcongest::lowerbound::LbReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detection: Option<GenlbDetection>,
}

#[derive(Serialize)]
struct GenlbDetection {
    found: bool,
    expected: bool,
    rounds_used: usize,
    budget: usize,
}

fn cmd_genlb(a: GenlbArgs) -> Result<bool> {
    let (sa, sb) = match (&a.a, &a.b) {
        (Some(x), Some(y)) => (parse_set(x)?, parse_set(y)?),
        _ if a.random_disjoint => random_sets(a.n, false, a.seed),
        _ if a.random_intersecting => random_sets(a.n, true, a.seed),
        _ => bail!("give --A and --B, --random-disjoint or --random-intersecting"),
    };
    let inst = build_instance(a.k, a.n, &sa, &sb)?;
    let mut ok = true;

    let files = match &a.out {
        Some(prefix) => {
            let gpath = PathBuf::from(format!("{}.txt", prefix.display()));
            let mpath = PathBuf::from(format!("{}.json", prefix.display()));
            fs::write(&gpath, serialize_graph(&inst.graph)).with_context(|| format!("writing {}", gpath.display()))?;
            fs::write(&mpath, serde_json::to_string_pretty(&inst)? + "\n")
                .with_context(|| format!("writing {}", mpath.display()))?;
            Some([gpath.display().to_string(), mpath.display().to_string()])
        }
        None => None,
    };

    let verification = if a.verify {
        let r = verify_instance(&inst)?;
        ok &= r.all_passed();
        Some(r)
    } else {
        None
    };

    let detection = if a.detect {
        let cfg = SimConfig {
            bandwidth_factor: a.bandwidth_factor,
            ..SimConfig::default()
        };
        let r = detect::detect_cycles(&inst.graph, a.k, &cfg)?;
        let expected = inst.intersects();
        ok &= r.any_found == expected;
        Some(GenlbDetection {
            found: r.any_found,
            expected,
            rounds_used: r.metrics.rounds_used,
            budget: r.budget,
        })
    } else {
        None
    };

    let report = GenlbReport {
        command: command_echo(),
        k: a.k,
        n: a.n,
        a: sa.into_iter().collect(),
        b: sb.into_iter().collect(),
        nodes: inst.graph.n(),
        edges: inst.graph.m(),
        files,
        verification,
        detection,
    };
    emit(&report, None)?;
    Ok(ok)
}
