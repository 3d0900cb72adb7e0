//! `bench`: one CSV row per generated graph.
//!
//! Paths and cycles run on `G(n, p)`; the enumeration suites run on
//! [`gen::random_degenerate`] graphs. Both use the seeded SplitMix64
//! generator, so a row depends only on its flags.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use anyhow::{Context, Result};
use bcongest::detect;
use bcongest::gen;
use bcongest::graph::degeneracy;
use bcongest::sim::SimConfig;
use bcongest::sparse::{self, EnumOptions, Target};
use clap::{Args, ValueEnum};

use crate::check::{self, Expect};
use crate::Model;

pub const CSV_HEADER: &str = "n,m,d,k,target,model,rounds,budget,max_bits,total_bits,agreement";

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Paths,
    Cycles,
    Cliques,
    C4,
    C5,
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Comma-separated seeds.
    #[arg(long, value_delimiter = ',', required = true)]
    seeds: Vec<u64>,
    /// Path length (edges), cycle length or clique size.
    #[arg(long)]
    k: Option<usize>,
    /// Edge probability for the path and cycle suites.
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Comma-separated degeneracies for the enumeration suites.
    #[arg(long, value_delimiter = ',', default_value = "3")]
    degeneracies: Vec<usize>,
    #[arg(long, value_enum, default_value = "congest")]
    model: Model,
    /// Skip the oracle comparison (the agreement column stays empty).
    #[arg(long)]
    no_check: bool,
    #[arg(long, default_value_t = 16)]
    bandwidth_factor: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct Cell {
    n: usize,
    seed: u64,
    d: usize,
}

struct Row {
    n: usize,
    m: usize,
    d: usize,
    k: usize,
    target: String,
    model: &'static str,
    rounds: usize,
    budget: usize,
    max_bits: usize,
    total_bits: u64,
    agreement: Option<bool>,
}

impl Row {
    fn csv(&self) -> String {
        let agreement = self.agreement.map_or(String::new(), |a| a.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.d,
            self.k,
            self.target,
            self.model,
            self.rounds,
            self.budget,
            self.max_bits,
            self.total_bits,
            agreement
        )
    }
}

fn default_k(s: Suite) -> usize {
    match s {
        Suite::Paths => 4,
        Suite::Cycles | Suite::C5 => 5,
        Suite::Cliques => 3,
        Suite::C4 => 4,
    }
}

fn run_cell(a: &BenchArgs, cell: Cell) -> Result<Row> {
    let cfg = SimConfig {
        bandwidth_factor: a.bandwidth_factor,
        ..SimConfig::default()
    };
    let k = a.k.unwrap_or_else(|| default_k(a.suite));
    let check = !a.no_check;
    match a.suite {
        Suite::Paths | Suite::Cycles => {
            let g = gen::gnp(cell.n, a.p, cell.seed);
            let (r, target) = if a.suite == Suite::Paths {
                (detect::detect_paths(&g, k, &cfg)?, "path")
            } else {
                (detect::detect_cycles(&g, k, &cfg)?, "cycle")
            };
            let agreement = if check {
                let t = detect::path_target(k);
                let e = if a.suite == Suite::Paths { Expect::Tree(&t) } else { Expect::Cycle(k) };
                Some(check::detection_agrees(&g, &r, e)?)
            } else {
                None
            };
            Ok(Row {
                n: g.n(),
                m: g.m(),
                d: degeneracy(&g).0,
                k,
                target: target.into(),
                model: "congest",
                rounds: r.metrics.rounds_used,
                budget: r.budget,
                max_bits: r.metrics.max_message_bits,
                total_bits: r.metrics.total_bits,
                agreement,
            })
        }
        Suite::Cliques | Suite::C4 | Suite::C5 => {
            let target = match a.suite {
                Suite::Cliques => Target::Clique(k),
                Suite::C4 => Target::C4,
                _ => Target::C5,
            };
            let support = gen::random_degenerate(cell.n, cell.d, cell.seed);
            let (input, r, d, model) = match a.model {
                Model::Congest => {
                    let d = match target {
                        Target::Clique(k) => cell.d.max(k.saturating_sub(1)),
                        _ => cell.d,
                    };
                    let r = sparse::enumerate(&support, target, d, EnumOptions::default(), &cfg)?;
                    (support, r, d, "congest")
                }
                Model::Supported => {
                    let input = gen::random_edge_subset(&support, 0.5, cell.seed ^ 0x5eed);
                    let r = sparse::supported_enumerate(&support, &input, target, false, &cfg)?;
                    let d = degeneracy(&support).0;
                    (input, r, d, "supported")
                }
            };
            let agreement = if check {
                Some(check::enumeration_agrees(&input, target, &r.copies)?)
            } else {
                None
            };
            Ok(Row {
                n: input.n(),
                m: input.m(),
                d,
                k: target.graph().n(),
                target: target.to_string(),
                model,
                rounds: r.metrics.rounds_used,
                budget: r.budget,
                max_bits: r.metrics.max_message_bits,
                total_bits: r.metrics.total_bits,
                agreement,
            })
        }
    }
}

pub fn cmd_bench(a: BenchArgs) -> Result<bool> {
    let ds: &[usize] = match a.suite {
        Suite::Paths | Suite::Cycles => &[0],
        _ => &a.degeneracies,
    };
    let mut cells = Vec::new();
    for &d in ds {
        for &n in &a.sizes {
            for &seed in &a.seeds {
                cells.push(Cell { n, seed, d });
            }
        }
    }

    let threads = a
        .threads
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |p| p.get()))
        .clamp(1, cells.len().max(1));
    let results: Vec<Mutex<Option<Result<Row>>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&cell) = cells.get(i) else { break };
                let row = run_cell(&a, cell);
                *results[i].lock().expect("unpoisoned") = Some(row);
            });
        }
    });

    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut ok = true;
    for (cell, r) in cells.iter().zip(results) {
        let row = r
            .into_inner()
            .expect("unpoisoned")
            .expect("every cell ran")
            .with_context(|| format!("n = {}, seed = {}, d = {}", cell.n, cell.seed, cell.d))?;
        ok &= row.agreement != Some(false) && row.rounds <= row.budget;
        writeln!(out, "{}", row.csv()).expect("writing to a String");
    }
    match &a.output {
        Some(p) => fs::write(p, out).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{out}"),
    }
    Ok(ok)
}
