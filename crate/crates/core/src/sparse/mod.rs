//! Distributed enumeration of cliques, 4-cycles and 5-cycles in graphs of
//! bounded degeneracy.
//!
//! The CONGEST pipeline first computes an acyclic orientation by peeling:
//! in iteration `i` every surviving node with at most `C·d` surviving
//! neighbours leaves. Each node then broadcasts its out-neighbourhood (and,
//! for 5-cycles, its outgoing 2-paths) and lists copies in what it has seen.

mod congest;
pub mod local;
mod supported;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gen;
use crate::graph::{exact_d_orientation, Graph, NodeId, OracleError, Orientation, OrientationError, SubgraphCopy};
use crate::sim::{metrics, run, Metrics, Phased, SimConfig, SimError};
pub use congest::SparseOutput;
use congest::{Schedule, SparseNode};
use supported::{Shared, SupportedNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SparseError {
    #[error("parameter out of range: {0}")]
    Guard(String),
    #[error("degeneracy bound violated: node {node} survived all {iterations} peeling iterations")]
    DegeneracyViolated { node: NodeId, iterations: usize },
    #[error("input is not a subgraph of the support: {0}")]
    NotSubgraph(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Orientation(#[from] OrientationError),
    #[error("node {node} reported an invalid copy: {source}")]
    InvalidCopy { node: NodeId, source: OracleError },
}

/// The peeling threshold `C = num / den > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeelConstant {
    num: u64,
    den: u64,
}

impl Default for PeelConstant {
    fn default() -> Self {
        PeelConstant { num: 3, den: 1 }
    }
}

impl PeelConstant {
    pub fn new(num: u64, den: u64) -> Result<Self, SparseError> {
        if den == 0 || num <= 2 * den {
            return Err(SparseError::Guard(format!("C = {num}/{den} must be greater than 2")));
        }
        let g = gcd(num, den);
        Ok(PeelConstant {
            num: num / g,
            den: den / g,
        })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌈C·d⌉`, the outdegree bound.
    pub fn alpha(self, d: usize) -> usize {
        (self.num * d as u64).div_ceil(self.den) as usize
    }

    /// `deg <= C·d`.
    pub fn at_most(self, deg: usize, d: usize) -> bool {
        deg as u64 * self.den <= self.num * d as u64
    }

    /// `next <= (2 / C) · prev`.
    pub fn shrinks(self, prev: usize, next: usize) -> bool {
        next as u64 * self.num <= 2 * self.den * prev as u64
    }

    /// `⌈log_{C/2} n⌉ + 1` iterations always suffice on a `d`-degenerate graph.
    pub fn iterations(self, n: usize) -> usize {
        if n <= 1 {
            return 1;
        }
        let ratio = self.num as f64 / (2 * self.den) as f64;
        let t = ((n as f64).ln() / ratio.ln() - 1e-9).ceil().max(0.0) as usize;
        t + 1
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for PeelConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for PeelConstant {
    type Err = SparseError;

    /// Accepts `3`, `5/2` or `2.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SparseError::Guard(format!("cannot parse `{s}` as a rational constant"));
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b.trim().parse().map_err(|_| bad())?;
            return PeelConstant::new(a, b);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            return PeelConstant::new(int * den + frac, den);
        }
        PeelConstant::new(s.trim().parse().map_err(|_| bad())?, 1)
    }
}

/// Per-run record of the peeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelState {
    pub c: PeelConstant,
    pub d: usize,
    pub alpha: usize,
    /// Iterations scheduled (the public bound).
    pub iteration_bound: usize,
    /// `i_v` for every node.
    pub last_iteration: BTreeMap<NodeId, usize>,
    /// `|V_0|, |V_1|, ...` down to the first empty level.
    pub iteration_sizes: Vec<usize>,
}

impl PeelState {
    /// Iterations that removed at least one node.
    pub fn iterations_used(&self) -> usize {
        self.iteration_sizes.len().saturating_sub(1)
    }

    pub fn shrinkage_holds(&self) -> bool {
        self.iteration_sizes.windows(2).all(|w| self.c.shrinks(w[0], w[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Target {
    Clique(usize),
    C4,
    C5,
}

impl Target {
    pub fn graph(self) -> Graph {
        match self {
            Target::Clique(k) => gen::complete(k),
            Target::C4 => gen::cycle(4),
            Target::C5 => gen::cycle(5),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Clique(k) => write!(f, "clique{k}"),
            Target::C4 => write!(f, "c4"),
            Target::C5 => write!(f, "c5"),
        }
    }
}

/// Enumerated copies with every node that reported each of them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CopySet {
    copies: BTreeMap<SubgraphCopy, BTreeSet<NodeId>>,
}

impl CopySet {
    pub fn insert(&mut self, copy: SubgraphCopy, reporter: NodeId) {
        self.copies.entry(copy).or_default().insert(reporter);
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn copies(&self) -> BTreeSet<SubgraphCopy> {
        self.copies.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SubgraphCopy, &BTreeSet<NodeId>)> {
        self.copies.iter()
    }

    /// Smallest reporting node.
    pub fn owner(&self, copy: &SubgraphCopy) -> Option<NodeId> {
        self.copies.get(copy).and_then(|r| r.first().copied())
    }

    pub fn reporters(&self, copy: &SubgraphCopy) -> Option<&BTreeSet<NodeId>> {
        self.copies.get(copy)
    }

    /// Total number of reports, counting duplicates.
    pub fn report_count(&self) -> usize {
        self.copies.values().map(BTreeSet::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    pub c: PeelConstant,
    /// Report each cycle from a single node.
    pub dedup: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            c: PeelConstant::default(),
            dedup: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnumResult {
    pub copies: CopySet,
    pub orientation: Orientation,
    /// Absent in the supported model, where orienting is free.
    pub peel: Option<PeelState>,
    pub metrics: Metrics,
    pub budget: usize,
}

fn schedule(g: &Graph, d: usize, c: PeelConstant, target: Option<Target>, dedup: bool, cfg: &SimConfig) -> Result<Schedule, SparseError> {
    let wire = cfg.wire(g)?;
    let alpha = c.alpha(d);
    Ok(Schedule {
        d,
        c,
        alpha,
        iterations: c.iterations(wire.n),
        target,
        dedup,
        nout_cap: wire.cap(wire.ids_bits(alpha)),
        lpaths_cap: wire.cap(wire.count_width(alpha * alpha) + alpha * alpha * 2 * wire.id_width),
        id_cap: wire.cap(wire.id_width),
    })
}

impl Schedule {
    fn budget(&self) -> usize {
        let mut b = self.id_cap + self.iterations;
        if self.target.is_some() {
            b += self.nout_cap;
        }
        if self.target == Some(Target::C5) {
            b += self.lpaths_cap;
        }
        b
    }
}

struct Peeled {
    outputs: Vec<SparseOutput>,
    orientation: Orientation,
    peel: PeelState,
    metrics: Metrics,
    budget: usize,
}

fn run_sparse(g: &Graph, s: Schedule, cfg: &SimConfig) -> Result<Peeled, SparseError> {
    let s = Arc::new(s);
    let t = run(g, cfg, |ctx| Phased::new(&ctx, SparseNode::new(ctx, Arc::clone(&s))))?;
    let mut last_iteration = BTreeMap::new();
    for (a, out) in t.node_outputs.iter().enumerate() {
        match out.iteration {
            Some(i) => {
                last_iteration.insert(g.id(a), i);
            }
            None => {
                return Err(SparseError::DegeneracyViolated {
                    node: g.id(a),
                    iterations: s.iterations,
                })
            }
        }
    }
    let arcs = t
        .node_outputs
        .iter()
        .enumerate()
        .flat_map(|(a, out)| out.out_ids.iter().map(move |&w| (g.id(a), w)));
    let orientation = Orientation::from_arcs(g, arcs)?;
    let top = last_iteration.values().copied().max().map_or(0, |m| m + 1);
    let iteration_sizes = (0..=top)
        .map(|i| last_iteration.values().filter(|&&x| x >= i).count())
        .collect();
    Ok(Peeled {
        metrics: metrics(&t),
        budget: s.budget(),
        outputs: t.node_outputs,
        orientation,
        peel: PeelState {
            c: s.c,
            d: s.d,
            alpha: s.alpha,
            iteration_bound: s.iterations,
            last_iteration,
            iteration_sizes,
        },
    })
}

/// Peeling orientation: acyclic with outdegree at most `⌈C·d⌉` when `g` is
/// `d`-degenerate.
pub fn distributed_orientation(
    g: &Graph,
    d: usize,
    c: PeelConstant,
    cfg: &SimConfig,
) -> Result<(Orientation, PeelState, Metrics), SparseError> {
    let p = run_sparse(g, schedule(g, d, c, None, false, cfg)?, cfg)?;
    Ok((p.orientation, p.peel, p.metrics))
}

fn to_copy(g: &Graph, target: Target, node: NodeId, seq: &[NodeId]) -> Result<SubgraphCopy, SparseError> {
    let h = target.graph();
    let mapping = h.ids().iter().copied().zip(seq.iter().copied());
    SubgraphCopy::new(&h, g, mapping).map_err(|source| SparseError::InvalidCopy { node, source })
}

fn collect(g: &Graph, target: Target, reports: impl IntoIterator<Item = (NodeId, Vec<Vec<NodeId>>)>) -> Result<CopySet, SparseError> {
    let mut set = CopySet::default();
    for (node, list) in reports {
        for seq in list {
            set.insert(to_copy(g, target, node, &seq)?, node);
        }
    }
    Ok(set)
}

fn check_target(target: Target, d: usize) -> Result<(), SparseError> {
    if let Target::Clique(k) = target {
        if k == 0 || k > d + 1 {
            return Err(SparseError::Guard(format!(
                "clique size k = {k} must be in 1..={} for d = {d}",
                d + 1
            )));
        }
    }
    Ok(())
}

/// CONGEST enumeration of `target` copies on a `d`-degenerate graph.
pub fn enumerate(
    g: &Graph,
    target: Target,
    d: usize,
    opts: EnumOptions,
    cfg: &SimConfig,
) -> Result<EnumResult, SparseError> {
    check_target(target, d)?;
    let p = run_sparse(g, schedule(g, d, opts.c, Some(target), opts.dedup, cfg)?, cfg)?;
    let copies = collect(
        g,
        target,
        p.outputs.into_iter().enumerate().map(|(a, o)| (g.id(a), o.reports)),
    )?;
    Ok(EnumResult {
        copies,
        orientation: p.orientation,
        peel: Some(p.peel),
        metrics: p.metrics,
        budget: p.budget,
    })
}

/// Each `k`-clique is reported by its sink.
pub fn enumerate_cliques(g: &Graph, k: usize, d: usize, cfg: &SimConfig) -> Result<EnumResult, SparseError> {
    enumerate(g, Target::Clique(k), d, EnumOptions::default(), cfg)
}

pub fn enumerate_c4(g: &Graph, d: usize, cfg: &SimConfig) -> Result<EnumResult, SparseError> {
    enumerate(g, Target::C4, d, EnumOptions::default(), cfg)
}

pub fn enumerate_c5(g: &Graph, d: usize, cfg: &SimConfig) -> Result<EnumResult, SparseError> {
    enumerate(g, Target::C5, d, EnumOptions::default(), cfg)
}

/// The orientation every node derives from the public support, at no cost.
pub fn supported_orientation(support: &Graph) -> Orientation {
    exact_d_orientation(support)
}

/// Rounds used by the supported pipeline for a support of outdegree `d`.
pub fn supported_budget(support: &Graph, target: Target, cfg: &SimConfig) -> Result<usize, SparseError> {
    let wire = cfg.wire(support)?;
    let d = supported_orientation(support).max_outdeg();
    let mut b = wire.cap(d);
    if target == Target::C5 {
        b += wire.cap(d * d);
    }
    Ok(b)
}

/// Enumeration in the supported model: communication runs over `support`,
/// copies are those of `input`.
pub fn supported_enumerate(
    support: &Graph,
    input: &Graph,
    target: Target,
    dedup: bool,
    cfg: &SimConfig,
) -> Result<EnumResult, SparseError> {
    if let Some(&x) = input.ids().iter().find(|&&x| support.index_of(x).is_none()) {
        return Err(SparseError::NotSubgraph(format!("node {x} is not in the support")));
    }
    if let Some((u, v)) = input.edge_ids().find(|&(u, v)| !support.has_edge(u, v)) {
        return Err(SparseError::NotSubgraph(format!("edge {{{u}, {v}}} is not in the support")));
    }
    if target == Target::Clique(0) {
        return Err(SparseError::Guard("clique size must be positive".into()));
    }
    let orient = supported_orientation(support);
    let wire = cfg.wire(support)?;
    let d = orient.max_outdeg();
    let sh = Arc::new(Shared {
        support: support.clone(),
        orient,
        target,
        dedup,
        edge_cap: wire.cap(d),
        path_cap: wire.cap(d * d),
    });
    let t = run(support, cfg, |ctx| {
        let input_bits = support
            .neighbor_ids(support.index_of(ctx.id).expect("support node"))
            .map(|u| input.has_edge(ctx.id, u))
            .collect();
        Phased::new(&ctx, SupportedNode::new(&ctx, Arc::clone(&sh), input_bits))
    })?;
    let copies = collect(
        input,
        target,
        t.node_outputs
            .iter()
            .enumerate()
            .map(|(a, r)| (support.id(a), r.clone())),
    )?;
    let orientation = sh.orient.restrict(input)?;
    Ok(EnumResult {
        copies,
        orientation,
        peel: None,
        metrics: metrics(&t),
        budget: supported_budget(support, target, cfg)?,
    })
}
