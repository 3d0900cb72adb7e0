//! Deterministic graph generators.
//!
//! Random graphs use [`SplitMix64`], a fully specified 64-bit generator, so
//! that the same `(n, p, seed)` produces the same graph in any language:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! return z ^ (z >> 31)
//! ```
//!
//! A uniform float is `(next() >> 11) * 2^-53`. `G(n, p)` visits the pairs
//! `(u, v)`, `u < v`, in lexicographic order and keeps a pair iff the next
//! float is `< p`.

use crate::graph::{Graph, NodeId};

/// SplitMix64 pseudo-random generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` (`bound > 0`), by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

fn build(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Graph {
    Graph::new(0..n as NodeId, edges).expect("generator produced a simple graph")
}

/// Path on `n` nodes `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    build(n, (1..n as NodeId).map(|i| (i - 1, i)))
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 nodes");
    build(n, (0..n as NodeId).map(|i| (i, (i + 1) % n as NodeId)))
}

pub fn complete(n: usize) -> Graph {
    build(
        n,
        (0..n as NodeId).flat_map(|u| (u + 1..n as NodeId).map(move |v| (u, v))),
    )
}

/// `K_{a,b}` with left side `0..a` and right side `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let (a, b) = (a as NodeId, b as NodeId);
    build(
        (a + b) as usize,
        (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))),
    )
}

/// Star with centre `0` and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves as NodeId).map(|i| (0, i)))
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    build(10, outer.chain(spokes).chain(inner))
}

/// `dim`-dimensional hypercube.
pub fn hypercube(dim: u32) -> Graph {
    let n: NodeId = 1 << dim;
    build(
        n as usize,
        (0..n).flat_map(|u| (0..dim).map(move |b| (u, u ^ (1 << b))).filter(|&(u, v)| u < v)),
    )
}

/// Erdős–Rényi `G(n, p)`; see the module docs for the exact procedure.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    build(n, edges)
}

/// Random graph with degeneracy at most `d`: node `v` links to
/// `min(v, d)` distinct earlier nodes chosen uniformly, which is a random
/// acyclic `d`-orientation with the directions forgotten.
pub fn random_degenerate(n: usize, d: usize, seed: u64) -> Graph {
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for v in 0..n as NodeId {
        let want = d.min(v as usize);
        let mut picked: Vec<NodeId> = Vec::with_capacity(want);
        while picked.len() < want {
            let u = rng.below(v);
            if !picked.contains(&u) {
                picked.push(u);
            }
        }
        edges.extend(picked.into_iter().map(|u| (u, v)));
    }
    build(n, edges)
}

/// Keeps each edge of `g` independently with probability `p`.
pub fn random_edge_subset(g: &Graph, p: f64, seed: u64) -> Graph {
    let mut rng = SplitMix64::new(seed);
    let edges: Vec<_> = g.edge_ids().filter(|_| rng.next_f64() < p).collect();
    Graph::with_id_exponent(g.ids().iter().copied(), edges, None).expect("subgraph of a valid graph")
}
