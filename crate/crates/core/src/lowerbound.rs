//! Hard instances for cycle detection built from set disjointness.
//!
//! Two copies `K_A`, `K_B` of `K_{N,N}` carry node labels `1..=2N` (left
//! side `1..=N`, right side `N+1..=2N`); same-label nodes are joined by a
//! cut edge. The edge between left `i` and right `j` is labelled
//! `(i-1)·N + j`. `K_A` keeps the edges labelled by `A`, each subdivided into
//! a path with `⌊k/2⌋ - 1` edges; `K_B` keeps those labelled by `B` with
//! paths of `⌈k/2⌉ - 1` edges. A `k`-cycle exists iff `A ∩ B ≠ ∅`.
//!
//! Node ids: label `t` of `K_A` is `t-1`, label `t` of `K_B` is `2N+t-1`,
//! internal path nodes follow from `4N` upward, `K_A` paths first, each side
//! in label order.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::gen::{self, SplitMix64};
use crate::graph::{degeneracy, is_acyclic, oracle_contains, Graph, NodeId, OracleError, Orientation, SubgraphCopy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LbError {
    #[error("k = {0} is too small, need k >= 6")]
    SmallK(usize),
    #[error("N must be at least 1")]
    ZeroN,
    #[error("set element {element} is outside 1..={max}")]
    Element { element: usize, max: usize },
    #[error("instance too large to verify (k = {k}, N = {n}); limits are k <= 8, N <= 5")]
    TooLarge { k: usize, n: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    A,
    B,
}

/// A kept edge of `K_A` or `K_B` and the path replacing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelledPath {
    pub side: Side,
    pub label: usize,
    /// Endpoint ids, left node first, followed by the internal nodes in path
    /// order.
    pub left: NodeId,
    pub right: NodeId,
    pub internal: Vec<NodeId>,
}

impl LabelledPath {
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut v = vec![self.left];
        v.extend_from_slice(&self.internal);
        v.push(self.right);
        v
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LbInstance {
    #[serde(skip)]
    pub graph: Graph,
    pub k: usize,
    pub n_param: usize,
    pub universe: usize,
    pub a: BTreeSet<usize>,
    pub b: BTreeSet<usize>,
    pub side_a: BTreeSet<NodeId>,
    pub side_b: BTreeSet<NodeId>,
    /// `(K_A node, K_B node)` for every label.
    pub cut_edges: Vec<(NodeId, NodeId)>,
    pub paths: Vec<LabelledPath>,
    pub l1: usize,
    pub l2: usize,
}

/// `(left, right)` endpoints of the edge with this label, as labels.
pub fn label_endpoints(label: usize, n: usize) -> (usize, usize) {
    let i = (label - 1) / n + 1;
    let j = (label - 1) % n + 1;
    (i, n + j)
}

pub fn edge_label(left: usize, right: usize, n: usize) -> usize {
    (left - 1) * n + (right - n)
}

pub fn build_instance(k: usize, n: usize, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Result<LbInstance, LbError> {
    if k < 6 {
        return Err(LbError::SmallK(k));
    }
    if n == 0 {
        return Err(LbError::ZeroN);
    }
    let universe = n * n;
    if let Some(&e) = a.iter().chain(b).find(|&&e| e == 0 || e > universe) {
        return Err(LbError::Element { element: e, max: universe });
    }
    let (l1, l2) = (k / 2, k.div_ceil(2));
    let two_n = 2 * n as NodeId;
    let id_a = |t: usize| t as NodeId - 1;
    let id_b = |t: usize| two_n + t as NodeId - 1;

    let mut ids: Vec<NodeId> = (0..2 * two_n).collect();
    let mut edges = Vec::new();
    let mut side_a: BTreeSet<NodeId> = (0..two_n).collect();
    let mut side_b: BTreeSet<NodeId> = (two_n..2 * two_n).collect();
    let cut_edges: Vec<(NodeId, NodeId)> = (1..=2 * n).map(|t| (id_a(t), id_b(t))).collect();
    edges.extend(cut_edges.iter().copied());

    let mut next = 2 * two_n;
    let mut paths = Vec::new();
    for (side, set, l) in [(Side::A, a, l1), (Side::B, b, l2)] {
        for &label in set {
            let (i, j) = label_endpoints(label, n);
            let (left, right) = match side {
                Side::A => (id_a(i), id_a(j)),
                Side::B => (id_b(i), id_b(j)),
            };
            let internal: Vec<NodeId> = (next..next + (l - 2) as NodeId).collect();
            next += (l - 2) as NodeId;
            ids.extend_from_slice(&internal);
            match side {
                Side::A => side_a.extend(&internal),
                Side::B => side_b.extend(&internal),
            }
            let p = LabelledPath { side, label, left, right, internal };
            edges.extend(p.nodes().windows(2).map(|w| (w[0], w[1])));
            paths.push(p);
        }
    }
    let graph = Graph::new(ids, edges).expect("construction yields a simple graph");
    Ok(LbInstance {
        graph,
        k,
        n_param: n,
        universe,
        a: a.clone(),
        b: b.clone(),
        side_a,
        side_b,
        cut_edges,
        paths,
        l1,
        l2,
    })
}

/// Random subsets of `[N²]`, each element kept with probability 1/2, then
/// made disjoint or intersecting.
pub fn random_sets(n: usize, intersecting: bool, seed: u64) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let m = n * n;
    let mut rng = SplitMix64::new(seed);
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    for e in 1..=m {
        if rng.next_u64() & 1 == 1 {
            a.insert(e);
        }
        if rng.next_u64() & 1 == 1 {
            b.insert(e);
        }
    }
    if intersecting {
        if a.is_disjoint(&b) {
            let e = rng.below(m as u64) as usize + 1;
            a.insert(e);
            b.insert(e);
        }
    } else {
        b.retain(|e| !a.contains(e));
    }
    (a, b)
}

impl LbInstance {
    pub fn intersects(&self) -> bool {
        !self.a.is_disjoint(&self.b)
    }

    pub fn node_bound(&self) -> usize {
        (self.k - 4) * self.universe + 4 * self.n_param
    }

    pub fn edge_bound(&self) -> usize {
        (self.k - 2) * self.universe + 2 * self.n_param
    }

    /// Each path points away from its first internal node; cut edges point
    /// from `K_A` to `K_B`.
    pub fn two_orientation(&self) -> Orientation {
        let mut arcs = self.cut_edges.clone();
        for p in &self.paths {
            let nodes = p.nodes();
            arcs.push((nodes[1], nodes[0]));
            arcs.extend(nodes[1..].windows(2).map(|w| (w[0], w[1])));
        }
        Orientation::from_arcs(&self.graph, arcs).expect("arcs cover every edge once")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LbReport {
    pub nodes: usize,
    pub edges: usize,
    pub intersects: bool,
    pub cycle: Option<SubgraphCopy>,
    pub properties: Vec<PropertyCheck>,
}

impl LbReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.properties.iter().filter(|p| !p.passed).map(|p| p.name).collect()
    }
}

fn has_cycle(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut components = 0;
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        components += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(a) = stack.pop() {
            for &b in g.neighbors(a) {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    g.m() + components > g.n()
}

/// Checks the five structural properties with the brute-force oracle.
pub fn verify_instance(inst: &LbInstance) -> Result<LbReport, LbError> {
    if inst.k > 8 || inst.n_param > 5 {
        return Err(LbError::TooLarge { k: inst.k, n: inst.n_param });
    }
    let g = &inst.graph;
    let ck = gen::cycle(inst.k);
    let cycle = oracle_contains(g, &ck)?;
    let mut props = Vec::new();

    props.push(PropertyCheck {
        name: "cycle-iff-intersecting",
        passed: cycle.is_some() == inst.intersects(),
        detail: format!("{}-cycle present: {}, A ∩ B nonempty: {}", inst.k, cycle.is_some(), inst.intersects()),
    });

    let one_sided: Vec<&str> = [("A", &inst.side_a), ("B", &inst.side_b)]
        .into_iter()
        .filter_map(|(name, side)| match oracle_contains(&g.induced(side), &ck) {
            Ok(Some(_)) => Some(Ok(name)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_, _>>()?;
    props.push(PropertyCheck {
        name: "no-one-sided-cycle",
        passed: one_sided.is_empty(),
        detail: if one_sided.is_empty() {
            "neither side contains a k-cycle".into()
        } else {
            format!("k-cycle inside side {}", one_sided.join(", "))
        },
    });

    let d = degeneracy(g).0;
    let o = inst.two_orientation();
    let cyclic = has_cycle(g);
    let witness_ok = is_acyclic(&o) && o.max_outdeg() <= 2;
    props.push(PropertyCheck {
        name: "degeneracy-two",
        passed: witness_ok && d <= 2 && (d == 2) == cyclic,
        detail: format!(
            "degeneracy {d}, graph has a cycle: {cyclic}, 2-orientation acyclic with outdegree {}",
            o.max_outdeg()
        ),
    });

    let cut = inst
        .graph
        .edges()
        .filter(|&(x, y)| inst.side_a.contains(&g.id(x)) != inst.side_a.contains(&g.id(y)))
        .count();
    props.push(PropertyCheck {
        name: "cut-size",
        passed: cut == 2 * inst.n_param && inst.cut_edges.len() == cut,
        detail: format!("{cut} edges cross the cut, expected {}", 2 * inst.n_param),
    });

    props.push(PropertyCheck {
        name: "size-bounds",
        passed: g.n() <= inst.node_bound() && g.m() <= inst.edge_bound(),
        detail: format!(
            "{} nodes (bound {}), {} edges (bound {})",
            g.n(),
            inst.node_bound(),
            g.m(),
            inst.edge_bound()
        ),
    });

    Ok(LbReport {
        nodes: g.n(),
        edges: g.m(),
        intersects: inst.intersects(),
        cycle,
        properties: props,
    })
}
