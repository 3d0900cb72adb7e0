//! Local listing on the oriented edge set a node has gathered.
//!
//! These routines run inside a node after communication; they see only the
//! arcs the node learned and share no code with the global oracle.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::NodeId;

/// Oriented edges known to one node.
#[derive(Debug, Clone, Default)]
pub struct LocalView {
    arcs: BTreeSet<(NodeId, NodeId)>,
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl LocalView {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the arc `a -> b`.
    pub fn add_arc(&mut self, a: NodeId, b: NodeId) {
        if a == b || self.arcs.contains(&(b, a)) {
            return;
        }
        if self.arcs.insert((a, b)) {
            self.adj.entry(a).or_default().insert(b);
            self.adj.entry(b).or_default().insert(a);
        }
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// True iff the known edge `{a, b}` points `a -> b`.
    pub fn points(&self, a: NodeId, b: NodeId) -> bool {
        self.arcs.contains(&(a, b))
    }

    fn nbrs(&self, a: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.get(&a).into_iter().flatten().copied()
    }

    /// All `len`-cycles as node sequences starting at their smallest node,
    /// with the second node smaller than the last.
    pub fn cycles(&self, len: usize) -> Vec<Vec<NodeId>> {
        let mut out = Vec::new();
        for &s in self.adj.keys() {
            let mut path = vec![s];
            self.extend_cycle(s, len, &mut path, &mut out);
        }
        out
    }

    fn extend_cycle(&self, s: NodeId, len: usize, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let last = *path.last().expect("nonempty");
        if path.len() == len {
            if self.has_edge(last, s) && path[1] < path[len - 1] {
                out.push(path.clone());
            }
            return;
        }
        for x in self.nbrs(last) {
            if x > s && !path.contains(&x) {
                path.push(x);
                self.extend_cycle(s, len, path, out);
                path.pop();
            }
        }
    }

    /// All `k`-cliques containing `v` in which `v` is the sink, as sorted
    /// node sets.
    pub fn sink_cliques(&self, v: NodeId, k: usize) -> Vec<Vec<NodeId>> {
        let ins: Vec<NodeId> = self.nbrs(v).filter(|&u| self.points(u, v)).collect();
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.extend_clique(&ins, 0, k.saturating_sub(1), &mut cur, &mut out);
        for c in &mut out {
            c.push(v);
            c.sort_unstable();
        }
        out
    }

    fn extend_clique(
        &self,
        cand: &[NodeId],
        from: usize,
        need: usize,
        cur: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if cur.len() == need {
            out.push(cur.clone());
            return;
        }
        for i in from..cand.len() {
            let x = cand[i];
            if cur.iter().all(|&y| self.has_edge(x, y)) {
                cur.push(x);
                self.extend_clique(cand, i + 1, need, cur, out);
                cur.pop();
            }
        }
    }
}

fn is_sink(view: &LocalView, a: NodeId, left: NodeId, right: NodeId) -> bool {
    view.points(left, a) && view.points(right, a)
}

/// Nodes of a 4-cycle `c` (in cycle order) whose opposite node is a sink of
/// the cycle; each of them learns the whole cycle.
pub fn c4_designated(view: &LocalView, c: &[NodeId]) -> Vec<NodeId> {
    (0..4)
        .filter(|&i| {
            let z = (i + 2) % 4;
            is_sink(view, c[z], c[(z + 1) % 4], c[(z + 3) % 4])
        })
        .map(|i| c[i])
        .collect()
}

/// Nodes `v` of a 5-cycle `c` (in cycle order) for which the cycle reads
/// `v, u, x, y, w` in some direction with `u -> x -> y <- w`; each of them
/// learns the whole cycle.
pub fn c5_designated(view: &LocalView, c: &[NodeId]) -> Vec<NodeId> {
    let at = |i: isize| c[i.rem_euclid(5) as usize];
    (0..5isize)
        .filter(|&i| {
            [1isize, -1].iter().any(|&s| {
                let (u, x, y, w) = (at(i + s), at(i + 2 * s), at(i + 3 * s), at(i + 4 * s));
                view.points(u, x) && view.points(x, y) && view.points(w, y)
            })
        })
        .map(at)
        .collect()
}
