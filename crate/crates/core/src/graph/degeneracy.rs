//! Degeneracy, edge orientations and acyclicity.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrientationError {
    #[error("edge {{{0}, {1}}} is not oriented")]
    Unoriented(NodeId, NodeId),
    #[error("edge {{{0}, {1}}} is oriented twice")]
    Conflicting(NodeId, NodeId),
    #[error("arc {0} -> {1} is not an edge of the base graph")]
    NotAnEdge(NodeId, NodeId),
}

/// Exact degeneracy by repeated minimum-degree removal.
///
/// Returns `d` and the removal order; every node has at most `d`
/// neighbours later in the order. Ties go to the smallest id.
pub fn degeneracy(g: &Graph) -> (usize, Vec<NodeId>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|a| g.degree(a)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|a| (deg[a], a)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut d = 0;
    while let Some((k, a)) = queue.pop_first() {
        d = d.max(k);
        removed[a] = true;
        order.push(g.id(a));
        for &b in g.neighbors(a) {
            if !removed[b] {
                queue.remove(&(deg[b], b));
                deg[b] -= 1;
                queue.insert((deg[b], b));
            }
        }
    }
    (d, order)
}

/// Largest number of neighbours any node has later in `order`.
pub fn max_back_degree(g: &Graph, order: &[NodeId]) -> usize {
    let mut pos = vec![usize::MAX; g.n()];
    for (i, &id) in order.iter().enumerate() {
        if let Some(a) = g.index_of(id) {
            pos[a] = i;
        }
    }
    (0..g.n())
        .map(|a| g.neighbors(a).iter().filter(|&&b| pos[b] > pos[a]).count())
        .max()
        .unwrap_or(0)
}

/// Sanity bound: a `d`-degenerate graph has at most `n·d` edges.
pub fn edge_count_bound_check(g: &Graph, d: usize) -> bool {
    g.m() <= g.n() * d
}

/// A direction for every edge of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    ids: Vec<NodeId>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
}

impl Orientation {
    /// Orients `{a, b}` as `a -> b` iff `forward(a, b)` for `a < b`.
    pub fn from_fn(g: &Graph, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut out = vec![Vec::new(); g.n()];
        let mut inn = vec![Vec::new(); g.n()];
        for (a, b) in g.edges() {
            let (s, t) = if forward(a, b) { (a, b) } else { (b, a) };
            out[s].push(t);
            inn[t].push(s);
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
        }
        Orientation {
            ids: g.ids().to_vec(),
            out,
            inn,
        }
    }

    /// Orients every edge from the lower-ranked endpoint to the higher one.
    pub fn from_rank(g: &Graph, rank: &[usize]) -> Self {
        Self::from_fn(g, |a, b| rank[a] < rank[b])
    }

    /// Builds an orientation from explicit arcs given as ids; every edge of
    /// `g` must appear exactly once.
    pub fn from_arcs(
        g: &Graph,
        arcs: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, OrientationError> {
        let mut out = vec![Vec::new(); g.n()];
        let mut inn = vec![Vec::new(); g.n()];
        let mut count = 0;
        for (u, v) in arcs {
            let (a, b) = match (g.index_of(u), g.index_of(v)) {
                (Some(a), Some(b)) if g.has_edge_idx(a, b) => (a, b),
                _ => return Err(OrientationError::NotAnEdge(u, v)),
            };
            if out[a].contains(&b) || out[b].contains(&a) {
                return Err(OrientationError::Conflicting(u.min(v), u.max(v)));
            }
            out[a].push(b);
            inn[b].push(a);
            count += 1;
        }
        if count != g.m() {
            let (a, b) = g
                .edges()
                .find(|&(a, b)| !out[a].contains(&b) && !out[b].contains(&a))
                .expect("fewer arcs than edges");
            return Err(OrientationError::Unoriented(g.id(a), g.id(b)));
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
        }
        Ok(Orientation {
            ids: g.ids().to_vec(),
            out,
            inn,
        })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn out_neighbors(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    pub fn in_neighbors(&self, a: usize) -> &[usize] {
        &self.inn[a]
    }

    pub fn out_ids(&self, a: usize) -> Vec<NodeId> {
        self.out[a].iter().map(|&b| self.ids[b]).collect()
    }

    pub fn outdeg(&self, a: usize) -> usize {
        self.out[a].len()
    }

    pub fn indeg(&self, a: usize) -> usize {
        self.inn[a].len()
    }

    pub fn max_outdeg(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True iff the edge between indices `a` and `b` points `a -> b`.
    pub fn points(&self, a: usize, b: usize) -> bool {
        self.out[a].binary_search(&b).is_ok()
    }

    /// True iff the edge between ids `u` and `v` points `u -> v`.
    pub fn points_ids(&self, u: NodeId, v: NodeId) -> bool {
        match (self.ids.binary_search(&u), self.ids.binary_search(&v)) {
            (Ok(a), Ok(b)) => self.points(a, b),
            _ => false,
        }
    }

    /// Arcs as id pairs, sorted.
    pub fn arcs(&self) -> Vec<(NodeId, NodeId)> {
        let mut arcs: Vec<_> = self
            .out
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (self.ids[a], self.ids[b]))
            .collect();
        arcs.sort_unstable();
        arcs
    }

    /// Kahn order (sources first, smallest index first), or `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<NodeId>> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.inn.iter().map(Vec::len).collect();
        let mut ready: BTreeSet<usize> = (0..n).filter(|&a| indeg[a] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(a) = ready.pop_first() {
            order.push(self.ids[a]);
            for &b in &self.out[a] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert(b);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// The orientation induced on a subgraph (matched by node ids).
    pub fn restrict(&self, sub: &Graph) -> Result<Orientation, OrientationError> {
        let arcs: Vec<(NodeId, NodeId)> = sub
            .edge_ids()
            .map(|(u, v)| if self.points_ids(v, u) { (v, u) } else { (u, v) })
            .collect();
        for &(u, v) in &arcs {
            if !self.points_ids(u, v) {
                return Err(OrientationError::NotAnEdge(u, v));
            }
        }
        Orientation::from_arcs(sub, arcs)
    }
}

/// True iff the oriented graph has no directed cycle.
pub fn is_acyclic(o: &Orientation) -> bool {
    // Iterative DFS with colours; independent of the Kahn routine above.
    let n = o.n();
    let mut colour = vec![0u8; n];
    for start in 0..n {
        if colour[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        colour[start] = 1;
        while let Some(&mut (a, ref mut next)) = stack.last_mut() {
            if let Some(&b) = o.out[a].get(*next) {
                *next += 1;
                match colour[b] {
                    0 => {
                        colour[b] = 1;
                        stack.push((b, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                colour[a] = 2;
                stack.pop();
            }
        }
    }
    true
}

/// Acyclic orientation with every outdegree at most the degeneracy: each
/// node points to the neighbours removed after it.
pub fn exact_d_orientation(g: &Graph) -> Orientation {
    let (_, order) = degeneracy(g);
    let mut rank = vec![0; g.n()];
    for (i, &id) in order.iter().enumerate() {
        rank[g.index_of(id).expect("order covers the graph")] = i;
    }
    Orientation::from_rank(g, &rank)
}
