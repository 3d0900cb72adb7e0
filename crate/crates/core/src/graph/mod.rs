//! Undirected simple graphs with stable node identifiers.
//!
//! Node identifiers are arbitrary non-negative integers. Internally every
//! node also has a dense index `0..n`; indices follow ascending identifier
//! order, so iterating indices is the same as iterating ids in ascending
//! order.

mod degeneracy;
mod io;
mod oracle;

use std::collections::BTreeSet;

use thiserror::Error;

pub use degeneracy::{
    degeneracy, edge_count_bound_check, exact_d_orientation, is_acyclic, max_back_degree,
    Orientation, OrientationError,
};
pub use io::{parse_graph, parse_graph_with, serialize_graph};
pub use oracle::{
    oracle_contains, oracle_contains_with, oracle_enumerate, oracle_enumerate_with,
    oracle_root_images, OracleError, OracleLimits, SubgraphCopy,
};

/// Node identifier as seen by the distributed algorithms.
pub type NodeId = u64;

/// Identifiers must lie in `{0, ..., max(n,2)^ID_EXPONENT}`.
pub const DEFAULT_ID_EXPONENT: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge endpoint {0} is not a declared node")]
    UnknownEndpoint(NodeId),
    #[error("node {0} declared twice")]
    DuplicateNode(NodeId),
    #[error("node id {id} exceeds the identifier bound {bound}")]
    IdOutOfRange { id: NodeId, bound: u64 },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// An undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<NodeId>,
    adj: Vec<Vec<usize>>,
    m: usize,
}

/// Largest identifier admitted for a graph on `n` nodes.
pub fn id_bound(n: usize, exponent: u32) -> u64 {
    (n.max(2) as u64).saturating_pow(exponent)
}

impl Graph {
    /// Builds a graph from explicit node ids and edges, enforcing the
    /// default polynomial identifier bound.
    pub fn new(
        ids: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, GraphError> {
        Self::with_id_exponent(ids, edges, Some(DEFAULT_ID_EXPONENT))
    }

    /// Like [`Graph::new`]; `exponent = None` disables the identifier bound.
    pub fn with_id_exponent(
        ids: impl IntoIterator<Item = NodeId>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        exponent: Option<u32>,
    ) -> Result<Self, GraphError> {
        let mut ids: Vec<NodeId> = ids.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateNode(w[0]));
        }
        if let Some(exp) = exponent {
            let bound = id_bound(ids.len(), exp);
            if let Some(&id) = ids.iter().find(|&&id| id > bound) {
                return Err(GraphError::IdOutOfRange { id, bound });
            }
        }
        let mut g = Graph {
            adj: vec![Vec::new(); ids.len()],
            ids,
            m: 0,
        };
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    fn insert_edge(&mut self, u: NodeId, v: NodeId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let a = self.index_of(u).ok_or(GraphError::UnknownEndpoint(u))?;
        let b = self.index_of(v).ok_or(GraphError::UnknownEndpoint(v))?;
        if self.adj[a].contains(&b) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.m += 1;
        Ok(())
    }

    /// Graph on ids `0..n` with the given edges.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        Self::new(0..n as NodeId, edges.iter().copied())
    }

    /// Edgeless graph on ids `0..n`.
    pub fn empty(n: usize) -> Self {
        Graph {
            ids: (0..n as NodeId).collect(),
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Node ids in ascending order; position = node index.
    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn max_id(&self) -> Option<NodeId> {
        self.ids.last().copied()
    }

    /// Neighbour indices of `index`, ascending.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn neighbor_ids(&self, index: usize) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[index].iter().map(move |&j| self.ids[j])
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adj[index].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge_idx(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.has_edge_idx(a, b),
            _ => false,
        }
    }

    /// Edges as index pairs `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, list)| list.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
    }

    /// Edges as id pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edge_ids(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges().map(|(a, b)| (self.ids[a], self.ids[b]))
    }

    /// Subgraph induced by the given node ids (unknown ids are ignored).
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> Graph {
        let ids: Vec<NodeId> = self.ids.iter().copied().filter(|id| keep.contains(id)).collect();
        let edges = self
            .edge_ids()
            .filter(|(u, v)| keep.contains(u) && keep.contains(v));
        Graph::with_id_exponent(ids, edges, None).expect("induced subgraph of a valid graph")
    }

    /// True iff every node and edge of `self` is present in `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.ids.iter().all(|&id| other.index_of(id).is_some())
            && self.edge_ids().all(|(u, v)| other.has_edge(u, v))
    }

    /// True iff the graph is connected (the empty graph counts as connected).
    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(a) = stack.pop() {
            for &b in &self.adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    stack.push(b);
                }
            }
        }
        count == self.n()
    }

    pub fn is_tree(&self) -> bool {
        self.n() > 0 && self.m + 1 == self.n() && self.is_connected()
    }
}
