//! Exhaustive subgraph search used as ground truth.
//!
//! Embeddings are non-induced: every target edge must map to a host edge.
//! Copies are identified by their host edge set, so automorphic embeddings
//! of the same copy collapse to one [`SubgraphCopy`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Graph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("target has {nodes} nodes, oracle limit is {limit}")]
    TargetTooLarge { nodes: usize, limit: usize },
    #[error("node {0} is not in the target graph")]
    UnknownTargetNode(NodeId),
    #[error("mapping is not a valid embedding: {0}")]
    InvalidEmbedding(String),
}

#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_target_nodes: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_target_nodes: 10,
        }
    }
}

/// One copy of a target graph inside a host graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubgraphCopy {
    /// `(target id, host id)` pairs sorted by target id.
    mapping: Vec<(NodeId, NodeId)>,
    /// Host edges `(u, v)` with `u < v`, sorted.
    edge_image: Vec<(NodeId, NodeId)>,
}

impl SubgraphCopy {
    /// Validates `mapping` (target id -> host id) as an injective embedding
    /// of `target` into `host`.
    pub fn new(
        target: &Graph,
        host: &Graph,
        mapping: impl IntoIterator<Item = (NodeId, NodeId)>,
    ) -> Result<Self, OracleError> {
        let map: BTreeMap<NodeId, NodeId> = mapping.into_iter().collect();
        let bad = |msg: String| Err(OracleError::InvalidEmbedding(msg));
        if map.len() != target.n() || target.ids().iter().any(|t| !map.contains_key(t)) {
            return bad("mapping does not cover the target nodes".into());
        }
        let image: BTreeSet<NodeId> = map.values().copied().collect();
        if image.len() != map.len() {
            return bad("mapping is not injective".into());
        }
        if let Some(x) = image.iter().find(|&&x| host.index_of(x).is_none()) {
            return bad(format!("host has no node {x}"));
        }
        let mut edge_image = Vec::with_capacity(target.m());
        for (s, t) in target.edge_ids() {
            let (u, v) = (map[&s], map[&t]);
            if !host.has_edge(u, v) {
                return bad(format!("target edge {{{s}, {t}}} maps to non-edge {{{u}, {v}}}"));
            }
            edge_image.push((u.min(v), u.max(v)));
        }
        edge_image.sort_unstable();
        Ok(SubgraphCopy {
            mapping: map.into_iter().collect(),
            edge_image,
        })
    }

    pub fn mapping(&self) -> &[(NodeId, NodeId)] {
        &self.mapping
    }

    pub fn edge_image(&self) -> &[(NodeId, NodeId)] {
        &self.edge_image
    }

    /// Host nodes used by the copy, ascending.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = self.mapping.iter().map(|&(_, x)| x).collect();
        v.sort_unstable();
        v
    }

    pub fn image_of(&self, target: NodeId) -> Option<NodeId> {
        self.mapping
            .binary_search_by_key(&target, |&(t, _)| t)
            .ok()
            .map(|i| self.mapping[i].1)
    }

    /// Re-checks the copy against a host and target.
    pub fn is_valid_in(&self, target: &Graph, host: &Graph) -> bool {
        SubgraphCopy::new(target, host, self.mapping.iter().copied())
            .map(|c| c.edge_image == self.edge_image)
            .unwrap_or(false)
    }
}

impl PartialEq for SubgraphCopy {
    fn eq(&self, other: &Self) -> bool {
        self.edge_image == other.edge_image
    }
}

impl Eq for SubgraphCopy {}

impl Hash for SubgraphCopy {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.edge_image.hash(state);
    }
}

impl PartialOrd for SubgraphCopy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubgraphCopy {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edge_image.cmp(&other.edge_image)
    }
}

/// Backtracking embedder over target indices in a connectivity-first order.
struct Embedder<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    /// For each position in `order`, the earlier positions adjacent in `h`.
    back: Vec<Vec<usize>>,
    image: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Embedder<'a> {
    fn new(g: &'a Graph, h: &'a Graph, first: Option<usize>) -> Self {
        let k = h.n();
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        while order.len() < k {
            let next = if order.is_empty() && first.is_some() {
                first.unwrap()
            } else {
                // most already-placed neighbours, then highest degree, then smallest index
                (0..k)
                    .filter(|&t| !placed[t])
                    .max_by_key(|&t| {
                        let links = h.neighbors(t).iter().filter(|&&s| placed[s]).count();
                        (links, h.degree(t), std::cmp::Reverse(t))
                    })
                    .unwrap()
            };
            placed[next] = true;
            order.push(next);
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; k];
            for (i, &t) in order.iter().enumerate() {
                p[t] = i;
            }
            p
        };
        let back = order
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                h.neighbors(t)
                    .iter()
                    .map(|&s| pos[s])
                    .filter(|&j| j < i)
                    .collect()
            })
            .collect();
        Embedder {
            g,
            h,
            order,
            back,
            image: vec![usize::MAX; k],
            used: vec![false; g.n()],
        }
    }

    fn candidates(&self, depth: usize) -> Vec<usize> {
        let t = self.order[depth];
        let need = self.h.degree(t);
        let base: Vec<usize> = match self.back[depth].first() {
            Some(&j) => self.g.neighbors(self.image[self.order[j]]).to_vec(),
            None => (0..self.g.n()).collect(),
        };
        base.into_iter()
            .filter(|&x| !self.used[x] && self.g.degree(x) >= need)
            .filter(|&x| {
                self.back[depth]
                    .iter()
                    .all(|&j| self.g.has_edge_idx(x, self.image[self.order[j]]))
            })
            .collect()
    }

    fn search<F>(&mut self, depth: usize, pinned: Option<usize>, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[usize]) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return visit(&self.image);
        }
        let t = self.order[depth];
        let cands = match (depth, pinned) {
            (0, Some(x)) => {
                if self.g.degree(x) >= self.h.degree(t) {
                    vec![x]
                } else {
                    vec![]
                }
            }
            _ => self.candidates(depth),
        };
        for x in cands {
            self.image[t] = x;
            self.used[x] = true;
            let flow = self.search(depth + 1, pinned, visit);
            self.used[x] = false;
            self.image[t] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn guard(h: &Graph, limits: OracleLimits) -> Result<(), OracleError> {
    if h.n() > limits.max_target_nodes {
        return Err(OracleError::TargetTooLarge {
            nodes: h.n(),
            limit: limits.max_target_nodes,
        });
    }
    Ok(())
}

fn copy_from_image(g: &Graph, h: &Graph, image: &[usize]) -> SubgraphCopy {
    let mapping = image.iter().enumerate().map(|(t, &x)| (h.id(t), g.id(x)));
    SubgraphCopy::new(h, g, mapping).expect("embedder produced a valid embedding")
}

pub fn oracle_contains(g: &Graph, h: &Graph) -> Result<Option<SubgraphCopy>, OracleError> {
    oracle_contains_with(g, h, OracleLimits::default())
}

/// Some copy of `h` in `g`, searching host candidates in ascending id order.
pub fn oracle_contains_with(
    g: &Graph,
    h: &Graph,
    limits: OracleLimits,
) -> Result<Option<SubgraphCopy>, OracleError> {
    guard(h, limits)?;
    if h.n() > g.n() {
        return Ok(None);
    }
    let mut found = None;
    let mut e = Embedder::new(g, h, None);
    let _ = e.search(0, None, &mut |image| {
        found = Some(copy_from_image(g, h, image));
        ControlFlow::Break(())
    });
    Ok(found)
}

pub fn oracle_enumerate(g: &Graph, h: &Graph) -> Result<BTreeSet<SubgraphCopy>, OracleError> {
    oracle_enumerate_with(g, h, OracleLimits::default())
}

/// All copies of `h` in `g`, deduplicated by edge image.
pub fn oracle_enumerate_with(
    g: &Graph,
    h: &Graph,
    limits: OracleLimits,
) -> Result<BTreeSet<SubgraphCopy>, OracleError> {
    guard(h, limits)?;
    let mut copies = BTreeSet::new();
    if h.n() > g.n() {
        return Ok(copies);
    }
    let mut e = Embedder::new(g, h, None);
    let _ = e.search(0, None, &mut |image| {
        // BTreeSet::insert keeps the first mapping seen for an edge set.
        copies.insert(copy_from_image(g, h, image));
        ControlFlow::Continue(())
    });
    Ok(copies)
}

/// Host nodes `x` such that some copy of `h` maps `root` to `x`.
pub fn oracle_root_images(
    g: &Graph,
    h: &Graph,
    root: NodeId,
) -> Result<BTreeSet<NodeId>, OracleError> {
    guard(h, OracleLimits::default())?;
    let r = h.index_of(root).ok_or(OracleError::UnknownTargetNode(root))?;
    let mut out = BTreeSet::new();
    if h.n() > g.n() {
        return Ok(out);
    }
    for x in 0..g.n() {
        let mut e = Embedder::new(g, h, Some(r));
        let hit = e
            .search(0, Some(x), &mut |_| ControlFlow::Break(()))
            .is_break();
        if hit {
            out.insert(g.id(x));
        }
    }
    Ok(out)
}
