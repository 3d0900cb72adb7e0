//! Target preparation: rooted tree orderings and pseudotree splits.

use std::collections::BTreeSet;

use super::DetectError;
use crate::graph::{Graph, NodeId};

/// A tree target with nodes labelled `1..=k` in post-order, so every
/// descendant of index `i` has a smaller index and the subtree of `i`
/// occupies exactly the indices `i - s_i + 1 ..= i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTargetTree {
    pub target: Graph,
    pub root: NodeId,
    /// `order[i - 1]` is the target node with index `i`.
    pub order: Vec<NodeId>,
    /// `subtree_size[i - 1] = s_i`.
    pub subtree_size: Vec<usize>,
    /// `children[i - 1]`: child indices of `i`, ascending.
    pub children: Vec<Vec<usize>>,
}

impl RootedTargetTree {
    pub fn k(&self) -> usize {
        self.order.len()
    }

    /// 1-based index of a target node.
    pub fn index_of(&self, node: NodeId) -> Option<usize> {
        self.order.iter().position(|&x| x == node).map(|p| p + 1)
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        (1..=self.k()).find(|&p| self.children[p - 1].contains(&i))
    }
}

/// Labels a tree target. The root defaults to the largest id; children are
/// visited in ascending id order and indices are handed out in post-order.
pub fn order_tree(h: &Graph, root: Option<NodeId>) -> Result<RootedTargetTree, DetectError> {
    if h.n() == 0 {
        return Err(DetectError::Structure("target tree is empty".into()));
    }
    if !h.is_tree() {
        return Err(DetectError::Structure(
            "target is not a tree (it has a cycle or is disconnected)".into(),
        ));
    }
    let root = root.unwrap_or_else(|| h.max_id().expect("nonempty"));
    let r = h
        .index_of(root)
        .ok_or_else(|| DetectError::Structure(format!("root {root} is not a target node")))?;

    let k = h.n();
    let mut index = vec![0usize; k];
    let mut order = Vec::with_capacity(k);
    // (node, parent, next neighbour slot)
    let mut stack = vec![(r, usize::MAX, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (a, parent, slot) = *top;
        if let Some(&b) = h.neighbors(a).get(slot) {
            top.2 += 1;
            if b != parent {
                stack.push((b, a, 0));
            }
        } else {
            stack.pop();
            order.push(h.id(a));
            index[a] = order.len();
        }
    }
    let mut subtree_size = vec![1usize; k];
    let mut children = vec![Vec::new(); k];
    for i in 1..=k {
        let a = h.index_of(order[i - 1]).expect("target node");
        for &b in h.neighbors(a) {
            if index[b] < i {
                children[i - 1].push(index[b]);
                subtree_size[i - 1] += subtree_size[index[b] - 1];
            }
        }
        children[i - 1].sort_unstable();
    }
    Ok(RootedTargetTree {
        target: h.clone(),
        root,
        order,
        subtree_size,
        children,
    })
}

/// A pseudotree split at one cycle edge `e = {u1, u2}`: the remaining tree
/// is rooted at `u2` (index `k`) and `u1` carries index `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudotreeTarget {
    pub target: Graph,
    pub removed_edge: (NodeId, NodeId),
    pub tree: RootedTargetTree,
    pub j: usize,
    /// Nodes of the unique cycle, ascending.
    pub cycle: Vec<NodeId>,
}

impl PseudotreeTarget {
    pub fn u1(&self) -> NodeId {
        self.removed_edge.0
    }

    pub fn u2(&self) -> NodeId {
        self.removed_edge.1
    }

    /// Indices on the tree path from `j` up to the root.
    pub fn keyed_indices(&self) -> Vec<usize> {
        let mut out = vec![self.j];
        let mut i = self.j;
        while let Some(p) = self.tree.parent(i) {
            out.push(p);
            i = p;
        }
        out
    }
}

/// Nodes of the unique cycle of a connected graph with `|E| = |V|`, by
/// repeatedly stripping degree-1 nodes.
fn unique_cycle(h: &Graph) -> BTreeSet<usize> {
    let mut deg: Vec<usize> = (0..h.n()).map(|a| h.degree(a)).collect();
    let mut alive = vec![true; h.n()];
    let mut leaves: Vec<usize> = (0..h.n()).filter(|&a| deg[a] == 1).collect();
    while let Some(a) = leaves.pop() {
        alive[a] = false;
        for &b in h.neighbors(a) {
            if alive[b] {
                deg[b] -= 1;
                if deg[b] == 1 {
                    leaves.push(b);
                }
            }
        }
    }
    (0..h.n()).filter(|&a| alive[a]).collect()
}

pub fn prepare_pseudotree(h: &Graph) -> Result<PseudotreeTarget, DetectError> {
    if h.n() == 0 || !h.is_connected() {
        return Err(DetectError::Structure("pseudotree target must be connected".into()));
    }
    if h.m() < h.n() {
        return Err(DetectError::Structure(
            "target is acyclic; use tree detection instead".into(),
        ));
    }
    if h.m() > h.n() {
        return Err(DetectError::Structure("target has more than one cycle".into()));
    }
    let cyc = unique_cycle(h);
    let e = h
        .edges()
        .find(|&(a, b)| cyc.contains(&a) && cyc.contains(&b))
        .map(|(a, b)| (h.id(a), h.id(b)))
        .expect("a connected graph with |E| = |V| has a cycle");
    let rest: Vec<(NodeId, NodeId)> = h.edge_ids().filter(|&x| x != e).collect();
    let h2 = Graph::with_id_exponent(h.ids().iter().copied(), rest, None)
        .map_err(|err| DetectError::Structure(err.to_string()))?;
    let tree = order_tree(&h2, Some(e.1))?;
    let j = tree.index_of(e.0).expect("u1 is a target node");
    Ok(PseudotreeTarget {
        target: h.clone(),
        removed_edge: e,
        tree,
        j,
        cycle: cyc.into_iter().map(|a| h.id(a)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn single_edge() {
        let t = order_tree(&gen::path(2), None).unwrap();
        assert_eq!(t.order, vec![0, 1]);
        assert_eq!(t.subtree_size, vec![1, 2]);
    }

    #[test]
    fn star_rooted_at_centre() {
        let t = order_tree(&gen::star(3), Some(0)).unwrap();
        assert_eq!(t.index_of(0), Some(4));
        assert_eq!(t.subtree_size, vec![1, 1, 1, 4]);
        assert_eq!(t.children[3], vec![1, 2, 3]);
        assert_eq!(t.order, vec![1, 2, 3, 0]);
    }

    #[test]
    fn path_rooted_at_end() {
        let t = order_tree(&gen::path(4), Some(0)).unwrap();
        assert_eq!(t.order, vec![3, 2, 1, 0]);
        assert_eq!(t.subtree_size, vec![1, 2, 3, 4]);
        assert_eq!(t.parent(1), Some(2));
        assert_eq!(t.parent(4), None);
    }

    #[test]
    fn subtrees_are_contiguous() {
        let spider = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let t = order_tree(&spider, Some(0)).unwrap();
        for i in 1..=7 {
            let s = t.subtree_size[i - 1];
            let kids: usize = t.children[i - 1].iter().map(|&c| t.subtree_size[c - 1]).sum();
            assert_eq!(s, 1 + kids);
            for &c in &t.children[i - 1] {
                assert!(c < i && c + 1 >= i + 1 - s);
            }
        }
        assert_eq!(t.subtree_size[6], 7);
    }

    #[test]
    fn rejects_non_trees() {
        assert!(order_tree(&gen::cycle(3), None).is_err());
        assert!(order_tree(&Graph::empty(2), None).is_err());
        assert!(order_tree(&gen::path(3), Some(9)).is_err());
    }

    #[test]
    fn triangle_split() {
        let p = prepare_pseudotree(&gen::cycle(3)).unwrap();
        assert_eq!(p.removed_edge, (0, 1));
        assert_eq!(p.tree.root, 1);
        assert_eq!(p.tree.order, vec![0, 2, 1]);
        assert_eq!(p.j, 1);
        assert_eq!(p.keyed_indices(), vec![1, 2, 3]);
        assert_eq!(p.tree.target.m(), 2);
    }

    #[test]
    fn paw_keeps_pendant_in_tree() {
        let paw = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let p = prepare_pseudotree(&paw).unwrap();
        assert_eq!(p.cycle, vec![0, 1, 2]);
        assert_eq!(p.removed_edge, (0, 1));
        assert!(p.tree.target.has_edge(2, 3));
    }

    #[test]
    fn rejects_non_pseudotrees() {
        assert!(prepare_pseudotree(&gen::path(4)).is_err());
        assert!(prepare_pseudotree(&gen::complete(4)).is_err());
    }
}
