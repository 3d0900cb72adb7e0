//! Test-side oracles written directly from the definitions, independent of
//! the library's embedding search.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bcongest::{Graph, NodeId};

/// Adjacency lists by index.
pub fn adj(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|a| g.neighbors(a).to_vec()).collect()
}

/// Ids of the nodes at which some simple path with `k` edges ends.
pub fn path_ends(g: &Graph, k: usize) -> BTreeSet<NodeId> {
    fn walk(adj: &[Vec<usize>], a: usize, left: usize, on: &mut Vec<bool>) -> bool {
        if left == 0 {
            return true;
        }
        for &b in &adj[a] {
            if !on[b] {
                on[b] = true;
                let hit = walk(adj, b, left - 1, on);
                on[b] = false;
                if hit {
                    return true;
                }
            }
        }
        false
    }
    let adj = adj(g);
    let mut on = vec![false; g.n()];
    (0..g.n())
        .filter(|&a| {
            on[a] = true;
            let hit = walk(&adj, a, k, &mut on);
            on[a] = false;
            hit
        })
        .map(|a| g.id(a))
        .collect()
}

/// All simple `k`-cycles as sorted edge lists.
pub fn cycles(g: &Graph, k: usize) -> BTreeSet<Vec<(NodeId, NodeId)>> {
    fn go(
        g: &Graph,
        adj: &[Vec<usize>],
        start: usize,
        k: usize,
        path: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<(NodeId, NodeId)>>,
    ) {
        let last = *path.last().unwrap();
        if path.len() == k {
            if adj[last].contains(&start) {
                let mut edges: Vec<(NodeId, NodeId)> = (0..k)
                    .map(|i| {
                        let (x, y) = (g.id(path[i]), g.id(path[(i + 1) % k]));
                        (x.min(y), x.max(y))
                    })
                    .collect();
                edges.sort_unstable();
                out.insert(edges);
            }
            return;
        }
        for &b in &adj[last] {
            if b > start && !path.contains(&b) {
                path.push(b);
                go(g, adj, start, k, path, out);
                path.pop();
            }
        }
    }
    let adj = adj(g);
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        go(g, &adj, s, k, &mut vec![s], &mut out);
    }
    out
}

/// Ids of nodes lying on some `k`-cycle.
pub fn on_cycles(g: &Graph, k: usize) -> BTreeSet<NodeId> {
    cycles(g, k).into_iter().flatten().flat_map(|(x, y)| [x, y]).collect()
}

/// All `k`-cliques as sorted id lists.
pub fn cliques(g: &Graph, k: usize) -> BTreeSet<Vec<NodeId>> {
    fn go(g: &Graph, from: usize, k: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<Vec<NodeId>>) {
        if cur.len() == k {
            out.insert(cur.iter().map(|&a| g.id(a)).collect());
            return;
        }
        for b in from..g.n() {
            if cur.iter().all(|&a| g.has_edge_idx(a, b)) {
                cur.push(b);
                go(g, b + 1, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(g, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Edge sets of the copies reported by an enumerator, in the same shape as
/// [`cycles`].
pub fn edge_sets(copies: impl IntoIterator<Item = bcongest::graph::SubgraphCopy>) -> BTreeSet<Vec<(NodeId, NodeId)>> {
    copies.into_iter().map(|c| c.edge_image().to_vec()).collect()
}

/// `G(n, p)` with ids scrambled through `x -> (x·7919 + 13) mod 10007`, so that
/// id order differs from index order of the generator.
pub fn scrambled_gnp(n: usize, p: f64, seed: u64) -> Graph {
    let g = bcongest::gen::gnp(n, p, seed);
    let map = |x: NodeId| (x * 7919 + 13) % 10_007;
    Graph::with_id_exponent(g.ids().iter().map(|&x| map(x)), g.edge_ids().map(|(u, v)| (map(u), map(v))), None).unwrap()
}
