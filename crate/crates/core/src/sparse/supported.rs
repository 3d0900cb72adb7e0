//! Supported model: the communication graph is public, the input is a
//! subgraph of it.
//!
//! Every node computes the same degeneracy orientation of the support
//! locally. Edge presence then costs one bit per support out-edge, and for
//! 5-cycles one bit per directed support 2-path, each in the canonical
//! order (ascending ids along the path).

use std::sync::Arc;

use super::congest::report;
use super::local::LocalView;
use super::Target;
use crate::graph::{Graph, NodeId, Orientation};
use crate::sim::{BitString, NodeCtx, NodeFault, Phase, PhaseProgram};

pub(crate) struct Shared {
    pub support: Graph,
    pub orient: Orientation,
    pub target: Target,
    pub dedup: bool,
    pub edge_cap: usize,
    pub path_cap: usize,
}

pub(crate) struct SupportedNode {
    v: usize,
    id: NodeId,
    sh: Arc<Shared>,
    /// Support neighbours (by port) joined to this node by an input edge.
    input: Vec<bool>,
    step: usize,
    /// `edges[port][i]`: the i-th support out-edge of that neighbour is an input edge.
    edges: Vec<Vec<bool>>,
    paths: Vec<Vec<bool>>,
    reports: Vec<Vec<NodeId>>,
}

impl SupportedNode {
    pub fn new(ctx: &NodeCtx, sh: Arc<Shared>, input: Vec<bool>) -> Self {
        let v = sh.support.index_of(ctx.id).expect("node of the support");
        SupportedNode {
            v,
            id: ctx.id,
            sh,
            input,
            step: 0,
            edges: Vec::new(),
            paths: Vec::new(),
            reports: Vec::new(),
        }
    }

    fn port_of(&self, b: usize) -> usize {
        self.sh.support.neighbors(self.v).binary_search(&b).expect("support neighbour")
    }

    /// Whether the support out-edge `a -> b` of neighbour or self `a` is an
    /// input edge, as far as this node knows.
    fn present(&self, a: usize, b: usize) -> bool {
        if a == self.v {
            return self.input[self.port_of(b)];
        }
        if b == self.v {
            return self.input[self.port_of(a)];
        }
        let pa = self.port_of(a);
        let i = self.sh.orient.out_neighbors(a).binary_search(&b).expect("out-edge");
        self.edges[pa][i]
    }

    fn list(&mut self) {
        let g = &self.sh.support;
        let o = &self.sh.orient;
        let mut view = LocalView::new();
        let mut owners = vec![self.v];
        owners.extend_from_slice(g.neighbors(self.v));
        for &a in &owners {
            for &b in o.out_neighbors(a) {
                if self.present(a, b) {
                    view.add_arc(g.id(a), g.id(b));
                }
            }
        }
        if self.sh.target == Target::C5 {
            for (port, &u) in g.neighbors(self.v).iter().enumerate() {
                let mut bit = 0;
                for &x in o.out_neighbors(u) {
                    for &y in o.out_neighbors(x) {
                        if self.paths[port][bit] {
                            view.add_arc(g.id(u), g.id(x));
                            view.add_arc(g.id(x), g.id(y));
                        }
                        bit += 1;
                    }
                }
            }
        }
        self.reports = report(&view, self.id, self.sh.target, self.sh.dedup);
    }
}

fn bits_to_vec(b: &BitString) -> Vec<bool> {
    (0..b.len()).map(|i| b.get(i)).collect()
}

impl PhaseProgram for SupportedNode {
    type Output = Vec<Vec<NodeId>>;

    fn next_phase(&mut self) -> Result<Option<Phase>, NodeFault> {
        let sh = Arc::clone(&self.sh);
        let o = &sh.orient;
        let phase = match self.step {
            0 => {
                let mut p = BitString::new();
                for &b in o.out_neighbors(self.v) {
                    p.push_bit(self.input[self.port_of(b)]);
                }
                Phase::new("edges", sh.edge_cap, p)
            }
            1 if sh.target == Target::C5 => {
                let mut p = BitString::new();
                for &x in o.out_neighbors(self.v) {
                    let px = self.port_of(x);
                    for (i, _) in o.out_neighbors(x).iter().enumerate() {
                        p.push_bit(self.input[px] && self.edges[px][i]);
                    }
                }
                Phase::new("paths2", sh.path_cap, p)
            }
            _ => {
                self.list();
                return Ok(None);
            }
        };
        Ok(Some(phase))
    }

    fn deliver(&mut self, inbox: Vec<Option<BitString>>) -> Result<(), NodeFault> {
        let g = &self.sh.support;
        let o = &self.sh.orient;
        let got: Vec<Vec<bool>> = inbox
            .iter()
            .map(|m| m.as_ref().map(bits_to_vec).ok_or_else(|| NodeFault("silent neighbour".into())))
            .collect::<Result<_, _>>()?;
        for (port, &u) in g.neighbors(self.v).iter().enumerate() {
            let want = if self.step == 0 {
                o.outdeg(u)
            } else {
                o.out_neighbors(u).iter().map(|&x| o.outdeg(x)).sum()
            };
            if got[port].len() != want {
                return Err(NodeFault(format!(
                    "neighbour {} sent {} bits, expected {want}",
                    g.id(u),
                    got[port].len()
                )));
            }
        }
        if self.step == 0 {
            self.edges = got;
        } else {
            self.paths = got;
        }
        self.step += 1;
        Ok(())
    }

    fn finish(self) -> Vec<Vec<NodeId>> {
        self.reports
    }
}
