//! Node program: peeling orientation followed by out-neighbourhood
//! broadcasts and local listing.

use std::sync::Arc;

use super::local::{c4_designated, c5_designated, LocalView};
use super::{PeelConstant, Target};
use crate::graph::NodeId;
use crate::sim::{id_phase, read_id_phase, BitString, NodeCtx, NodeFault, Phase, PhaseProgram};

/// Public parameters of a run.
#[derive(Debug, Clone)]
pub(crate) struct Schedule {
    pub d: usize,
    pub c: PeelConstant,
    pub alpha: usize,
    pub iterations: usize,
    pub target: Option<Target>,
    pub dedup: bool,
    pub nout_cap: usize,
    pub lpaths_cap: usize,
    pub id_cap: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SparseOutput {
    /// Last iteration the node survived; `None` if it was never removed.
    pub iteration: Option<usize>,
    pub out_ids: Vec<NodeId>,
    /// Reported copies: cycles in cycle order, cliques as sorted sets.
    pub reports: Vec<Vec<NodeId>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Ids,
    Peel(usize),
    NOut,
    LPaths,
    Done,
}

pub(crate) struct SparseNode {
    ctx: NodeCtx,
    s: Arc<Schedule>,
    step: Step,
    nbr: Vec<NodeId>,
    live_deg: usize,
    removing: bool,
    nbr_iter: Vec<Option<usize>>,
    nbr_out: Vec<Vec<NodeId>>,
    nbr_paths: Vec<Vec<(NodeId, NodeId)>>,
    out: SparseOutput,
}

impl SparseNode {
    pub fn new(ctx: NodeCtx, s: Arc<Schedule>) -> Self {
        SparseNode {
            ctx,
            s,
            step: Step::Ids,
            nbr: Vec::new(),
            live_deg: ctx.degree,
            removing: false,
            nbr_iter: vec![None; ctx.degree],
            nbr_out: Vec::new(),
            nbr_paths: Vec::new(),
            out: SparseOutput::default(),
        }
    }

    fn after_peel(&self) -> Step {
        match self.s.target {
            None => Step::Done,
            Some(_) => Step::NOut,
        }
    }

    fn points_to(&self, port: usize) -> bool {
        let key = |it: Option<usize>, id: NodeId| (it.unwrap_or(usize::MAX), id);
        key(self.out.iteration, self.ctx.id) < key(self.nbr_iter[port], self.nbr[port])
    }

    /// Out-neighbours under the peeling order. A node that was never
    /// removed has no valid orientation and reports none; the driver
    /// turns that into an error.
    fn out_ids(&self) -> Vec<NodeId> {
        if self.out.iteration.is_none() {
            return Vec::new();
        }
        (0..self.nbr.len())
            .filter(|&p| self.points_to(p))
            .map(|p| self.nbr[p])
            .collect()
    }

    fn l_paths(&self) -> Vec<(NodeId, NodeId)> {
        let mut paths = Vec::new();
        for (port, &u) in self.nbr.iter().enumerate() {
            if self.points_to(port) {
                paths.extend(self.nbr_out[port].iter().map(|&w| (u, w)));
            }
        }
        paths.sort_unstable();
        paths
    }

    fn list(&mut self) {
        let Some(target) = self.s.target else { return };
        let v = self.ctx.id;
        let mut view = LocalView::new();
        for &w in &self.out.out_ids {
            view.add_arc(v, w);
        }
        for (port, &u) in self.nbr.iter().enumerate() {
            for &w in &self.nbr_out[port] {
                view.add_arc(u, w);
            }
            if let Some(paths) = self.nbr_paths.get(port) {
                for &(x, y) in paths {
                    view.add_arc(x, y);
                }
            }
        }
        self.out.reports = report(&view, v, target, self.s.dedup);
    }
}

/// Copies node `v` reports from its local view.
pub(crate) fn report(view: &LocalView, v: NodeId, target: Target, dedup: bool) -> Vec<Vec<NodeId>> {
    match target {
        Target::Clique(k) => view.sink_cliques(v, k),
        Target::C4 | Target::C5 => {
            let len = if target == Target::C4 { 4 } else { 5 };
            let mut cycles = view.cycles(len);
            if dedup {
                cycles.retain(|c| {
                    let d = if len == 4 { c4_designated(view, c) } else { c5_designated(view, c) };
                    d.into_iter().min() == Some(v)
                });
            }
            cycles
        }
    }
}

impl PhaseProgram for SparseNode {
    type Output = SparseOutput;

    fn next_phase(&mut self) -> Result<Option<Phase>, NodeFault> {
        let w = self.ctx.wire;
        let s = Arc::clone(&self.s);
        let phase = match self.step {
            Step::Ids => id_phase(&w, self.ctx.id),
            Step::Peel(i) => {
                let alive = self.out.iteration.is_none();
                self.removing = alive && s.c.at_most(self.live_deg, s.d);
                let mut p = BitString::new();
                p.push_bit(self.removing);
                Phase::new(format!("peel-{i}"), 1, p)
            }
            Step::NOut => {
                self.out.out_ids = self.out_ids();
                let mut p = BitString::new();
                w.put_ids(&mut p, &self.out.out_ids, s.alpha)?;
                Phase::new("nout", s.nout_cap, p)
            }
            Step::LPaths => {
                let paths = self.l_paths();
                let mut p = BitString::new();
                w.put_count(&mut p, paths.len(), s.alpha * s.alpha)?;
                for (x, y) in paths {
                    w.put_id(&mut p, x);
                    w.put_id(&mut p, y);
                }
                Phase::new("lpaths", s.lpaths_cap, p)
            }
            Step::Done => {
                if self.s.target.is_none() {
                    self.out.out_ids = self.out_ids();
                }
                self.list();
                return Ok(None);
            }
        };
        Ok(Some(phase))
    }

    fn deliver(&mut self, inbox: Vec<Option<BitString>>) -> Result<(), NodeFault> {
        let w = self.ctx.wire;
        let silent = || NodeFault("silent neighbour".into());
        self.step = match self.step {
            Step::Ids => {
                self.nbr = read_id_phase(&w, &inbox)?;
                if self.s.iterations == 0 {
                    self.after_peel()
                } else {
                    Step::Peel(0)
                }
            }
            Step::Peel(i) => {
                for (port, m) in inbox.iter().enumerate() {
                    let gone = m.as_ref().ok_or_else(silent)?.reader().read_bit().map_err(|e| NodeFault(e.to_string()))?;
                    if gone {
                        self.nbr_iter[port] = Some(i);
                        self.live_deg -= 1;
                    }
                }
                if self.removing {
                    self.out.iteration = Some(i);
                    self.removing = false;
                }
                if i + 1 < self.s.iterations {
                    Step::Peel(i + 1)
                } else {
                    self.after_peel()
                }
            }
            Step::NOut => {
                self.nbr_out = inbox
                    .iter()
                    .map(|m| Ok(w.get_ids(&mut m.as_ref().ok_or_else(silent)?.reader(), self.s.alpha)?))
                    .collect::<Result<_, NodeFault>>()?;
                if self.s.target == Some(Target::C5) {
                    Step::LPaths
                } else {
                    Step::Done
                }
            }
            Step::LPaths => {
                let max = self.s.alpha * self.s.alpha;
                self.nbr_paths = inbox
                    .iter()
                    .map(|m| {
                        let m = m.as_ref().ok_or_else(silent)?;
                        let mut r = m.reader();
                        let c = w.get_count(&mut r, max)?;
                        (0..c)
                            .map(|_| Ok((w.get_id(&mut r)?, w.get_id(&mut r)?)))
                            .collect::<Result<Vec<_>, NodeFault>>()
                    })
                    .collect::<Result<_, NodeFault>>()?;
                Step::Done
            }
            Step::Done => return Err(NodeFault("delivery after the last phase".into())),
        };
        Ok(())
    }

    fn finish(self) -> SparseOutput {
        self.out
    }
}
