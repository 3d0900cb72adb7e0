//! The distributed family-propagation program shared by every detector.
//!
//! For a target tree labelled in post-order, node `v` computes, index by
//! index, a family `T̂_{v,i}` of node sets `U` such that some copy of the
//! subtree `H[i]` with node set `U` is rooted at `v`; the family is kept
//! `(k - s_i)`-representative and inclusion-minimal, so it has at most
//! `C(k, s_i)` members. Each non-leaf, non-root index costs one broadcast
//! phase; leaf families `{{u}}` are derived locally from neighbour ids.
//!
//! Pseudotree mode additionally keys the families of the indices on the
//! path from `j` to the root by the host node playing `j`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::target::RootedTargetTree;
use crate::graph::NodeId;
use crate::repfam::{binomial, minimize, SetFamily};
use crate::sim::{
    id_phase, read_id_phase, BitString, NodeCtx, NodeFault, Phase, PhaseProgram, Wire,
};

pub(crate) type Fam = SetFamily<Vec<NodeId>>;
/// Families by key; unkeyed indices use the single key `None`.
pub type Keyed = BTreeMap<Option<NodeId>, SetFamily<Vec<NodeId>>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum KeyFilter {
    All,
    Only(NodeId),
}

impl KeyFilter {
    fn allows(self, x: NodeId) -> bool {
        match self {
            KeyFilter::All => true,
            KeyFilter::Only(w) => w == x,
        }
    }
}

/// Public schedule of one detection run. Positions are 0-based
/// (`position = index - 1`).
#[derive(Debug, Clone)]
pub(crate) struct Plan {
    pub label: &'static str,
    pub k: usize,
    pub children: Vec<Vec<usize>>,
    pub size: Vec<usize>,
    pub keyed: Vec<bool>,
    pub j: Option<usize>,
    pub filter: KeyFilter,
    pub broadcast: Vec<usize>,
    pub caps: Vec<usize>,
    pub id_cap: usize,
    pub max_keys: usize,
}

impl Plan {
    pub fn new(
        label: &'static str,
        tree: &RootedTargetTree,
        key: Option<(usize, KeyFilter)>,
        wire: &Wire,
    ) -> Plan {
        let k = tree.k();
        let children: Vec<Vec<usize>> = tree
            .children
            .iter()
            .map(|c| c.iter().map(|&i| i - 1).collect())
            .collect();
        let size = tree.subtree_size.clone();
        let mut keyed = vec![false; k];
        let (j, filter) = match key {
            Some((j, f)) => {
                let mut i = j;
                keyed[i - 1] = true;
                while let Some(p) = tree.parent(i) {
                    keyed[p - 1] = true;
                    i = p;
                }
                (Some(j - 1), f)
            }
            None => (None, KeyFilter::All),
        };
        let max_keys = match filter {
            KeyFilter::All => wire.n,
            KeyFilter::Only(_) => 1,
        };
        let broadcast: Vec<usize> = (0..k.saturating_sub(1))
            .filter(|&p| !children[p].is_empty())
            .collect();
        let mut plan = Plan {
            label,
            k,
            children,
            size,
            keyed,
            j,
            filter,
            broadcast,
            caps: Vec::new(),
            id_cap: wire.cap(wire.id_width),
            max_keys,
        };
        plan.caps = plan
            .broadcast
            .iter()
            .map(|&p| wire.cap(plan.payload_bits(wire, p)))
            .collect();
        plan
    }

    pub fn bound(&self, p: usize) -> usize {
        binomial(self.k as u64, self.size[p] as u64) as usize
    }

    /// Worst-case payload size of the broadcast of position `p`.
    pub fn payload_bits(&self, wire: &Wire, p: usize) -> usize {
        let fam = wire.family_bits(self.bound(p), self.size[p], true);
        if self.keyed[p] {
            wire.count_width(self.max_keys) + self.max_keys * (wire.id_width + fam)
        } else {
            fam
        }
    }

    /// Total rounds of the oblivious schedule.
    pub fn budget(&self) -> usize {
        self.id_cap + self.caps.iter().sum::<usize>()
    }

    fn phase_label(&self, p: usize) -> String {
        format!("{}-{}", self.label, p + 1)
    }
}

/// Final state of one node.
#[derive(Debug, Clone, Default)]
pub struct DpOutput {
    pub found: bool,
    /// Host ids by target index (index order) of the chosen copy.
    pub witness: Option<Vec<NodeId>>,
    /// Own families by position, including the root.
    pub families: Vec<Keyed>,
}

pub(crate) struct DpNode {
    ctx: NodeCtx,
    plan: Arc<Plan>,
    step: usize,
    nbr: Vec<NodeId>,
    own: Vec<Keyed>,
    recv: Vec<Vec<Keyed>>,
    out: DpOutput,
}

impl DpNode {
    pub fn new(ctx: NodeCtx, plan: Arc<Plan>) -> Self {
        let k = plan.k;
        DpNode {
            ctx,
            plan,
            step: 0,
            nbr: Vec::new(),
            own: vec![Keyed::new(); k],
            recv: vec![Vec::new(); k],
            out: DpOutput::default(),
        }
    }

    fn leaf_family(&self, p: usize, u: NodeId) -> Keyed {
        let key = if self.plan.j == Some(p) {
            if !self.plan.filter.allows(u) {
                return Keyed::new();
            }
            Some(u)
        } else {
            None
        };
        Keyed::from([(key, SetFamily::from_min_witness([(vec![u], vec![u])]))])
    }

    /// Family of child position `c` at neighbour port `port`.
    fn child_family(&self, c: usize, port: usize) -> Keyed {
        if self.plan.children[c].is_empty() {
            self.leaf_family(c, self.nbr[port])
        } else {
            self.recv[c][port].clone()
        }
    }

    fn compute(&self, p: usize) -> Result<Keyed, NodeFault> {
        let v = self.ctx.id;
        let plan = &*self.plan;
        if plan.children[p].is_empty() {
            return Ok(self.leaf_family(p, v));
        }
        let mut partial: BTreeMap<Option<NodeId>, Vec<(Vec<NodeId>, Vec<NodeId>)>> =
            BTreeMap::from([(None, vec![(Vec::new(), Vec::new())])]);
        let mut sigma = 0;
        for &c in &plan.children[p] {
            sigma += plan.size[c];
            let q = plan.k - 1 - sigma;
            let mut next: BTreeMap<Option<NodeId>, Vec<(Vec<NodeId>, Vec<NodeId>)>> = BTreeMap::new();
            for port in 0..self.nbr.len() {
                for (ck, cf) in self.child_family(c, port) {
                    for (pk, items) in &partial {
                        let key = match (*pk, ck) {
                            (Some(_), Some(_)) => {
                                return Err(NodeFault("two keyed children under one index".into()))
                            }
                            (Some(x), None) | (None, Some(x)) => Some(x),
                            (None, None) => None,
                        };
                        let bucket = next.entry(key).or_default();
                        for m in cf.members() {
                            if m.set.binary_search(&v).is_ok() {
                                continue;
                            }
                            let wu = m.witness.as_ref().expect("decoded with witness");
                            for (s, w) in items {
                                if s.iter().any(|x| m.set.binary_search(x).is_ok()) {
                                    continue;
                                }
                                let mut set = s.clone();
                                set.extend_from_slice(&m.set);
                                let mut wit = w.clone();
                                wit.extend_from_slice(wu);
                                bucket.push((set, wit));
                            }
                        }
                    }
                }
            }
            partial = next
                .into_iter()
                .map(|(key, items)| {
                    let fam = minimize(&SetFamily::from_min_witness(items), q);
                    let items = fam
                        .into_members()
                        .into_iter()
                        .map(|m| (m.set, m.witness.expect("witnessed")))
                        .collect::<Vec<_>>();
                    (key, items)
                })
                .filter(|(_, items)| !items.is_empty())
                .collect();
        }
        let q = plan.k - plan.size[p];
        let mut result = Keyed::new();
        for (key, items) in partial {
            let with_v = items.into_iter().map(|(mut s, mut w)| {
                s.push(v);
                w.push(v);
                (s, w)
            });
            let fam = minimize(&SetFamily::from_min_witness(with_v), q);
            let key = if plan.j == Some(p) {
                if !plan.filter.allows(v) {
                    continue;
                }
                Some(v)
            } else {
                key
            };
            if !fam.is_empty() {
                result.insert(key, fam);
            }
        }
        Ok(result)
    }

    fn encode(&self, p: usize, fams: &Keyed) -> Result<BitString, NodeFault> {
        let w = &self.ctx.wire;
        let plan = &*self.plan;
        let mut out = BitString::new();
        if plan.keyed[p] {
            w.put_count(&mut out, fams.len(), plan.max_keys)?;
            for (key, fam) in fams {
                w.put_id(&mut out, key.expect("keyed index"));
                w.put_family(&mut out, fam, plan.bound(p), plan.size[p], true)?;
            }
        } else {
            let empty = Fam::new();
            let fam = fams.get(&None).unwrap_or(&empty);
            w.put_family(&mut out, fam, plan.bound(p), plan.size[p], true)?;
        }
        Ok(out)
    }

    fn decode(&self, p: usize, bits: &BitString) -> Result<Keyed, NodeFault> {
        let w = &self.ctx.wire;
        let plan = &*self.plan;
        let mut r = bits.reader();
        let mut out = Keyed::new();
        if plan.keyed[p] {
            let c = w.get_count(&mut r, plan.max_keys)?;
            for _ in 0..c {
                let key = w.get_id(&mut r)?;
                let fam = w.get_family(&mut r, plan.bound(p), plan.size[p], true)?;
                out.insert(Some(key), fam);
            }
        } else {
            let fam = w.get_family(&mut r, plan.bound(p), plan.size[p], true)?;
            if !fam.is_empty() {
                out.insert(None, fam);
            }
        }
        Ok(out)
    }

    fn finish_root(&mut self) -> Result<(), NodeFault> {
        let root = self.plan.k - 1;
        let fams = self.compute(root)?;
        let mut best: Option<Vec<NodeId>> = None;
        for (key, fam) in &fams {
            let ok = match key {
                None => self.plan.j.is_none(),
                Some(x) => self.nbr.binary_search(x).is_ok(),
            };
            if !ok {
                continue;
            }
            for m in fam.members() {
                let w = m.witness.clone().expect("witnessed");
                if best.as_ref().is_none_or(|b| w < *b) {
                    best = Some(w);
                }
            }
        }
        self.own[root] = fams;
        self.out.found = best.is_some();
        self.out.witness = best;
        Ok(())
    }
}

impl PhaseProgram for DpNode {
    type Output = DpOutput;

    fn next_phase(&mut self) -> Result<Option<Phase>, NodeFault> {
        let plan = Arc::clone(&self.plan);
        let phase = match self.step {
            0 => id_phase(&self.ctx.wire, self.ctx.id),
            s if s <= plan.broadcast.len() => {
                let p = plan.broadcast[s - 1];
                let fams = self.compute(p)?;
                let payload = self.encode(p, &fams)?;
                self.own[p] = fams;
                Phase::new(plan.phase_label(p), plan.caps[s - 1], payload)
            }
            s if s == plan.broadcast.len() + 1 => {
                self.finish_root()?;
                self.step += 1;
                return Ok(None);
            }
            _ => return Ok(None),
        };
        Ok(Some(phase))
    }

    fn deliver(&mut self, inbox: Vec<Option<BitString>>) -> Result<(), NodeFault> {
        if self.step == 0 {
            self.nbr = read_id_phase(&self.ctx.wire, &inbox)?;
            if self.nbr.windows(2).any(|w| w[0] >= w[1]) {
                return Err(NodeFault("ports are not in ascending id order".into()));
            }
        } else {
            let p = self.plan.broadcast[self.step - 1];
            self.recv[p] = inbox
                .iter()
                .map(|m| {
                    let m = m.as_ref().ok_or_else(|| NodeFault("silent neighbour".into()))?;
                    self.decode(p, m)
                })
                .collect::<Result<_, _>>()?;
        }
        self.step += 1;
        Ok(())
    }

    fn finish(mut self) -> DpOutput {
        self.out.families = std::mem::take(&mut self.own);
        self.out
    }
}
