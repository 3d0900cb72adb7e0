//! Distributed detection of paths, cycles, trees and pseudotrees.
//!
//! All detectors run the same family-propagation program ([`dp`]) on a
//! suitable target tree:
//!
//! * a `k`-path (`k` edges) is the path tree on `k + 1` nodes rooted at an end;
//! * a `k`-cycle is the pseudotree `C_k`: the path left after deleting one
//!   cycle edge, keyed by the host playing the far end;
//! * trees and pseudotrees are used as given.

pub mod dp;
pub mod target;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gen;
use crate::graph::{Graph, NodeId, OracleError, SubgraphCopy};
use crate::sim::{metrics, run, Metrics, Phased, SimConfig, SimError, Transcript};
pub use dp::{DpOutput, Keyed};
use dp::{DpNode, KeyFilter, Plan};
pub use target::{order_tree, prepare_pseudotree, PseudotreeTarget, RootedTargetTree};

/// Largest target size (in nodes) accepted by the detectors.
pub const MAX_TARGET_NODES: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("parameter out of range: {0}")]
    Guard(String),
    #[error("invalid target: {0}")]
    Structure(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("node {node} produced an invalid witness: {source}")]
    Witness { node: NodeId, source: OracleError },
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeResult {
    pub id: NodeId,
    pub found: bool,
    pub witness: Option<SubgraphCopy>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetectResult {
    pub nodes: Vec<NodeResult>,
    pub any_found: bool,
    pub metrics: Metrics,
    /// Rounds of the oblivious phase schedule.
    pub budget: usize,
}

impl DetectResult {
    pub fn found_set(&self) -> BTreeSet<NodeId> {
        self.nodes.iter().filter(|r| r.found).map(|r| r.id).collect()
    }

    /// Witness of the smallest node that found a copy.
    pub fn witness(&self) -> Option<&SubgraphCopy> {
        self.nodes.iter().find_map(|r| r.witness.as_ref())
    }
}

fn guard_nodes(k: usize, what: &str) -> Result<(), DetectError> {
    if k > MAX_TARGET_NODES {
        return Err(DetectError::Guard(format!(
            "{what} has {k} nodes, at most {MAX_TARGET_NODES} are supported"
        )));
    }
    Ok(())
}

fn execute(
    g: &Graph,
    tree: &RootedTargetTree,
    full_target: &Graph,
    label: &'static str,
    key: Option<(usize, KeyFilter)>,
    cfg: &SimConfig,
) -> Result<(DetectResult, Transcript<DpOutput>), DetectError> {
    let wire = cfg.wire(g)?;
    let plan = Arc::new(Plan::new(label, tree, key, &wire));
    let t = run(g, cfg, |ctx| Phased::new(&ctx, DpNode::new(ctx, Arc::clone(&plan))))?;
    let mut nodes = Vec::with_capacity(g.n());
    for (a, out) in t.node_outputs.iter().enumerate() {
        let id = g.id(a);
        let witness = match &out.witness {
            Some(w) => {
                let mapping = tree.order.iter().copied().zip(w.iter().copied());
                Some(
                    SubgraphCopy::new(full_target, g, mapping)
                        .map_err(|source| DetectError::Witness { node: id, source })?,
                )
            }
            None => None,
        };
        nodes.push(NodeResult {
            id,
            found: out.found,
            witness,
        });
    }
    let result = DetectResult {
        any_found: nodes.iter().any(|r| r.found),
        nodes,
        metrics: metrics(&t),
        budget: plan.budget(),
    };
    Ok((result, t))
}

/// The path target on `k + 1` nodes `0..=k`, rooted at node `k`.
pub fn path_target(k: usize) -> RootedTargetTree {
    order_tree(&gen::path(k + 1), Some(k as NodeId)).expect("paths are trees")
}

/// Node `v` reports found iff some path with `k` edges ends at `v`.
pub fn detect_paths(g: &Graph, k: usize, cfg: &SimConfig) -> Result<DetectResult, DetectError> {
    path_run(g, k, cfg).map(|(r, _)| r)
}

/// Like [`detect_paths`] but also returns the transcript, whose node outputs
/// hold the families `P̂_{v,ℓ}` at position `ℓ`.
pub fn path_run(
    g: &Graph,
    k: usize,
    cfg: &SimConfig,
) -> Result<(DetectResult, Transcript<DpOutput>), DetectError> {
    if !(1..MAX_TARGET_NODES).contains(&k) {
        return Err(DetectError::Guard(format!("path length k = {k} must be in 1..={}", MAX_TARGET_NODES - 1)));
    }
    let tree = path_target(k);
    execute(g, &tree, &tree.target.clone(), "path", None, cfg)
}

fn check_cycle_k(k: usize) -> Result<(), DetectError> {
    if !(3..=MAX_TARGET_NODES).contains(&k) {
        return Err(DetectError::Guard(format!("cycle length k = {k} must be in 3..={MAX_TARGET_NODES}")));
    }
    Ok(())
}

/// Detects `k`-cycles through `w`; the neighbours of `w` on such a cycle
/// report found.
pub fn detect_cycles_fixed(
    g: &Graph,
    k: usize,
    w: NodeId,
    cfg: &SimConfig,
) -> Result<DetectResult, DetectError> {
    check_cycle_k(k)?;
    if g.index_of(w).is_none() {
        return Err(DetectError::Guard(format!("anchor {w} is not a node of the graph")));
    }
    let pt = prepare_pseudotree(&gen::cycle(k))?;
    pseudotree_run(g, &pt, KeyFilter::Only(w), "cycle", cfg).map(|(r, _)| r)
}

/// Detects `k`-cycles by running the anchored search for every anchor at
/// once; node `v` reports found iff it lies on a `k`-cycle.
pub fn detect_cycles(g: &Graph, k: usize, cfg: &SimConfig) -> Result<DetectResult, DetectError> {
    check_cycle_k(k)?;
    let pt = prepare_pseudotree(&gen::cycle(k))?;
    pseudotree_run(g, &pt, KeyFilter::All, "cycle", cfg).map(|(r, _)| r)
}

/// Node `v` reports found iff a copy of the tree maps its root to `v`.
pub fn detect_tree(
    g: &Graph,
    h: &RootedTargetTree,
    cfg: &SimConfig,
) -> Result<DetectResult, DetectError> {
    guard_nodes(h.k(), "target tree")?;
    execute(g, h, &h.target, "tree", None, cfg).map(|(r, _)| r)
}

/// Node `v` reports found iff a copy of the pseudotree maps `u2` to `v`.
pub fn detect_pseudotree(
    g: &Graph,
    h: &PseudotreeTarget,
    cfg: &SimConfig,
) -> Result<DetectResult, DetectError> {
    pseudotree_run(g, h, KeyFilter::All, "pseudotree", cfg).map(|(r, _)| r)
}

fn pseudotree_run(
    g: &Graph,
    h: &PseudotreeTarget,
    filter: KeyFilter,
    label: &'static str,
    cfg: &SimConfig,
) -> Result<(DetectResult, Transcript<DpOutput>), DetectError> {
    guard_nodes(h.tree.k(), "target pseudotree")?;
    execute(g, &h.tree, &h.target, label, Some((h.j, filter)), cfg)
}

/// Round budgets of the oblivious schedules, as run on `g` under `cfg`.
pub mod budget {
    use super::*;

    fn plan_budget(
        g: &Graph,
        tree: &RootedTargetTree,
        key: Option<(usize, KeyFilter)>,
        cfg: &SimConfig,
    ) -> Result<usize, DetectError> {
        let wire = cfg.wire(g)?;
        Ok(Plan::new("budget", tree, key, &wire).budget())
    }

    pub fn paths(g: &Graph, k: usize, cfg: &SimConfig) -> Result<usize, DetectError> {
        plan_budget(g, &path_target(k), None, cfg)
    }

    pub fn cycles(g: &Graph, k: usize, all_anchors: bool, cfg: &SimConfig) -> Result<usize, DetectError> {
        check_cycle_k(k)?;
        let pt = prepare_pseudotree(&gen::cycle(k))?;
        let filter = if all_anchors {
            KeyFilter::All
        } else {
            KeyFilter::Only(g.ids().first().copied().unwrap_or(0))
        };
        plan_budget(g, &pt.tree, Some((pt.j, filter)), cfg)
    }

    pub fn tree(g: &Graph, h: &RootedTargetTree, cfg: &SimConfig) -> Result<usize, DetectError> {
        plan_budget(g, h, None, cfg)
    }

    pub fn pseudotree(g: &Graph, h: &PseudotreeTarget, cfg: &SimConfig) -> Result<usize, DetectError> {
        plan_budget(g, &h.tree, Some((h.j, KeyFilter::All)), cfg)
    }
}
