//! Oracle comparisons behind `--check`.

use std::collections::BTreeSet;

use anyhow::Result;
use bcongest::detect::{DetectResult, PseudotreeTarget, RootedTargetTree};
use bcongest::gen;
use bcongest::graph::{oracle_enumerate, oracle_root_images};
use bcongest::sparse::{CopySet, Target};
use bcongest::{Graph, NodeId};

/// What a detection run is expected to mark as found.
pub enum Expect<'a> {
    Tree(&'a RootedTargetTree),
    Pseudotree(&'a PseudotreeTarget),
    Cycle(usize),
    AnchoredCycle(usize, NodeId),
}

pub fn oracle_found(g: &Graph, e: Expect<'_>) -> Result<BTreeSet<NodeId>> {
    Ok(match e {
        Expect::Tree(t) => oracle_root_images(g, &t.target, t.root)?,
        Expect::Pseudotree(p) => oracle_root_images(g, &p.target, p.u2())?,
        Expect::Cycle(k) => oracle_root_images(g, &gen::cycle(k), 0)?,
        Expect::AnchoredCycle(k, w) => {
            let mut out = BTreeSet::new();
            for c in oracle_enumerate(g, &gen::cycle(k))? {
                for &(x, y) in c.edge_image() {
                    if x == w {
                        out.insert(y);
                    } else if y == w {
                        out.insert(x);
                    }
                }
            }
            out
        }
    })
}

pub fn detection_agrees(g: &Graph, r: &DetectResult, e: Expect<'_>) -> Result<bool> {
    let want = oracle_found(g, e)?;
    Ok(r.found_set() == want && r.any_found == !want.is_empty())
}

pub fn enumeration_agrees(input: &Graph, target: Target, copies: &CopySet) -> Result<bool> {
    Ok(copies.copies() == oracle_enumerate(input, &target.graph())?)
}
