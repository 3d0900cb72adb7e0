//! JSON report types.

use bcongest::detect::DetectResult;
use bcongest::graph::{degeneracy, SubgraphCopy};
use bcongest::sim::Metrics;
use bcongest::sparse::CopySet;
use bcongest::{Graph, NodeId};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub degeneracy: usize,
}

impl GraphSummary {
    pub fn of(g: &Graph) -> Self {
        GraphSummary {
            n: g.n(),
            m: g.m(),
            degeneracy: degeneracy(g).0,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CopyReport {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub reporters: Vec<NodeId>,
}

#[derive(Debug, Default, Serialize)]
pub struct Outcome {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<bool>,
    /// Nodes whose local output was positive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found_nodes: Option<Vec<NodeId>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubgraphCopy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copy_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<Vec<CopyReport>>,
}

impl Outcome {
    pub fn detection(r: &DetectResult) -> Self {
        Outcome {
            found: Some(r.any_found),
            found_nodes: Some(r.found_set().into_iter().collect()),
            witness: r.witness().cloned(),
            ..Outcome::default()
        }
    }

    pub fn enumeration(c: &CopySet) -> Self {
        let copies = c
            .iter()
            .map(|(copy, reporters)| CopyReport {
                nodes: copy.nodes(),
                edges: copy.edge_image().to_vec(),
                reporters: reporters.iter().copied().collect(),
            })
            .collect();
        Outcome {
            found: Some(!c.is_empty()),
            copy_count: Some(c.len()),
            copies: Some(copies),
            ..Outcome::default()
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MetricsReport {
    pub rounds_used: usize,
    pub budget: usize,
    pub within_budget: bool,
    pub bandwidth: usize,
    pub max_message_bits: usize,
    pub total_bits: u64,
    pub phases: Vec<PhaseReport>,
}

#[derive(Debug, Serialize)]
pub struct PhaseReport {
    pub label: String,
    pub rounds: usize,
}

impl MetricsReport {
    pub fn new(m: &Metrics, budget: usize) -> Self {
        MetricsReport {
            rounds_used: m.rounds_used,
            budget,
            within_budget: m.rounds_used <= budget,
            bandwidth: m.bandwidth,
            max_message_bits: m.max_message_bits,
            total_bits: m.total_bits,
            phases: m
                .phases
                .iter()
                .map(|(label, rounds)| PhaseReport {
                    label: label.clone(),
                    rounds: *rounds,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Default, Serialize)]
pub struct ConfigReport {
    pub bandwidth_factor: usize,
    pub target: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<NodeId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dedup: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub graph: GraphSummary,
    pub result: Outcome,
    pub metrics: MetricsReport,
    /// Present iff `--check` was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<bool>,
    pub config: ConfigReport,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.metrics.within_budget && self.oracle_agreement != Some(false)
    }
}
