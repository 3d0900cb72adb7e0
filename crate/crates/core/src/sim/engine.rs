//! Round-synchronous Broadcast CONGEST engine.

use serde::Serialize;
use thiserror::Error;

use super::bits::BitString;
use super::wire::{CodecError, Wire};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    /// `c_bw`: the bandwidth is `c_bw · max(1, ⌈log2 n⌉)` bits.
    pub bandwidth_factor: usize,
    pub max_rounds: usize,
    /// Public upper bound on `n` used for field widths; `None` means exact `n`.
    pub n_bound: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            bandwidth_factor: 16,
            max_rounds: 1_000_000,
            n_bound: None,
        }
    }
}

impl SimConfig {
    pub fn wire(&self, g: &Graph) -> Result<Wire, SimError> {
        if self.bandwidth_factor == 0 || self.max_rounds == 0 {
            return Err(SimError::Config("bandwidth_factor and max_rounds must be positive".into()));
        }
        let n = match self.n_bound {
            Some(b) if b < g.n() => {
                return Err(SimError::Config(format!("n_bound {b} is below n = {}", g.n())))
            }
            Some(b) => b,
            None => g.n(),
        };
        Wire::new(n, g.max_id().unwrap_or(0), self.bandwidth_factor).map_err(SimError::Codec)
    }
}

/// What a node knows before the first round.
#[derive(Debug, Clone, Copy)]
pub struct NodeCtx {
    pub id: NodeId,
    pub degree: usize,
    pub wire: Wire,
}

/// Error raised by a node program; the engine tags it with node and round.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct NodeFault(pub String);

impl From<CodecError> for NodeFault {
    fn from(e: CodecError) -> Self {
        NodeFault(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("node {node} broadcast {bits} bits in round {round}, bandwidth is {limit}")]
    Bandwidth {
        node: NodeId,
        round: usize,
        bits: usize,
        limit: usize,
    },
    #[error("no termination within {max_rounds} rounds")]
    Timeout { max_rounds: usize },
    #[error("node {node} failed in round {round}: {reason}")]
    Node {
        node: NodeId,
        round: usize,
        reason: String,
    },
    #[error("round {round}: node {node} is in phase `{found}` while others are in `{expected}`")]
    PhaseDesync {
        round: usize,
        node: NodeId,
        expected: String,
        found: String,
    },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// A node algorithm driven round by round.
///
/// In each round the engine first calls [`emit`](NodeProgram::emit) on every
/// running node, then hands each running node the messages of its
/// neighbours, indexed by port (position in the ascending-id neighbour
/// list). Returning `None` from `emit` halts the node for good.
pub trait NodeProgram {
    type Output;

    fn emit(&mut self) -> Result<Option<BitString>, NodeFault>;

    /// Label of the phase the node is in during the current round.
    fn phase_label(&self) -> &str;

    fn receive(&mut self, inbox: &[Option<&BitString>]) -> Result<(), NodeFault>;

    fn into_output(self) -> Self::Output;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseSpan {
    pub label: String,
    pub first_round: usize,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript<O> {
    pub rounds_used: usize,
    pub bandwidth: usize,
    pub wire: Wire,
    pub node_ids: Vec<NodeId>,
    pub degrees: Vec<usize>,
    /// `per_round_bits[r][a]`: payload size of node index `a` in round `r+1`.
    pub per_round_bits: Vec<Vec<u32>>,
    pub node_outputs: Vec<O>,
    pub phase_log: Vec<PhaseSpan>,
}

impl<O> Transcript<O> {
    pub fn output_of(&self, id: NodeId) -> Option<&O> {
        self.node_ids.binary_search(&id).ok().map(|a| &self.node_outputs[a])
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub rounds_used: usize,
    pub bandwidth: usize,
    pub max_message_bits: usize,
    /// Sum over rounds and nodes of payload bits times degree.
    pub total_bits: u64,
    pub phases: Vec<(String, usize)>,
}

impl Metrics {
    /// Sequential composition of two runs.
    pub fn then(mut self, other: &Metrics) -> Metrics {
        self.rounds_used += other.rounds_used;
        self.bandwidth = self.bandwidth.max(other.bandwidth);
        self.max_message_bits = self.max_message_bits.max(other.max_message_bits);
        self.total_bits += other.total_bits;
        self.phases.extend(other.phases.iter().cloned());
        self
    }

    pub fn phase_rounds(&self, label: &str) -> usize {
        self.phases.iter().filter(|(l, _)| l == label).map(|(_, r)| r).sum()
    }
}

pub fn metrics<O>(t: &Transcript<O>) -> Metrics {
    let mut max_message_bits = 0;
    let mut total_bits = 0u64;
    for round in &t.per_round_bits {
        for (a, &bits) in round.iter().enumerate() {
            max_message_bits = max_message_bits.max(bits as usize);
            total_bits += bits as u64 * t.degrees[a] as u64;
        }
    }
    Metrics {
        rounds_used: t.rounds_used,
        bandwidth: t.bandwidth,
        max_message_bits,
        total_bits,
        phases: t.phase_log.iter().map(|p| (p.label.clone(), p.rounds)).collect(),
    }
}

/// Runs one program instance per node until all halt.
pub fn run<P, F>(g: &Graph, cfg: &SimConfig, mut make: F) -> Result<Transcript<P::Output>, SimError>
where
    P: NodeProgram,
    F: FnMut(NodeCtx) -> P,
{
    let wire = cfg.wire(g)?;
    let n = g.n();
    let mut nodes: Vec<P> = (0..n)
        .map(|a| {
            make(NodeCtx {
                id: g.id(a),
                degree: g.degree(a),
                wire,
            })
        })
        .collect();
    let mut running = vec![true; n];
    let mut per_round_bits = Vec::new();
    let mut phase_log: Vec<PhaseSpan> = Vec::new();
    let mut outbox: Vec<Option<BitString>> = vec![None; n];
    let mut round = 0;
    loop {
        let this_round = round + 1;
        let fault = |a: usize, e: NodeFault| SimError::Node {
            node: g.id(a),
            round: this_round,
            reason: e.0,
        };
        for a in 0..n {
            outbox[a] = None;
            if running[a] {
                match nodes[a].emit().map_err(|e| fault(a, e))? {
                    Some(msg) => outbox[a] = Some(msg),
                    None => running[a] = false,
                }
            }
        }
        if !running.iter().any(|&r| r) {
            break;
        }
        round = this_round;
        if round > cfg.max_rounds {
            return Err(SimError::Timeout {
                max_rounds: cfg.max_rounds,
            });
        }

        let mut sizes = vec![0u32; n];
        let mut label: Option<&str> = None;
        for a in (0..n).filter(|&a| running[a]) {
            let bits = outbox[a].as_ref().map_or(0, BitString::len);
            if bits > wire.bandwidth {
                return Err(SimError::Bandwidth {
                    node: g.id(a),
                    round,
                    bits,
                    limit: wire.bandwidth,
                });
            }
            sizes[a] = bits as u32;
            let l = nodes[a].phase_label();
            match label {
                None => label = Some(l),
                Some(expected) if expected != l => {
                    return Err(SimError::PhaseDesync {
                        round,
                        node: g.id(a),
                        expected: expected.to_string(),
                        found: l.to_string(),
                    })
                }
                Some(_) => {}
            }
        }
        let label = label.expect("some node is running").to_string();
        match phase_log.last_mut() {
            Some(span) if span.label == label && span.first_round + span.rounds == round => {
                span.rounds += 1
            }
            _ => phase_log.push(PhaseSpan {
                label,
                first_round: round,
                rounds: 1,
            }),
        }
        per_round_bits.push(sizes);

        for a in 0..n {
            if !running[a] {
                continue;
            }
            let inbox: Vec<Option<&BitString>> =
                g.neighbors(a).iter().map(|&b| outbox[b].as_ref()).collect();
            nodes[a].receive(&inbox).map_err(|e| SimError::Node {
                node: g.id(a),
                round,
                reason: e.0,
            })?;
        }
    }
    Ok(Transcript {
        rounds_used: round,
        bandwidth: wire.bandwidth,
        wire,
        node_ids: g.ids().to_vec(),
        degrees: (0..n).map(|a| g.degree(a)).collect(),
        per_round_bits,
        node_outputs: nodes.into_iter().map(P::into_output).collect(),
        phase_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    /// Broadcasts a fixed payload for `rounds` rounds and records what arrives.
    struct Chatter {
        ctx: NodeCtx,
        rounds: usize,
        extra_bits: usize,
        heard: Vec<Vec<NodeId>>,
    }

    impl NodeProgram for Chatter {
        type Output = Vec<Vec<NodeId>>;

        fn emit(&mut self) -> Result<Option<BitString>, NodeFault> {
            if self.heard.len() == self.rounds {
                return Ok(None);
            }
            let mut b = BitString::new();
            self.ctx.wire.put_id(&mut b, self.ctx.id);
            for _ in 0..self.extra_bits {
                b.push_bit(false);
            }
            Ok(Some(b))
        }

        fn phase_label(&self) -> &str {
            "chatter"
        }

        fn receive(&mut self, inbox: &[Option<&BitString>]) -> Result<(), NodeFault> {
            assert_eq!(inbox.len(), self.ctx.degree);
            let ids = inbox
                .iter()
                .map(|m| self.ctx.wire.get_id(&mut m.expect("all talk").reader()))
                .collect::<Result<_, _>>()?;
            self.heard.push(ids);
            Ok(())
        }

        fn into_output(self) -> Self::Output {
            self.heard
        }
    }

    fn chatter(rounds: usize, extra: usize) -> impl FnMut(NodeCtx) -> Chatter {
        move |ctx| Chatter {
            ctx,
            rounds,
            extra_bits: extra,
            heard: Vec::new(),
        }
    }

    #[test]
    fn triangle_id_exchange() {
        let g = gen::complete(3);
        let t = run(&g, &SimConfig::default(), chatter(1, 0)).unwrap();
        assert_eq!(t.rounds_used, 1);
        assert_eq!(t.node_outputs[0], vec![vec![1, 2]]);
        assert_eq!(t.node_outputs[2], vec![vec![0, 1]]);
        let m = metrics(&t);
        assert_eq!(m.max_message_bits, t.wire.id_width);
        assert_eq!(m.total_bits, 3 * 2 * t.wire.id_width as u64);
        assert_eq!(m.phases, vec![("chatter".to_string(), 1)]);
    }

    #[test]
    fn halting_immediately_costs_nothing() {
        let g = gen::cycle(5);
        let t = run(&g, &SimConfig::default(), chatter(0, 0)).unwrap();
        let m = metrics(&t);
        assert_eq!((m.rounds_used, m.total_bits), (0, 0));
    }

    #[test]
    fn oversized_payload_faults_in_round_one() {
        let g = gen::complete(3);
        let cfg = SimConfig::default();
        let w = cfg.wire(&g).unwrap();
        let err = run(&g, &cfg, chatter(1, w.bandwidth + 1 - w.id_width)).unwrap_err();
        assert!(matches!(err, SimError::Bandwidth { round: 1, node: 0, .. }), "{err}");
        assert!(run(&g, &cfg, chatter(1, w.bandwidth - w.id_width)).is_ok());
    }

    #[test]
    fn timeout_is_reported() {
        let g = gen::path(4);
        let cfg = SimConfig {
            max_rounds: 3,
            ..SimConfig::default()
        };
        assert_eq!(
            run(&g, &cfg, chatter(4, 0)).unwrap_err(),
            SimError::Timeout { max_rounds: 3 }
        );
        assert!(run(&g, &cfg, chatter(3, 0)).is_ok());
    }

    #[test]
    fn runs_are_deterministic() {
        let g = gen::gnp(15, 0.3, 1);
        let a = run(&g, &SimConfig::default(), chatter(2, 3)).unwrap();
        let b = run(&g, &SimConfig::default(), chatter(2, 3)).unwrap();
        assert_eq!(a, b);
    }
}
