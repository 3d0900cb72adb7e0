//! Broadcast CONGEST simulator.

pub mod bits;
pub mod engine;
pub mod phased;
pub mod wire;

pub use bits::{BitReader, BitString};
pub use engine::{
    metrics, run, Metrics, NodeCtx, NodeFault, NodeProgram, PhaseSpan, SimConfig, SimError,
    Transcript,
};
pub use phased::{Phase, PhaseProgram, Phased};
pub use wire::{fragment, reassemble, CodecError, Wire};

use crate::graph::NodeId;

/// Learns neighbour ids by port: every node broadcasts its own id once.
pub fn id_phase(wire: &Wire, own: NodeId) -> Phase {
    let mut p = BitString::new();
    wire.put_id(&mut p, own);
    Phase::new("ids", wire.cap(wire.id_width), p)
}

/// Decodes the inbox of an [`id_phase`].
pub fn read_id_phase(wire: &Wire, inbox: &[Option<BitString>]) -> Result<Vec<NodeId>, NodeFault> {
    inbox
        .iter()
        .map(|m| {
            let m = m.as_ref().ok_or_else(|| NodeFault("silent neighbour in id phase".into()))?;
            Ok(wire.get_id(&mut m.reader())?)
        })
        .collect()
}
