//! Phase-structured programs on an oblivious schedule.
//!
//! A [`PhaseProgram`] broadcasts one payload per phase. The payload is cut
//! into exactly `cap` chunks by [`fragment`], so a phase always lasts
//! `cap` rounds regardless of what the node has to say, and every node
//! follows the same schedule.

use super::bits::BitString;
use super::engine::{NodeCtx, NodeFault, NodeProgram};
use super::wire::{fragment, unpack_chunk, Wire};

/// One broadcast phase.
#[derive(Debug, Clone)]
pub struct Phase {
    pub label: String,
    /// Number of rounds; must be at least 1.
    pub cap: usize,
    pub payload: BitString,
}

impl Phase {
    pub fn new(label: impl Into<String>, cap: usize, payload: BitString) -> Self {
        Phase {
            label: label.into(),
            cap,
            payload,
        }
    }
}

pub trait PhaseProgram {
    type Output;

    /// The next phase to broadcast, or `None` once the node is finished.
    fn next_phase(&mut self) -> Result<Option<Phase>, NodeFault>;

    /// Reassembled neighbour payloads of the phase that just ended, by
    /// port. A neighbour that sent nothing yields `None`.
    fn deliver(&mut self, inbox: Vec<Option<BitString>>) -> Result<(), NodeFault>;

    fn finish(self) -> Self::Output;
}

struct Active {
    label: String,
    chunks: Vec<BitString>,
    sent: usize,
    bufs: Vec<Option<BitString>>,
}

/// Adapts a [`PhaseProgram`] to the round-level [`NodeProgram`] interface.
pub struct Phased<P> {
    prog: P,
    wire: Wire,
    degree: usize,
    active: Option<Active>,
}

impl<P: PhaseProgram> Phased<P> {
    pub fn new(ctx: &NodeCtx, prog: P) -> Self {
        Phased {
            prog,
            wire: ctx.wire,
            degree: ctx.degree,
            active: None,
        }
    }
}

impl<P: PhaseProgram> NodeProgram for Phased<P> {
    type Output = P::Output;

    fn emit(&mut self) -> Result<Option<BitString>, NodeFault> {
        if self.active.is_none() {
            let Some(phase) = self.prog.next_phase()? else {
                return Ok(None);
            };
            if phase.cap == 0 {
                return Err(NodeFault(format!("phase `{}` has no rounds", phase.label)));
            }
            let chunks = fragment(&phase.payload, &self.wire, phase.cap)
                .map_err(|e| NodeFault(format!("phase `{}`: {e}", phase.label)))?;
            self.active = Some(Active {
                label: phase.label,
                chunks,
                sent: 0,
                bufs: vec![Some(BitString::new()); self.degree],
            });
        }
        let a = self.active.as_mut().expect("set above");
        let chunk = a.chunks[a.sent].clone();
        a.sent += 1;
        Ok(Some(chunk))
    }

    fn phase_label(&self) -> &str {
        self.active.as_ref().map_or("", |a| a.label.as_str())
    }

    fn receive(&mut self, inbox: &[Option<&BitString>]) -> Result<(), NodeFault> {
        let a = self.active.as_mut().expect("receive follows emit");
        for (buf, msg) in a.bufs.iter_mut().zip(inbox) {
            match (buf.as_mut(), msg) {
                (Some(b), Some(m)) => unpack_chunk(m, &self.wire, b)?,
                (_, None) => *buf = None,
                (None, Some(_)) => {}
            }
        }
        if a.sent == a.chunks.len() {
            let done = self.active.take().expect("active");
            self.prog.deliver(done.bufs)?;
        }
        Ok(())
    }

    fn into_output(self) -> P::Output {
        self.prog.finish()
    }
}
