//! Message layout: field widths, fragmentation and the shared codecs.
//!
//! All fields are whole multiples of the word size `w = max(1, ⌈log2 n⌉)`,
//! and the bandwidth is `B = c_bw · w`. Field widths:
//!
//! | field          | width                                        |
//! |----------------|----------------------------------------------|
//! | node id        | `⌈id_bits / w⌉` words                        |
//! | count (max `c`)| 2 words, widened to fit `c` when needed      |
//! | chunk header   | 2 words, widened to fit `B` when needed      |
//!
//! Keeping every width a whole number of words makes phase lengths, in
//! rounds, depend only on the public parameters once words are wide enough
//! (`w >= 4`), which is what the round bounds for paths predict.

use thiserror::Error;

use super::bits::{BitReader, BitString, OutOfBits};
use crate::graph::NodeId;
use crate::repfam::SetFamily;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error(transparent)]
    OutOfBits(#[from] OutOfBits),
    #[error("chunk header declares {declared} payload bits but the chunk holds {held}")]
    BadHeader { declared: usize, held: usize },
    #[error("count {count} exceeds the phase bound {bound}")]
    CountTooLarge { count: usize, bound: usize },
    #[error("payload of {bits} bits needs more than {cap} chunks of {capacity} payload bits")]
    TooLarge {
        bits: usize,
        cap: usize,
        capacity: usize,
    },
    #[error("{0}")]
    Malformed(String),
}

/// Number of bits needed to write `x` in binary (at least 1).
pub fn bit_width(x: u64) -> usize {
    (64 - x.leading_zeros() as usize).max(1)
}

/// `⌈log2 x⌉` for `x >= 1`.
pub fn ceil_log2(x: u64) -> usize {
    if x <= 1 {
        0
    } else {
        bit_width(x - 1)
    }
}

/// Public message layout shared by all nodes of one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Wire {
    pub n: usize,
    pub word_bits: usize,
    pub bandwidth: usize,
    pub id_bits: usize,
    pub id_width: usize,
    pub header_width: usize,
}

impl Wire {
    /// Layout for `n` nodes (or a public upper bound on `n`), identifiers up
    /// to `max_id` and bandwidth factor `c_bw`.
    pub fn new(n: usize, max_id: NodeId, c_bw: usize) -> Result<Wire, CodecError> {
        let word_bits = ceil_log2(n as u64).max(1);
        let bandwidth = c_bw * word_bits;
        let words = |bits: usize| bits.div_ceil(word_bits) * word_bits;
        let id_bits = bit_width(max_id);
        let header_width = words((2 * word_bits).max(bit_width(bandwidth as u64)));
        if header_width >= bandwidth {
            return Err(CodecError::Malformed(format!(
                "bandwidth of {bandwidth} bits leaves no room after a {header_width}-bit chunk header"
            )));
        }
        Ok(Wire {
            n,
            word_bits,
            bandwidth,
            id_bits,
            id_width: words(id_bits),
            header_width,
        })
    }

    fn words(&self, bits: usize) -> usize {
        bits.div_ceil(self.word_bits) * self.word_bits
    }

    /// Payload bits carried by one chunk.
    pub fn capacity(&self) -> usize {
        self.bandwidth - self.header_width
    }

    /// Width of a count field able to hold values up to `max`.
    pub fn count_width(&self, max: usize) -> usize {
        self.words((2 * self.word_bits).max(bit_width(max as u64)))
    }

    /// Chunks (= rounds) needed for a payload of `bits` bits.
    pub fn cap(&self, bits: usize) -> usize {
        bits.div_ceil(self.capacity()).max(1)
    }

    pub fn put_id(&self, out: &mut BitString, id: NodeId) {
        out.push(id, self.id_width.min(64));
    }

    pub fn get_id(&self, r: &mut BitReader<'_>) -> Result<NodeId, CodecError> {
        Ok(r.read(self.id_width.min(64))?)
    }

    pub fn put_count(&self, out: &mut BitString, count: usize, max: usize) -> Result<(), CodecError> {
        if count > max {
            return Err(CodecError::CountTooLarge { count, bound: max });
        }
        out.push(count as u64, self.count_width(max).min(64));
        Ok(())
    }

    pub fn get_count(&self, r: &mut BitReader<'_>, max: usize) -> Result<usize, CodecError> {
        let c = r.read(self.count_width(max).min(64))? as usize;
        if c > max {
            return Err(CodecError::CountTooLarge { count: c, bound: max });
        }
        Ok(c)
    }

    /// Count-prefixed id list with at most `max` entries.
    pub fn put_ids(&self, out: &mut BitString, ids: &[NodeId], max: usize) -> Result<(), CodecError> {
        self.put_count(out, ids.len(), max)?;
        for &id in ids {
            self.put_id(out, id);
        }
        Ok(())
    }

    pub fn get_ids(&self, r: &mut BitReader<'_>, max: usize) -> Result<Vec<NodeId>, CodecError> {
        let c = self.get_count(r, max)?;
        (0..c).map(|_| self.get_id(r)).collect()
    }

    pub fn ids_bits(&self, max: usize) -> usize {
        self.count_width(max) + max * self.id_width
    }

    /// Worst-case size of a family of at most `max_members` sets of
    /// `set_size` ids, each optionally followed by a witness sequence of
    /// `set_size` ids.
    pub fn family_bits(&self, max_members: usize, set_size: usize, witness: bool) -> usize {
        let per = self.count_width(set_size) + set_size * self.id_width * (1 + usize::from(witness));
        self.count_width(max_members) + max_members * per
    }

    /// Family encoding: member count, then per member its set (count and
    /// ids) and, when `witness` is set, the witness id sequence, which has
    /// the same length as the set.
    pub fn put_family(
        &self,
        out: &mut BitString,
        fam: &SetFamily<Vec<NodeId>>,
        max_members: usize,
        set_size: usize,
        witness: bool,
    ) -> Result<(), CodecError> {
        self.put_count(out, fam.len(), max_members)?;
        for m in fam.members() {
            self.put_ids(out, &m.set, set_size)?;
            if witness {
                let w = m
                    .witness
                    .as_ref()
                    .ok_or_else(|| CodecError::Malformed("member without witness".into()))?;
                if w.len() != m.set.len() {
                    return Err(CodecError::Malformed("witness length differs from set size".into()));
                }
                for &id in w {
                    self.put_id(out, id);
                }
            }
        }
        Ok(())
    }

    pub fn get_family(
        &self,
        r: &mut BitReader<'_>,
        max_members: usize,
        set_size: usize,
        witness: bool,
    ) -> Result<SetFamily<Vec<NodeId>>, CodecError> {
        let c = self.get_count(r, max_members)?;
        let mut fam = SetFamily::new();
        for _ in 0..c {
            let set = self.get_ids(r, set_size)?;
            let w = if witness {
                Some((0..set.len()).map(|_| self.get_id(r)).collect::<Result<Vec<_>, _>>()?)
            } else {
                None
            };
            fam.push(set, w);
        }
        Ok(fam)
    }
}

/// Splits `payload` into exactly `cap` chunks of at most `B` bits, each a
/// header holding its payload length followed by that many payload bits.
/// Chunks past the end of the payload are header-only.
pub fn fragment(payload: &BitString, wire: &Wire, cap: usize) -> Result<Vec<BitString>, CodecError> {
    let capacity = wire.capacity();
    if payload.len() > cap * capacity {
        return Err(CodecError::TooLarge {
            bits: payload.len(),
            cap,
            capacity,
        });
    }
    let mut chunks = Vec::with_capacity(cap);
    let mut pos = 0;
    for _ in 0..cap {
        let take = capacity.min(payload.len() - pos);
        let mut c = BitString::new();
        c.push(take as u64, wire.header_width.min(64));
        c.extend_range(payload, pos, take);
        pos += take;
        chunks.push(c);
    }
    Ok(chunks)
}

/// Appends the payload part of one chunk to `out`.
pub fn unpack_chunk(chunk: &BitString, wire: &Wire, out: &mut BitString) -> Result<(), CodecError> {
    let mut r = chunk.reader();
    let declared = r.read(wire.header_width.min(64))? as usize;
    let held = r.remaining();
    if declared != held {
        return Err(CodecError::BadHeader { declared, held });
    }
    out.extend_range(chunk, wire.header_width, held);
    Ok(())
}

pub fn reassemble<'a>(
    chunks: impl IntoIterator<Item = &'a BitString>,
    wire: &Wire,
) -> Result<BitString, CodecError> {
    let mut out = BitString::new();
    for c in chunks {
        unpack_chunk(c, wire, &mut out)?;
    }
    Ok(out)
}
