//! Packed bit strings.

use std::fmt;

/// Growable bit string, most significant bit of each field first.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString[{}; ", self.len)?;
        for i in 0..self.len.min(64) {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        if self.len > 64 {
            write!(f, "...")?;
        }
        write!(f, "]")
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitString {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (63 - i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn push_bit(&mut self, bit: bool) {
        self.push(u64::from(bit), 1);
    }

    /// Appends the low `width` bits of `value` (`width <= 64`).
    pub fn push(&mut self, value: u64, width: usize) {
        assert!(width <= 64);
        if width == 0 {
            return;
        }
        assert!(
            width == 64 || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        let off = self.len % 64;
        if off == 0 {
            self.words.push(value << (64 - width));
        } else {
            let free = 64 - off;
            let last = self.words.last_mut().expect("nonzero offset");
            if width <= free {
                *last |= value << (free - width);
            } else {
                *last |= value >> (width - free);
                self.words.push(value << (64 - (width - free)));
            }
        }
        self.len += width;
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.extend_range(other, 0, other.len);
    }

    /// Appends `other[start..start + len]`.
    pub fn extend_range(&mut self, other: &BitString, start: usize, len: usize) {
        assert!(start + len <= other.len);
        let mut reader = BitReader::at(other, start);
        let mut left = len;
        while left > 0 {
            let w = left.min(64);
            self.push(reader.read(w).expect("range checked"), w);
            left -= w;
        }
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        let mut out = BitString::new();
        out.extend_range(self, start, len);
        out
    }

    pub fn reader(&self) -> BitReader<'_> {
        BitReader::at(self, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("read of {want} bits at position {pos} runs past the end ({len} bits)")]
pub struct OutOfBits {
    pub pos: usize,
    pub want: usize,
    pub len: usize,
}

/// Sequential reader over a [`BitString`].
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn at(bits: &'a BitString, pos: usize) -> Self {
        BitReader { bits, pos }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.bits.len - self.pos
    }

    /// Reads `width <= 64` bits as an unsigned integer.
    pub fn read(&mut self, width: usize) -> Result<u64, OutOfBits> {
        assert!(width <= 64);
        if width > self.remaining() {
            return Err(OutOfBits {
                pos: self.pos,
                want: width,
                len: self.bits.len,
            });
        }
        if width == 0 {
            return Ok(0);
        }
        let (w, off) = (self.pos / 64, self.pos % 64);
        let hi = self.bits.words[w] << off;
        let mut v = hi >> (64 - width);
        if off + width > 64 {
            let lo = self.bits.words[w + 1] >> (128 - off - width);
            v |= lo;
        }
        self.pos += width;
        Ok(v)
    }

    pub fn read_bit(&mut self) -> Result<bool, OutOfBits> {
        Ok(self.read(1)? == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read_across_word_boundaries() {
        let mut b = BitString::new();
        let fields: Vec<(u64, usize)> = (0..40).map(|i| ((i * 37 + 5) % (1 << (i % 13 + 1)), i as usize % 13 + 1)).collect();
        for &(v, w) in &fields {
            b.push(v, w);
        }
        b.push(u64::MAX, 64);
        let mut r = b.reader();
        for &(v, w) in &fields {
            assert_eq!(r.read(w).unwrap(), v);
        }
        assert_eq!(r.read(64).unwrap(), u64::MAX);
        assert!(r.read(1).is_err());
    }

    #[test]
    fn slicing_and_bits() {
        let mut b = BitString::new();
        b.push(0b1011, 4);
        b.push(0x1234_5678_9ABC, 48);
        b.push(0b01, 2);
        let s = b.slice(2, 50);
        assert_eq!(s.len(), 50);
        for i in 0..50 {
            assert_eq!(s.get(i), b.get(i + 2));
        }
        let mut z = BitString::zeros(70);
        z.set(69, true);
        assert!(z.get(69) && !z.get(68));
    }
}
