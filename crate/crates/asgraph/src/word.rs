//! Fixed-length bit words with 1-based indexing.
//!
//! Bits live in `u64` blocks, least significant bit first, and every bit past
//! `len` is kept at zero so equality and popcounts can work blockwise.

use rand_core::RngCore;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    len: usize,
    blocks: Vec<u64>,
}

impl Word {
    /// The all-zero word of the given length. Length 0 is the empty word.
    pub fn zeros(len: usize) -> Self {
        Word {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    /// Builds a word from raw blocks; tail bits beyond `len` are cleared.
    pub fn from_blocks(len: usize, mut blocks: Vec<u64>) -> Self {
        assert_eq!(blocks.len(), len.div_ceil(64), "block count mismatch");
        if len % 64 != 0 {
            if let Some(last) = blocks.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        Word { len, blocks }
    }

    /// Parses a string of `0`/`1` characters, first character = bit 1.
    pub fn from_bits(s: &str) -> Result<Self> {
        let mut w = Word::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i + 1, true),
                _ => return Err(Error::Parse(format!("invalid bit character {c:?}"))),
            }
        }
        Ok(w)
    }

    /// Low bits of `v` spread over a short word; only valid for `len <= 64`.
    pub fn from_u64(len: usize, v: u64) -> Self {
        assert!(len <= 64);
        let masked = if len == 64 {
            v
        } else {
            v & ((1u64 << len) - 1)
        };
        Word {
            len,
            blocks: if len == 0 { vec![] } else { vec![masked] },
        }
    }

    /// `len` fair bits drawn from `rng`, consumed 64 at a time, LSB first.
    pub fn random<R: RngCore>(len: usize, rng: &mut R) -> Self {
        let mut blocks = vec![0u64; len.div_ceil(64)];
        for b in blocks.iter_mut() {
            *b = rng.next_u64();
        }
        Word::from_blocks(len, blocks)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at 1-based position `pos`.
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos >= 1 && pos <= self.len, "bit index {pos} out of range");
        let i = pos - 1;
        (self.blocks[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos >= 1 && pos <= self.len, "bit index {pos} out of range");
        let i = pos - 1;
        if value {
            self.blocks[i >> 6] |= 1u64 << (i & 63);
        } else {
            self.blocks[i >> 6] &= !(1u64 << (i & 63));
        }
    }

    pub fn flip(&mut self, pos: usize) {
        assert!(pos >= 1 && pos <= self.len, "bit index {pos} out of range");
        let i = pos - 1;
        self.blocks[i >> 6] ^= 1u64 << (i & 63);
    }

    /// Copy with one bit toggled.
    pub fn with_flipped(&self, pos: usize) -> Self {
        let mut w = self.clone();
        w.flip(pos);
        w
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// Ascending 1-based positions of set bits.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &blk)| {
            let base = bi << 6;
            std::iter::successors(
                if blk == 0 { None } else { Some(blk) },
                |b| {
                    let b = b & (b - 1);
                    if b == 0 {
                        None
                    } else {
                        Some(b)
                    }
                },
            )
            .map(move |b| base + b.trailing_zeros() as usize + 1)
        })
    }

    pub fn bit_string(&self) -> String {
        (1..=self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.len <= 64 {
            write!(f, "Word[{}]({})", self.len, self.bit_string())
        } else {
            write!(f, "Word[{}](ones={})", self.len, self.count_ones())
        }
    }
}

/// Copies `len` bits from `src` starting at bit `src_off` into `dst` starting
/// at bit `dst_off`. Offsets are 0-based bit positions in LSB-first blocks.
/// Destination bits must currently be zero (bits are OR-ed in).
pub(crate) fn copy_bits(src: &[u64], src_off: usize, dst: &mut [u64], dst_off: usize, len: usize) {
    let mut copied = 0;
    while copied < len {
        let s = src_off + copied;
        let d = dst_off + copied;
        let take = (64 - (s & 63)).min(64 - (d & 63)).min(len - copied);
        let chunk = (src[s >> 6] >> (s & 63)) & mask_lo(take);
        dst[d >> 6] |= chunk << (d & 63);
        copied += take;
    }
}

#[inline]
fn mask_lo(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}
