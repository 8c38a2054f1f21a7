//! Binary covering codes of radius 1.
//!
//! The workhorse is a Hamming code of length `m = 2^r - 1` expanded to an
//! arbitrary length `N >= m` by leaving the suffix bits `m+1..N` free. Every
//! word of length `N` is then within Hamming distance 1 of the code, and the
//! density is exactly `2^-r <= 2/(N+1)`.
//!
//! Parity positions use the standard column map: the syndrome contribution of
//! bit position `t` (1-based) is the r-bit binary expansion of `t` itself, so
//! a nonzero syndrome names the unique prefix position whose flip repairs the
//! word.

use crate::error::{Error, Result};
use crate::word::Word;

/// Guard for the exhaustive covering verifier (2^N scan).
pub const VERIFY_MAX_LEN: usize = 24;
/// Guard for the exact minimum-cover search.
pub const MIN_COVER_MAX_LEN: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtendedHammingCode {
    len: usize,
    order: u32,
    hamming_len: usize,
}

/// Builds the radius-1 covering code of the given length.
///
/// `order` is the largest `r` with `2^r - 1 <= len` (`r = 0` for the empty
/// length, whose only codeword is the empty word).
pub fn build_code(len: usize) -> ExtendedHammingCode {
    let mut order = 0u32;
    while (1usize << (order + 1)) - 1 <= len {
        order += 1;
    }
    ExtendedHammingCode {
        len,
        order,
        hamming_len: (1usize << order) - 1,
    }
}

impl ExtendedHammingCode {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The Hamming order r.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Length m = 2^r - 1 of the constrained prefix.
    pub fn hamming_len(&self) -> usize {
        self.hamming_len
    }

    /// |C| / 2^N = 2^-r.
    pub fn density(&self) -> f64 {
        1.0 / (1u64 << self.order) as f64
    }

    /// log2 of the codeword count, i.e. N - r.
    pub fn codewords_log2(&self) -> usize {
        self.len - self.order as usize
    }

    /// XOR of the positions of set prefix bits, as an r-bit value.
    pub fn syndrome(&self, w: &Word) -> Result<usize> {
        self.check_len(w)?;
        let m = self.hamming_len;
        let mut acc = 0usize;
        for (bi, &blk) in w.blocks().iter().enumerate() {
            let base = bi << 6;
            if base >= m {
                break;
            }
            let mut b = blk;
            let remain = m - base;
            if remain < 64 {
                b &= (1u64 << remain) - 1;
            }
            while b != 0 {
                acc ^= base + b.trailing_zeros() as usize + 1;
                b &= b - 1;
            }
        }
        Ok(acc)
    }

    /// Membership: the length-m prefix has zero syndrome (always true for m = 0).
    pub fn contains(&self, w: &Word) -> Result<bool> {
        Ok(self.syndrome(w)? == 0)
    }

    /// The unique prefix position whose flip lands `w` in the code, or `None`
    /// if `w` is already a codeword.
    pub fn flip_to_code(&self, w: &Word) -> Result<Option<usize>> {
        let syn = self.syndrome(w)?;
        if syn == 0 {
            return Ok(None);
        }
        debug_assert!(syn >= 1 && syn <= self.hamming_len);
        Ok(Some(syn))
    }

    /// Exhaustive check that every length-N word lies within Hamming distance
    /// 1 of the code. Guarded to N <= 24.
    pub fn verify_covering(&self) -> Result<bool> {
        if self.len > VERIFY_MAX_LEN {
            return Err(Error::LengthGuard {
                max: VERIFY_MAX_LEN,
                got: self.len,
            });
        }
        for v in 0..(1u64 << self.len) {
            let w = Word::from_u64(self.len, v);
            if self.contains(&w)? {
                continue;
            }
            let covered = (1..=self.len).any(|i| {
                self.contains(&w.with_flipped(i))
                    .expect("length preserved by flip")
            });
            if !covered {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_len(&self, w: &Word) -> Result<()> {
        if w.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                got: w.len(),
            });
        }
        Ok(())
    }
}

/// Exact minimum-cardinality radius-1 covering code of length `len <= 5`,
/// found by branch-and-bound over Hamming balls. Deterministic: among minimum
/// covers it returns the one whose center list is lexicographically first.
pub fn exhaustive_min_cover(len: usize) -> Result<Vec<Word>> {
    if len > MIN_COVER_MAX_LEN {
        return Err(Error::LengthGuard {
            max: MIN_COVER_MAX_LEN,
            got: len,
        });
    }
    let space = 1u32 << len;
    let full: u32 = if len == 5 { u32::MAX } else { (1u32 << space) - 1 };
    // ball[w] marks all words within distance 1 of w, as a bitmask over 2^len.
    let balls: Vec<u32> = (0..space as u64)
        .map(|w| {
            let mut b = 1u32 << w;
            for i in 0..len {
                b |= 1u32 << (w ^ (1 << i));
            }
            b
        })
        .collect();

    fn search(
        balls: &[u32],
        full: u32,
        covered: u32,
        chosen: &mut Vec<u64>,
        budget: usize,
    ) -> Option<Vec<u64>> {
        if covered == full {
            return Some(chosen.clone());
        }
        if budget == 0 {
            return None;
        }
        // Branch on the centers able to cover the first uncovered word.
        let first = (!covered & full).trailing_zeros() as u64;
        let mut candidates: Vec<u64> = vec![first];
        candidates.extend((0..balls.len().trailing_zeros() as u64).map(|i| first ^ (1 << i)));
        candidates.sort_unstable();
        for c in candidates {
            chosen.push(c);
            if let Some(sol) = search(balls, full, covered | balls[c as usize], chosen, budget - 1)
            {
                chosen.pop();
                return Some(sol);
            }
            chosen.pop();
        }
        None
    }

    for size in 1..=space as usize {
        let mut chosen = Vec::new();
        if let Some(sol) = search(&balls, full, 0, &mut chosen, size) {
            return Ok(sol.into_iter().map(|v| Word::from_u64(len, v)).collect());
        }
    }
    // len = 0: the empty word covers the whole (singleton) space.
    Ok(vec![Word::zeros(0)])
}
