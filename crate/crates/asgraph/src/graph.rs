//! Simple labeled graphs on vertices `1..=n` stored as a symmetric bit
//! matrix, one `u64`-packed row per vertex.
//!
//! Edge slots are the `n(n-1)/2` unordered pairs `(u, v)`, `u < v`, in
//! lexicographic order; a graph is interchangeable with the length-`n(n-1)/2`
//! bit word over those slots. Seeded sampling draws that word from a
//! deterministic stream, so a `(seed, stream)` pair pins the graph exactly.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{Error, Result};
use crate::word::{copy_bits, Word};

/// Guard for iterated-degree depth.
pub const MAX_SIGNATURE_DEPTH: usize = 8;

/// Deterministic seed for one stream of randomness.
///
/// `seed` names the experiment, `stream` the trial. The generator key is
/// derived by running splitmix64 twice on each half, so distinct pairs give
/// unrelated ChaCha8 streams and identical pairs reproduce bit-identical
/// output within a build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedSpec {
    pub seed: u64,
    pub stream: u64,
}

impl SeedSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        SeedSpec { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        fn splitmix64(state: &mut u64) -> u64 {
            *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = *state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        }
        let mut key = [0u8; 32];
        let mut a = self.seed;
        let mut b = self.stream ^ 0x6a09_e667_f3bc_c909;
        key[0..8].copy_from_slice(&splitmix64(&mut a).to_le_bytes());
        key[8..16].copy_from_slice(&splitmix64(&mut a).to_le_bytes());
        key[16..24].copy_from_slice(&splitmix64(&mut b).to_le_bytes());
        key[24..32].copy_from_slice(&splitmix64(&mut b).to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }
}

/// An unordered vertex pair held with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeSlot {
    u: usize,
    v: usize,
}

impl EdgeSlot {
    /// Normalizes the order; rejects `u == v` and indices below 1.
    pub fn new(u: usize, v: usize) -> Result<Self> {
        if u == v || u == 0 || v == 0 {
            return Err(Error::InvalidSlot { u, v });
        }
        Ok(EdgeSlot {
            u: u.min(v),
            v: u.max(v),
        })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// 1-based lexicographic slot index among the pairs of `1..=n`.
    pub fn index(&self, n: usize) -> Result<usize> {
        if self.v > n {
            return Err(Error::InvalidVertex { v: self.v, n });
        }
        Ok(pair_to_slot(n, self.u, self.v))
    }

    /// Inverse of [`EdgeSlot::index`].
    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        let total = n * (n.saturating_sub(1)) / 2;
        if index == 0 || index > total {
            return Err(Error::InvalidSlotIndex { index, n });
        }
        let (u, v) = slot_to_pair(n, index);
        Ok(EdgeSlot { u, v })
    }
}

/// 1-based slot index of pair `(u, v)`, `u < v`, among pairs of `1..=n`.
pub(crate) fn pair_to_slot(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v <= n);
    (u - 1) * n - u * (u - 1) / 2 + (v - u)
}

/// Inverse of [`pair_to_slot`].
pub(crate) fn slot_to_pair(n: usize, index: usize) -> (usize, usize) {
    let mut rest = index;
    let mut u = 1;
    while rest > n - u {
        rest -= n - u;
        u += 1;
    }
    (u, u + rest)
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    row_words: usize,
    rows: Vec<u64>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let row_words = n.div_ceil(64);
        Graph {
            n,
            row_words,
            rows: vec![0; n * row_words],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..=n {
            for v in (u + 1)..=n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    /// Uniform random graph: each slot is an independent fair bit drawn from
    /// the stream of `s`, consumed in lexicographic slot order.
    pub fn random(n: usize, s: SeedSpec) -> Self {
        assert!(n >= 1, "random graph needs n >= 1");
        let slots = n * (n - 1) / 2;
        let word = Word::random(slots, &mut s.rng());
        Graph::decode_word(n, &word).expect("slot count matches by construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slot_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    #[inline]
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        let r = v - 1;
        &self.rows[r * self.row_words..(r + 1) * self.row_words]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n && u != v);
        let c = v - 1;
        (self.row(u)[c >> 6] >> (c & 63)) & 1 == 1
    }

    fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        let (ru, cv) = (u - 1, v - 1);
        let w = self.row_words;
        if present {
            self.rows[ru * w + (cv >> 6)] |= 1u64 << (cv & 63);
            self.rows[cv * w + (ru >> 6)] |= 1u64 << (ru & 63);
        } else {
            self.rows[ru * w + (cv >> 6)] &= !(1u64 << (cv & 63));
            self.rows[cv * w + (ru >> 6)] &= !(1u64 << (ru & 63));
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        (1..=self.n)
            .map(|v| self.row(v).iter().map(|w| w.count_ones()).sum())
            .collect()
    }

    pub fn edge_count(&self) -> u64 {
        let total: u64 = self.rows.iter().map(|w| w.count_ones() as u64).sum();
        total / 2
    }

    /// Number of set bits of `row(v) & mask`.
    pub(crate) fn count_in_mask(&self, v: usize, mask: &[u64]) -> u32 {
        self.row(v)
            .iter()
            .zip(mask)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Fresh graph differing from `self` exactly in slot `e`.
    pub fn flip(&self, e: EdgeSlot) -> Result<Graph> {
        if e.v() > self.n {
            return Err(Error::InvalidVertex { v: e.v(), n: self.n });
        }
        let mut g = self.clone();
        let now = g.has_edge(e.u(), e.v());
        g.set_edge(e.u(), e.v(), !now);
        Ok(g)
    }

    /// Number of slots in which the two graphs differ.
    pub fn diff_count(&self, other: &Graph) -> Result<u64> {
        if self.n != other.n {
            return Err(Error::InvalidConfig(format!(
                "cannot diff graphs on {} and {} vertices",
                self.n, other.n
            )));
        }
        let xor_bits: u64 = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum();
        Ok(xor_bits / 2)
    }

    /// Subgraph induced on the given vertex set, relabeled `1..=|S|` in
    /// ascending original order.
    pub fn induced(&self, verts: &[usize]) -> Result<Graph> {
        let mut sorted = verts.to_vec();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::InvalidSlot {
                    u: pair[0],
                    v: pair[1],
                });
            }
        }
        if let Some(&v) = sorted.last() {
            if v > self.n || sorted[0] == 0 {
                return Err(Error::InvalidVertex { v, n: self.n });
            }
        }
        let mut g = Graph::empty(sorted.len());
        for (i, &a) in sorted.iter().enumerate() {
            for (j, &b) in sorted.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set_edge(i + 1, j + 1, true);
                }
            }
        }
        Ok(g)
    }

    /// Image graph under `perm`: vertex `i` maps to `perm[i-1]`, and the
    /// output has an edge at `(perm(u), perm(v))` iff `self` has one at
    /// `(u, v)`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::InvalidPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p == 0 || p > self.n || seen[p - 1] {
                return Err(Error::InvalidPermutation(self.n));
            }
            seen[p - 1] = true;
        }
        let mut g = Graph::empty(self.n);
        for u in 1..=self.n {
            for v in (u + 1)..=self.n {
                if self.has_edge(u, v) {
                    g.set_edge(perm[u - 1], perm[v - 1], true);
                }
            }
        }
        Ok(g)
    }

    /// Adjacency word of the relabeled graph: bit at the lexicographic slot
    /// of `(i, j)` is the adjacency of `order[i-1]` and `order[j-1]`. `order`
    /// must be a permutation of `1..=n`.
    pub fn encode_word(&self, order: &[usize]) -> Result<Word> {
        if order.len() != self.n {
            return Err(Error::InvalidPermutation(self.n));
        }
        let mut seen = vec![false; self.n];
        for &p in order {
            if p == 0 || p > self.n || seen[p - 1] {
                return Err(Error::InvalidPermutation(self.n));
            }
            seen[p - 1] = true;
        }
        Ok(self.pair_word_unchecked(order))
    }

    /// Adjacency word over the pairs of an arbitrary sequence of distinct
    /// vertices, in the given order. This is the encoding of the induced
    /// subgraph relabeled by position.
    pub fn pair_word(&self, seq: &[usize]) -> Result<Word> {
        let mut seen = vec![false; self.n];
        for &p in seq {
            if p == 0 || p > self.n {
                return Err(Error::InvalidVertex { v: p, n: self.n });
            }
            if seen[p - 1] {
                return Err(Error::InvalidSlot { u: p, v: p });
            }
            seen[p - 1] = true;
        }
        Ok(self.pair_word_unchecked(seq))
    }

    fn pair_word_unchecked(&self, seq: &[usize]) -> Word {
        let w = seq.len();
        let nbits = w * w.saturating_sub(1) / 2;
        let mut blocks = vec![0u64; nbits.div_ceil(64)];
        let mut pos = 0usize;
        for (i, &a) in seq.iter().enumerate() {
            let row = self.row(a);
            for &b in &seq[i + 1..] {
                let c = b - 1;
                let bit = (row[c >> 6] >> (c & 63)) & 1;
                blocks[pos >> 6] |= bit << (pos & 63);
                pos += 1;
            }
        }
        Word::from_blocks(nbits, blocks)
    }

    /// Rebuilds a graph from its slot word (identity labeling).
    pub fn decode_word(n: usize, w: &Word) -> Result<Graph> {
        let slots = n * n.saturating_sub(1) / 2;
        if w.len() != slots {
            return Err(Error::LengthMismatch {
                expected: slots,
                got: w.len(),
            });
        }
        let mut g = Graph::empty(n);
        // Row u's slots (u, u+1..n) are one contiguous run of the word.
        let mut off = 0usize;
        for u in 0..n {
            let len = n - 1 - u;
            let dst = &mut g.rows[u * g.row_words..(u + 1) * g.row_words];
            copy_bits(w.blocks(), off, dst, u + 1, len);
            off += len;
        }
        g.mirror_upper();
        Ok(g)
    }

    /// OR the transpose into the matrix, turning an upper-triangular fill
    /// into a symmetric adjacency matrix. Works on 64x64 bit blocks.
    fn mirror_upper(&mut self) {
        let blocks = self.row_words;
        let mut scratch = [0u64; 64];
        let mut transposed = vec![0u64; self.rows.len()];
        for bi in 0..blocks {
            for bj in 0..blocks {
                // Load block (bi, bj): rows 64*bi.., word bj of each row.
                for r in 0..64 {
                    let row = bi * 64 + r;
                    scratch[r] = if row < self.n {
                        self.rows[row * blocks + bj]
                    } else {
                        0
                    };
                }
                transpose64(&mut scratch);
                for r in 0..64 {
                    let row = bj * 64 + r;
                    if row < self.n {
                        transposed[row * blocks + bi] |= scratch[r];
                    }
                }
            }
        }
        for (dst, src) in self.rows.iter_mut().zip(&transposed) {
            *dst |= src;
        }
    }

    /// Iterated-degree signatures: depth 0 is constant, depth `s` hashes the
    /// sorted multiset of the neighbors' depth `s-1` signatures. Equal
    /// multisets always hash equal; unequal ones collide only with hash
    /// probability, which the tests here ignore.
    pub fn iterated_degree_signature(&self, s: usize) -> Result<Vec<u64>> {
        if s > MAX_SIGNATURE_DEPTH {
            return Err(Error::SignatureDepth {
                max: MAX_SIGNATURE_DEPTH,
                got: s,
            });
        }
        let mut sig = vec![0u64; self.n];
        let mut buf: Vec<u64> = Vec::with_capacity(self.n);
        for _ in 0..s {
            let mut next = vec![0u64; self.n];
            for v in 1..=self.n {
                buf.clear();
                for (bi, &blk) in self.row(v).iter().enumerate() {
                    let mut b = blk;
                    while b != 0 {
                        let u = (bi << 6) + b.trailing_zeros() as usize;
                        buf.push(sig[u]);
                        b &= b - 1;
                    }
                }
                buf.sort_unstable();
                next[v - 1] = hash_multiset(&buf);
            }
            sig = next;
        }
        Ok(sig)
    }

    /// ASGRAPH v1: `n=<decimal>` on line 1, then the slot word as lowercase
    /// hex, most significant bit of each byte first, zero padded to a byte
    /// boundary.
    pub fn to_asgraph(&self) -> String {
        let word = self.pair_word_unchecked(&(1..=self.n).collect::<Vec<_>>());
        let nbits = word.len();
        let mut bytes = vec![0u8; nbits.div_ceil(8)];
        for pos in word.iter_ones() {
            let i = pos - 1;
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
        let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
        format!("n={}\n{}\n", self.n, hex)
    }

    /// Parses the ASGRAPH v1 format. Rejects malformed headers, payloads of
    /// the wrong length, non-hex characters, and nonzero padding bits.
    pub fn parse_asgraph(text: &str) -> Result<Graph> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad vertex count: {e}")))?;
        let payload = lines.next().unwrap_or("").trim();
        if lines.any(|extra| !extra.trim().is_empty()) {
            return Err(Error::Parse("trailing content after payload".into()));
        }
        let slots = n * n.saturating_sub(1) / 2;
        let expect_bytes = slots.div_ceil(8);
        if payload.len() != expect_bytes * 2 {
            return Err(Error::Parse(format!(
                "payload has {} hex digits, expected {}",
                payload.len(),
                expect_bytes * 2
            )));
        }
        let mut bytes = Vec::with_capacity(expect_bytes);
        for chunk in payload.as_bytes().chunks(2) {
            let s = std::str::from_utf8(chunk).map_err(|_| Error::Parse("non-ascii".into()))?;
            bytes.push(
                u8::from_str_radix(s, 16)
                    .map_err(|_| Error::Parse(format!("non-hex byte {s:?}")))?,
            );
        }
        let mut word = Word::zeros(slots);
        for i in 0..slots {
            if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
                word.set(i + 1, true);
            }
        }
        // Padding bits past the last slot must be zero.
        for i in slots..expect_bytes * 8 {
            if bytes[i / 8] & (0x80 >> (i % 8)) != 0 {
                return Err(Error::Parse("nonzero padding bits".into()));
            }
        }
        Graph::decode_word(n, &word)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={})", self.n, self.edge_count())
    }
}

fn hash_multiset(sorted: &[u64]) -> u64 {
    // FNV-1a over the sorted values, then a splitmix64 finalizer.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &v in sorted {
        for byte in v.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fisher-Yates permutation of `1..=n`; test helper shared across modules.
#[cfg(test)]
pub(crate) fn random_permutation(n: usize, rng: &mut impl rand_core::RngCore) -> Vec<usize> {
    let mut perm: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    perm
}

/// In-place transpose of a 64x64 bit matrix (one u64 per row, bit c of a
/// row = column c). Recursive block swaps with halving strides.
fn transpose64(a: &mut [u64; 64]) {
    let mut j = 32;
    let mut m = 0x0000_0000_ffff_ffffu64;
    while j != 0 {
        let mut k = 0;
        while k < 64 {
            let t = ((a[k] >> j) ^ a[k + j]) & m;
            a[k] ^= t << j;
            a[k + j] ^= t;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        m ^= m << j;
    }
}
