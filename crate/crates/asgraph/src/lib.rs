//! Anti-stochastic graph properties at desk scale.
//!
//! A property is anti-stochastic when a uniform random graph almost never
//! has it, yet changing the adjacency of a single vertex pair almost always
//! suffices to produce it. This crate implements two such constructions and
//! the infrastructure to probe them empirically:
//!
//! - [`covercode`]: radius-1 binary covering codes (expanded Hamming codes)
//!   with membership, repair-flip and exhaustive verification oracles;
//! - [`graph`]: bit-matrix graphs on `1..=n` with seeded uniform sampling,
//!   single-pair flips, induced subgraphs, permutation, word encoding,
//!   iterated-degree signatures, and the ASGRAPH v1 file format;
//! - [`canon`]: the degree-partition property Q_k with canonical relabeling
//!   and its single-flip adversary;
//! - [`degseq`]: the degree-sequence property built from windowed parity
//!   words and a checksum, with its add-or-delete adversary;
//! - [`lowerbound`]: log-scale degree-sequence counting, degree classes, and
//!   the P1-P4 / degree-range condition checkers;
//! - [`mc`]: a seeded, parallel, order-independent Monte Carlo harness;
//! - [`report`]: the fixed-layout JSON/CSV run document used by the CLI.

pub mod canon;
pub mod covercode;
pub mod degseq;
pub mod error;
pub mod graph;
pub mod lowerbound;
pub mod mc;
pub mod report;
pub mod word;

pub use error::{Error, Result};
