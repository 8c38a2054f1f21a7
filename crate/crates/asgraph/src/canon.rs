//! The degree-partition property Q_k and its single-flip adversary.
//!
//! For an odd `k > 11` not divisible by 11, the vertex set splits as
//! `V = W + U_0 + R`: `U = U_0 + R` holds the vertices whose degree is
//! divisible by `k`, distributed into classes `U_0..U_10` by their degree
//! inside the induced subgraph on `U` modulo 11, and `W` is everything else.
//! `R = U_1 + .. + U_10` *resolves* `W` when the per-vertex count vectors
//! into `U_1..U_10` are pairwise distinct; sorting those vectors then yields
//! a canonical relabeling of `W`.
//!
//! A graph satisfies Q_k if it is unresolved, or if the adjacency word of the
//! canonically relabeled subgraph on `W` lies in the radius-1 covering code
//! of that length. The adversary repairs the word with the code's unique
//! flip, mapped back to a vertex pair inside `W`.

use crate::covercode::build_code;
use crate::error::{Error, Result};
use crate::graph::{slot_to_pair, EdgeSlot, Graph};
use crate::word::Word;

/// Number of residue classes for the inner split (`U_0..U_10`).
pub const RESIDUE_CLASSES: usize = 11;
/// Count-vector width: neighbors counted into `U_1..U_10`.
pub const DVEC_WIDTH: usize = 10;
/// Largest n accepted by the exhaustive attack fallback.
pub const EXHAUSTIVE_ATTACK_MAX_N: usize = 100;

pub fn valid_k(k: u64) -> bool {
    k > 11 && k % 2 == 1 && k % 11 != 0
}

/// The `V = W + U_0 + R` decomposition together with the count vectors of
/// the vertices of `W` into `U_1..U_10`.
#[derive(Clone, Debug)]
pub struct KPartition {
    k: u64,
    classes: Vec<Vec<usize>>,
    w: Vec<usize>,
    dvecs: Vec<[u32; DVEC_WIDTH]>,
}

impl KPartition {
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Vertices with degree not divisible by k, ascending.
    pub fn w(&self) -> &[usize] {
        &self.w
    }

    /// Class `U_r` for `r` in `0..=10`, ascending.
    pub fn class(&self, r: usize) -> &[usize] {
        &self.classes[r]
    }

    pub fn u0(&self) -> &[usize] {
        &self.classes[0]
    }

    /// All of `R = U_1 + .. + U_10`, ascending.
    pub fn r_vertices(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.classes[1..].iter().flatten().copied().collect();
        r.sort_unstable();
        r
    }

    /// Count vector of the i-th vertex of `w()`.
    pub fn dvec(&self, i: usize) -> &[u32; DVEC_WIDTH] {
        &self.dvecs[i]
    }

    pub fn dvecs(&self) -> &[[u32; DVEC_WIDTH]] {
        &self.dvecs
    }
}

fn vertex_mask(n: usize, verts: &[usize]) -> Vec<u64> {
    let mut mask = vec![0u64; n.div_ceil(64)];
    for &v in verts {
        mask[(v - 1) >> 6] |= 1u64 << ((v - 1) & 63);
    }
    mask
}

/// Computes the partition and count vectors for a valid `k`.
pub fn partition(g: &Graph, k: u64) -> Result<KPartition> {
    if !valid_k(k) {
        return Err(Error::InvalidK(k));
    }
    let n = g.n();
    let degrees = g.degrees();
    let mut u_verts = Vec::new();
    let mut w = Vec::new();
    for v in 1..=n {
        if degrees[v - 1] as u64 % k == 0 {
            u_verts.push(v);
        } else {
            w.push(v);
        }
    }
    let u_mask = vertex_mask(n, &u_verts);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); RESIDUE_CLASSES];
    for &v in &u_verts {
        let in_u_degree = g.count_in_mask(v, &u_mask);
        classes[in_u_degree as usize % RESIDUE_CLASSES].push(v);
    }
    let class_masks: Vec<Vec<u64>> = (1..RESIDUE_CLASSES)
        .map(|r| vertex_mask(n, &classes[r]))
        .collect();
    let dvecs = w
        .iter()
        .map(|&v| {
            let mut d = [0u32; DVEC_WIDTH];
            for (r, mask) in class_masks.iter().enumerate() {
                d[r] = g.count_in_mask(v, mask);
            }
            d
        })
        .collect();
    Ok(KPartition {
        k,
        classes,
        w,
        dvecs,
    })
}

/// True when all count vectors over `W` are pairwise distinct (vacuously for
/// `|W| <= 1`).
pub fn resolves(p: &KPartition) -> bool {
    let mut sorted: Vec<&[u32; DVEC_WIDTH]> = p.dvecs.iter().collect();
    sorted.sort_unstable();
    sorted.windows(2).all(|pair| pair[0] != pair[1])
}

/// The vertices of `W` sorted by count vector, ascending lexicographically;
/// position in the result is the canonical label. Errors when unresolved.
pub fn canonical_order(p: &KPartition) -> Result<Vec<usize>> {
    if !resolves(p) {
        return Err(Error::Unresolved);
    }
    let mut idx: Vec<usize> = (0..p.w.len()).collect();
    idx.sort_unstable_by(|&a, &b| p.dvecs[a].cmp(&p.dvecs[b]));
    Ok(idx.into_iter().map(|i| p.w[i]).collect())
}

#[derive(Clone, Debug)]
pub struct QkDecision {
    pub in_qk: bool,
    pub resolved: bool,
    /// Canonical adjacency word of the subgraph on `W`, when resolved.
    pub word: Option<Word>,
    pub code_member: Option<bool>,
}

/// Membership in Q_k: unresolved graphs are in; resolved graphs are in iff
/// the canonical word of the subgraph on `W` is a codeword of the covering
/// code of length |W|(|W|-1)/2.
pub fn decide_qk(g: &Graph, k: u64) -> Result<QkDecision> {
    let p = partition(g, k)?;
    decide_qk_with(g, &p)
}

fn decide_qk_with(g: &Graph, p: &KPartition) -> Result<QkDecision> {
    if !resolves(p) {
        return Ok(QkDecision {
            in_qk: true,
            resolved: false,
            word: None,
            code_member: None,
        });
    }
    let order = canonical_order(p)?;
    let word = g.pair_word(&order)?;
    let member = build_code(word.len()).contains(&word)?;
    Ok(QkDecision {
        in_qk: member,
        resolved: true,
        word: Some(word),
        code_member: Some(member),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackReason {
    AlreadyInProperty,
    UnresolvedHenceIn,
    CodeFlipApplied,
    FlipBreaksPartition,
    NoFlipFound,
}

impl AttackReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttackReason::AlreadyInProperty => "already_in_property",
            AttackReason::UnresolvedHenceIn => "unresolved_hence_in",
            AttackReason::CodeFlipApplied => "code_flip_applied",
            AttackReason::FlipBreaksPartition => "flip_breaks_partition",
            AttackReason::NoFlipFound => "no_flip_found",
        }
    }
}

impl std::fmt::Display for AttackReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct AttackOutcome {
    pub success: bool,
    pub flipped: Option<EdgeSlot>,
    pub reason: AttackReason,
}

/// The Q_k adversary. Returns the (at most one flip away) output graph and
/// what happened.
///
/// If the input is already in Q_k it is returned unchanged. Otherwise the
/// partition is resolved and the canonical word has a unique repairing flip;
/// the flipped slot maps back through the canonical order to a pair inside
/// `W`. The flip moves both endpoint degrees by one, so it can eject an
/// endpoint from `W` and break the partition; the decision is re-run in full
/// on the output and failure is reported as `FlipBreaksPartition`. No other
/// single flip inside `W` can reach the code, so there is no fallback here
/// (see [`adversary_qk_exhaustive`] for a brute-force variant).
pub fn adversary_qk(g: &Graph, k: u64) -> Result<(Graph, AttackOutcome)> {
    let p = partition(g, k)?;
    let decision = decide_qk_with(g, &p)?;
    if decision.in_qk {
        let reason = if decision.resolved {
            AttackReason::AlreadyInProperty
        } else {
            AttackReason::UnresolvedHenceIn
        };
        return Ok((
            g.clone(),
            AttackOutcome {
                success: true,
                flipped: None,
                reason,
            },
        ));
    }
    let word = decision.word.expect("resolved decision carries the word");
    let code = build_code(word.len());
    let t = code
        .flip_to_code(&word)?
        .expect("word is not a codeword, so a flip exists");
    let order = canonical_order(&p)?;
    let (i, j) = slot_to_pair(order.len(), t);
    let slot = EdgeSlot::new(order[i - 1], order[j - 1])?;
    let flipped = g.flip(slot)?;
    let after = decide_qk(&flipped, k)?;
    let reason = if after.in_qk {
        AttackReason::CodeFlipApplied
    } else {
        AttackReason::FlipBreaksPartition
    };
    Ok((
        flipped,
        AttackOutcome {
            success: after.in_qk,
            flipped: Some(slot),
            reason,
        },
    ))
}

/// Q_k adversary with a brute-force fallback: when the code flip fails, try
/// every slot in lexicographic order and keep the first one whose flip lands
/// in Q_k. Quadratically many full decisions, so guarded to small n.
pub fn adversary_qk_exhaustive(g: &Graph, k: u64) -> Result<(Graph, AttackOutcome)> {
    if g.n() > EXHAUSTIVE_ATTACK_MAX_N {
        return Err(Error::LengthGuard {
            max: EXHAUSTIVE_ATTACK_MAX_N,
            got: g.n(),
        });
    }
    let (candidate, outcome) = adversary_qk(g, k)?;
    if outcome.success {
        return Ok((candidate, outcome));
    }
    for index in 1..=g.slot_count() {
        let slot = EdgeSlot::from_index(g.n(), index)?;
        let flipped = g.flip(slot)?;
        if decide_qk(&flipped, k)?.in_qk {
            return Ok((
                flipped,
                AttackOutcome {
                    success: true,
                    flipped: Some(slot),
                    reason: AttackReason::CodeFlipApplied,
                },
            ));
        }
    }
    Ok((
        g.clone(),
        AttackOutcome {
            success: false,
            flipped: None,
            reason: AttackReason::NoFlipFound,
        },
    ))
}

/// Threshold table mapping graph sizes to the k used at that size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSchedule {
    entries: Vec<(u64, u64)>,
}

impl KSchedule {
    /// Entries are `(n_threshold, k)`, strictly increasing in both columns.
    pub fn new(entries: Vec<(u64, u64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidSchedule("empty schedule".into()));
        }
        for pair in entries.windows(2) {
            if pair[1].0 <= pair[0].0 || pair[1].1 <= pair[0].1 {
                return Err(Error::InvalidSchedule(format!(
                    "entries must increase strictly: {:?} then {:?}",
                    pair[0], pair[1]
                )));
            }
        }
        for &(_, k) in &entries {
            if !valid_k(k) {
                return Err(Error::InvalidK(k));
            }
        }
        Ok(KSchedule { entries })
    }

    /// Calibrated so the resolution event holds with frequency >= 0.9 at the
    /// first threshold.
    pub fn default_schedule() -> Self {
        KSchedule {
            entries: vec![(5000, 13)],
        }
    }

    /// Two whitespace-separated columns per line: `n_threshold k`. Blank
    /// lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<u64> {
                s.ok_or_else(|| {
                    Error::InvalidSchedule(format!("line {}: expected two columns", lineno + 1))
                })?
                .parse()
                .map_err(|e| Error::InvalidSchedule(format!("line {}: {e}", lineno + 1)))
            };
            let threshold = parse(cols.next())?;
            let k = parse(cols.next())?;
            if cols.next().is_some() {
                return Err(Error::InvalidSchedule(format!(
                    "line {}: expected two columns",
                    lineno + 1
                )));
            }
            entries.push((threshold, k));
        }
        KSchedule::new(entries)
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }
}

/// Maximum k whose threshold is at most n.
pub fn choose_k(n: u64, schedule: &KSchedule) -> Result<u64> {
    schedule
        .entries
        .iter()
        .rev()
        .find(|&&(threshold, _)| threshold <= n)
        .map(|&(_, k)| k)
        .ok_or(Error::NoScheduleEntry(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_permutation, SeedSpec};

    fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g = g.flip(EdgeSlot::new(u, v).unwrap()).unwrap();
        }
        g
    }

    #[test]
    fn k_validity() {
        assert!(valid_k(13));
        assert!(valid_k(15));
        assert!(!valid_k(11));
        assert!(!valid_k(12));
        assert!(!valid_k(33)); // divisible by 11
        assert!(!valid_k(9));
        assert!(matches!(
            partition(&Graph::empty(4), 12),
            Err(Error::InvalidK(12))
        ));
    }

    #[test]
    fn partition_path_plus_isolated() {
        // P3 on {1,2,3} plus isolated 4, k=13: degrees (1,2,1,0).
        let g = graph_from_edges(4, &[(1, 2), (2, 3)]);
        let p = partition(&g, 13).unwrap();
        assert_eq!(p.w(), &[1, 2, 3]);
        assert_eq!(p.u0(), &[4]);
        assert!(p.r_vertices().is_empty());
        assert!(p.dvecs().iter().all(|d| d == &[0u32; 10]));
        assert!(!resolves(&p));
        assert!(matches!(canonical_order(&p), Err(Error::Unresolved)));
        // Unresolved, so in Q_k.
        assert!(decide_qk(&g, 13).unwrap().in_qk);
    }

    #[test]
    fn partition_complete_14() {
        // K_14, k=13: all degrees 13, in-U degrees 13 = 2 mod 11.
        let g = Graph::complete(14);
        let p = partition(&g, 13).unwrap();
        assert!(p.w().is_empty());
        assert!(p.u0().is_empty());
        assert_eq!(p.class(2).len(), 14);
        assert_eq!(p.r_vertices().len(), 14);
        assert!(resolves(&p)); // vacuous
        let d = decide_qk(&g, 13).unwrap();
        assert!(d.in_qk && d.resolved);
        assert_eq!(d.word.unwrap().len(), 0);
        assert_eq!(d.code_member, Some(true));
    }

    #[test]
    fn partition_empty_graph() {
        let g = Graph::empty(6);
        let p = partition(&g, 13).unwrap();
        assert!(p.w().is_empty());
        assert_eq!(p.u0().len(), 6);
        assert!(p.r_vertices().is_empty());
        assert!(resolves(&p));
        assert!(decide_qk(&g, 13).unwrap().in_qk);
    }

    #[test]
    fn partition_is_exhaustive_and_disjoint() {
        for trial in 0..10 {
            let g = Graph::random(60, SeedSpec::new(21, trial));
            let p = partition(&g, 13).unwrap();
            let mut all: Vec<usize> = p.w().to_vec();
            for r in 0..RESIDUE_CLASSES {
                all.extend_from_slice(p.class(r));
            }
            all.sort_unstable();
            assert_eq!(all, (1..=60).collect::<Vec<_>>());
        }
    }

    #[test]
    fn resolution_counterexample_r_empty() {
        // R empty and |W| >= 2 forces equal (all-zero) count vectors.
        let g = graph_from_edges(3, &[(1, 2)]);
        let p = partition(&g, 13).unwrap();
        assert!(p.w().len() >= 2);
        assert!(p.r_vertices().is_empty());
        assert!(!resolves(&p));
    }

    #[test]
    fn canonical_order_sorts_lexicographically() {
        // Hand-built partition: dvec(a) = (0,1,0,..), dvec(b) = (0,0,9,..).
        let p = KPartition {
            k: 13,
            classes: vec![Vec::new(); RESIDUE_CLASSES],
            w: vec![4, 9],
            dvecs: vec![
                [0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
                [0, 0, 9, 0, 0, 0, 0, 0, 0, 0],
            ],
        };
        assert_eq!(canonical_order(&p).unwrap(), vec![9, 4]);

        let empty = KPartition {
            k: 13,
            classes: vec![Vec::new(); RESIDUE_CLASSES],
            w: vec![],
            dvecs: vec![],
        };
        assert_eq!(canonical_order(&empty).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn qk_is_isomorphism_invariant_sampled() {
        let mut rng = SeedSpec::new(600, 0).rng();
        for trial in 0..30 {
            let g = Graph::random(70, SeedSpec::new(601, trial));
            let perm = random_permutation(70, &mut rng);
            let h = g.permute(&perm).unwrap();
            let a = decide_qk(&g, 13).unwrap();
            let b = decide_qk(&h, 13).unwrap();
            assert_eq!(a.in_qk, b.in_qk, "trial {trial}");
            assert_eq!(a.resolved, b.resolved, "trial {trial}");
            // Canonical words agree whenever both are resolved.
            assert_eq!(a.word, b.word, "trial {trial}");
        }
    }

    #[test]
    fn flips_inside_w_leave_dvecs_unchanged() {
        // Count vectors only look into U_1..U_10, so toggling a W-W pair
        // keeps every dvec as long as both endpoints stay in W.
        let mut checked = 0;
        for trial in 0..50 {
            let g = Graph::random(40, SeedSpec::new(33, trial));
            let p = partition(&g, 13).unwrap();
            if p.w().len() < 2 {
                continue;
            }
            let (u, v) = (p.w()[0], p.w()[1]);
            let flipped = g.flip(EdgeSlot::new(u, v).unwrap()).unwrap();
            let q = partition(&flipped, 13).unwrap();
            if q.w() == p.w() {
                assert_eq!(p.dvecs(), q.dvecs(), "trial {trial}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn adversary_on_member_returns_unchanged() {
        let g = Graph::empty(5); // W empty -> resolved, empty word in code
        let (out, outcome) = adversary_qk(&g, 13).unwrap();
        assert!(outcome.success);
        assert_eq!(outcome.reason, AttackReason::AlreadyInProperty);
        assert!(outcome.flipped.is_none());
        assert_eq!(out.diff_count(&g).unwrap(), 0);

        // Unresolved input is in Q_k by definition.
        let p3 = graph_from_edges(4, &[(1, 2), (2, 3)]);
        let (out, outcome) = adversary_qk(&p3, 13).unwrap();
        assert!(outcome.success);
        assert_eq!(outcome.reason, AttackReason::UnresolvedHenceIn);
        assert_eq!(out.diff_count(&p3).unwrap(), 0);
    }

    #[test]
    fn adversary_output_differs_in_at_most_one_slot() {
        for trial in 0..40 {
            let g = Graph::random(80, SeedSpec::new(77, trial));
            let (out, outcome) = adversary_qk(&g, 13).unwrap();
            assert!(out.diff_count(&g).unwrap() <= 1);
            if outcome.success {
                assert!(decide_qk(&out, 13).unwrap().in_qk, "trial {trial}");
            }
        }
    }

    #[test]
    fn successful_code_flip_repairs_exactly_one_word_bit() {
        // When the flip keeps both endpoints inside W, the partition and
        // canonical order survive, so the output's canonical word must be
        // the input's word with exactly the repairing bit toggled.
        let mut checked = 0;
        for trial in 0..20u64 {
            let g = Graph::random(600, SeedSpec::new(2100, trial));
            let before = decide_qk(&g, 13).unwrap();
            if !before.resolved || before.in_qk {
                continue;
            }
            let word = before.word.clone().unwrap();
            let t = build_code(word.len())
                .flip_to_code(&word)
                .unwrap()
                .expect("non-member has a repair flip");
            let (out, outcome) = adversary_qk(&g, 13).unwrap();
            if outcome.reason != AttackReason::CodeFlipApplied {
                continue;
            }
            let after = decide_qk(&out, 13).unwrap();
            // The flip may eject an endpoint and leave the new partition
            // unresolved; membership then holds without any word.
            let Some(after_word) = after.word.clone() else {
                continue;
            };
            if after_word.len() == word.len() {
                assert_eq!(after_word, word.with_flipped(t), "trial {trial}");
                checked += 1;
            }
        }
        assert!(checked >= 5, "only {checked} resolved repair cases");
    }

    #[test]
    fn exhaustive_fallback_guard() {
        let g = Graph::random(101, SeedSpec::new(1, 1));
        assert!(matches!(
            adversary_qk_exhaustive(&g, 13),
            Err(Error::LengthGuard { .. })
        ));
    }

    #[test]
    fn schedule_examples() {
        let s = KSchedule::new(vec![(1000, 13)]).unwrap();
        assert_eq!(choose_k(5000, &s).unwrap(), 13);

        let s2 = KSchedule::new(vec![(1000, 13), (20000, 15)]).unwrap();
        assert_eq!(choose_k(25000, &s2).unwrap(), 15);
        assert_eq!(choose_k(19999, &s2).unwrap(), 13);

        assert!(matches!(
            choose_k(500, &s),
            Err(Error::NoScheduleEntry(500))
        ));
        assert!(KSchedule::new(vec![]).is_err());
        assert!(KSchedule::new(vec![(10, 13), (20, 13)]).is_err());
        assert!(KSchedule::new(vec![(10, 15), (20, 13)]).is_err());
        assert!(KSchedule::new(vec![(10, 33)]).is_err());
    }

    #[test]
    fn schedule_parsing() {
        let s = KSchedule::parse("# thresholds\n1000 13\n\n20000 15\n").unwrap();
        assert_eq!(s.entries(), &[(1000, 13), (20000, 15)]);
        assert_eq!(s, KSchedule::new(vec![(1000, 13), (20000, 15)]).unwrap());
        assert!(KSchedule::parse("1000\n").is_err());
        assert!(KSchedule::parse("1000 13 9\n").is_err());
        assert!(KSchedule::parse("abc 13\n").is_err());
    }
}
