//! The degree-sequence property and its add-or-delete adversary.
//!
//! Around the median degree sits the window `D_n = [d_*, d^*]` of half-width
//! `B_n = sqrt(n (ln n - 2 sqrt(ln n)))/2`, split by `mid = floor(n/2)` into
//! a lower part `[d_*, mid-1]` and an upper part `[mid+1, d^*]`. From the
//! degree counts `N_y` come the cumulative counts `X_y`, two parity words
//! over the split (`Y_down`, `Y_up`), and the checksum `Z = sum y*N_y` over
//! `d_* <= y <= mid`.
//!
//! The property asks for both parity words to be covering-code members and
//! `Z mod 4` to land in `{0, 1}`. A single edge change between one vertex in
//! each half of the window moves exactly one coordinate of each parity word
//! and shifts `Z` by exactly one, which is what the adversary exploits.

use crate::canon::{AttackOutcome, AttackReason};
use crate::covercode::ExtendedHammingCode;
use crate::error::{Error, Result};
use crate::graph::{EdgeSlot, Graph};
use crate::word::Word;

/// Smallest accepted n; below this the window degenerates.
pub const MIN_WINDOW_N: usize = 150;
/// Minimum half-window size: each parity word needs at least this length.
pub const MIN_HALF_WINDOW: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeWindow {
    n: usize,
    bound: f64,
    d_lo: usize,
    d_hi: usize,
    mid: usize,
    delta1: usize,
    delta2: usize,
}

/// Computes the degree window for n, rejecting degenerate sizes.
pub fn window(n: usize) -> Result<DegreeWindow> {
    if n < MIN_WINDOW_N {
        return Err(Error::DegenerateWindow {
            n,
            detail: format!("need n >= {MIN_WINDOW_N}"),
        });
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let bound = 0.5 * (nf * (ln_n - 2.0 * ln_n.sqrt())).sqrt();
    if !bound.is_finite() || bound <= 0.0 {
        return Err(Error::DegenerateWindow {
            n,
            detail: "window half-width is not positive".into(),
        });
    }
    let d_lo = (nf / 2.0 - bound).ceil() as usize;
    let d_hi = (nf / 2.0 + bound).floor() as usize;
    let mid = n / 2;
    let delta1 = mid - d_lo;
    let delta2 = d_hi - mid;
    if delta1 < MIN_HALF_WINDOW || delta2 < MIN_HALF_WINDOW {
        return Err(Error::DegenerateWindow {
            n,
            detail: format!("half-windows {delta1}/{delta2} below {MIN_HALF_WINDOW}"),
        });
    }
    Ok(DegreeWindow {
        n,
        bound,
        d_lo,
        d_hi,
        mid,
        delta1,
        delta2,
    })
}

impl DegreeWindow {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real half-width B_n before rounding.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Smallest window degree d_*.
    pub fn d_lo(&self) -> usize {
        self.d_lo
    }

    /// Largest window degree d^*.
    pub fn d_hi(&self) -> usize {
        self.d_hi
    }

    pub fn mid(&self) -> usize {
        self.mid
    }

    /// Size of the lower half `[d_*, mid-1]`.
    pub fn delta1(&self) -> usize {
        self.delta1
    }

    /// Size of the upper half `[mid+1, d^*]`.
    pub fn delta2(&self) -> usize {
        self.delta2
    }

    pub fn in_lower(&self, d: usize) -> bool {
        d >= self.d_lo && d < self.mid
    }

    pub fn in_upper(&self, d: usize) -> bool {
        d > self.mid && d <= self.d_hi
    }

    /// Shifted lower half `[d_*+1, mid]` (deletion sources).
    pub fn in_lower_shifted(&self, d: usize) -> bool {
        d > self.d_lo && d <= self.mid
    }

    /// Shifted upper half `[mid+2, d^*+1]` (deletion sources).
    pub fn in_upper_shifted(&self, d: usize) -> bool {
        d >= self.mid + 2 && d <= self.d_hi + 1
    }
}

/// Degree counts on the window (with guard cells), parity words, checksum.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeProfile {
    window: DegreeWindow,
    counts_lo: usize,
    counts: Vec<u32>,
    ydown: Word,
    yup: Word,
    z: u64,
}

impl DegreeProfile {
    /// Counts are materialized on `[d_* - 1, d^* + 2]` so the effect of one
    /// flip near the boundary stays visible.
    pub fn from_degrees(window: &DegreeWindow, degrees: &[u32]) -> Self {
        let counts_lo = window.d_lo - 1;
        let counts_hi = window.d_hi + 2;
        let mut counts = vec![0u32; counts_hi - counts_lo + 1];
        for &d in degrees {
            let d = d as usize;
            if d >= counts_lo && d <= counts_hi {
                counts[d - counts_lo] += 1;
            }
        }
        let cumulative = |y: usize| -> u32 {
            // X_y = sum of N_d for d_* <= d <= y
            (window.d_lo..=y).map(|d| counts[d - counts_lo]).sum()
        };
        let mut ydown = Word::zeros(window.delta1);
        for i in 1..=window.delta1 {
            ydown.set(i, cumulative(window.d_lo + i - 1) % 2 == 1);
        }
        let mut yup = Word::zeros(window.delta2);
        for j in 1..=window.delta2 {
            yup.set(j, cumulative(window.mid + j) % 2 == 1);
        }
        let z = (window.d_lo..=window.mid)
            .map(|y| y as u64 * counts[y - counts_lo] as u64)
            .sum();
        DegreeProfile {
            window: *window,
            counts_lo,
            counts,
            ydown,
            yup,
            z,
        }
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        let w = window(g.n())?;
        Ok(Self::from_degrees(&w, &g.degrees()))
    }

    pub fn window(&self) -> &DegreeWindow {
        &self.window
    }

    /// N_y; zero outside the materialized range.
    pub fn count(&self, y: usize) -> u32 {
        if y < self.counts_lo || y > self.counts_lo + self.counts.len() - 1 {
            0
        } else {
            self.counts[y - self.counts_lo]
        }
    }

    /// X_y = sum of N_d over d_* <= d <= y, clamped to the materialized range.
    pub fn cumulative(&self, y: usize) -> u32 {
        if y < self.window.d_lo {
            return 0;
        }
        let hi = (self.counts_lo + self.counts.len() - 1).min(y);
        (self.window.d_lo..=hi)
            .map(|d| self.counts[d - self.counts_lo])
            .sum()
    }

    pub fn ydown(&self) -> &Word {
        &self.ydown
    }

    pub fn yup(&self) -> &Word {
        &self.yup
    }

    pub fn z(&self) -> u64 {
        self.z
    }
}

/// The pair of covering codes guarding the parity words.
#[derive(Clone, Copy, Debug)]
pub struct ACodes {
    pub down: ExtendedHammingCode,
    pub up: ExtendedHammingCode,
}

impl ACodes {
    pub fn for_window(w: &DegreeWindow) -> Self {
        ACodes {
            down: crate::covercode::build_code(w.delta1),
            up: crate::covercode::build_code(w.delta2),
        }
    }

    pub fn with_lengths(down_len: usize, up_len: usize) -> Self {
        ACodes {
            down: crate::covercode::build_code(down_len),
            up: crate::covercode::build_code(up_len),
        }
    }
}

/// Membership: both parity words are codewords and `Z mod 4` is 0 or 1.
pub fn decide_a(p: &DegreeProfile, codes: &ACodes) -> Result<bool> {
    let down_ok = codes.down.contains(p.ydown())?;
    let up_ok = codes.up.contains(p.yup())?;
    Ok(down_ok && up_ok && matches!(p.z() % 4, 0 | 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipAction {
    Add,
    Delete,
}

/// Addition moves Z up by one and deletion down by one, so the residue of Z
/// picks the action that lands `Z mod 4` in `{0, 1}`.
pub fn action_for_z(z: u64) -> FlipAction {
    match z % 4 {
        0 | 3 => FlipAction::Add,
        _ => FlipAction::Delete,
    }
}

/// Predicted effect of an eligible flip on the profile, as
/// `(down bit, up bit, z delta)`: an addition between non-adjacent vertices
/// of degrees `x` (lower window) and `y` (upper window) flips exactly those
/// parity bits and raises Z by one; a deletion between adjacent vertices with
/// degrees in the shifted windows flips the bits of `x-1`, `y-1` and lowers Z
/// by one. `None` when the degrees are not eligible for the action.
pub fn predicted_flip_bits(
    w: &DegreeWindow,
    x_degree: usize,
    y_degree: usize,
    action: FlipAction,
) -> Option<(usize, usize, i64)> {
    match action {
        FlipAction::Add => {
            if w.in_lower(x_degree) && w.in_upper(y_degree) {
                Some((x_degree - w.d_lo + 1, y_degree - w.mid, 1))
            } else {
                None
            }
        }
        FlipAction::Delete => {
            if w.in_lower_shifted(x_degree) && w.in_upper_shifted(y_degree) {
                Some((x_degree - 1 - w.d_lo + 1, y_degree - 1 - w.mid, -1))
            } else {
                None
            }
        }
    }
}

/// Lexicographically smallest unordered pair `(u, v)` with the requested
/// degrees and adjacency, if any.
pub fn find_pair(g: &Graph, x: u32, y: u32, want_adjacent: bool) -> Option<EdgeSlot> {
    let degrees = g.degrees();
    let n = g.n();
    for u in 1..=n {
        let du = degrees[u - 1];
        let dv = if du == x {
            y
        } else if du == y {
            x
        } else {
            continue;
        };
        for v in (u + 1)..=n {
            if degrees[v - 1] == dv && g.has_edge(u, v) == want_adjacent {
                return Some(EdgeSlot::new(u, v).expect("u < v"));
            }
        }
    }
    None
}

/// The degree-sequence adversary: returns the output graph (at most one flip
/// away) and the outcome.
///
/// The action (add or delete) is fixed by `Z mod 4`. A parity word outside
/// its code has one forced target coordinate, the code's repairing flip. A
/// word already inside its code can only stay inside if the touched
/// coordinate is one of the free suffix positions past the Hamming prefix;
/// those are tried in order, and if the code has no free suffix the attack
/// reports `NoFlipFound`. Targets translate to required endpoint degrees,
/// and the first existing pair in candidate order is flipped.
pub fn adversary_a(g: &Graph, codes: &ACodes) -> Result<(Graph, AttackOutcome)> {
    let profile = DegreeProfile::from_graph(g)?;
    let w = *profile.window();
    if decide_a(&profile, codes)? {
        return Ok((
            g.clone(),
            AttackOutcome {
                success: true,
                flipped: None,
                reason: AttackReason::AlreadyInProperty,
            },
        ));
    }
    let action = action_for_z(profile.z());

    let targets = |code: &ExtendedHammingCode, word: &Word| -> Result<Vec<usize>> {
        Ok(match code.flip_to_code(word)? {
            Some(t) => vec![t],
            // Already a codeword: only a free-suffix coordinate keeps it one.
            None => ((code.hamming_len() + 1)..=code.len()).collect(),
        })
    };
    let down_targets = targets(&codes.down, profile.ydown())?;
    let up_targets = targets(&codes.up, profile.yup())?;

    for &t_down in &down_targets {
        for &t_up in &up_targets {
            let x_star = w.d_lo() + t_down - 1;
            let y_star = w.mid() + t_up;
            let (x, y, adjacent) = match action {
                FlipAction::Add => (x_star, y_star, false),
                FlipAction::Delete => (x_star + 1, y_star + 1, true),
            };
            if let Some(slot) = find_pair(g, x as u32, y as u32, adjacent) {
                let flipped = g.flip(slot)?;
                let after = DegreeProfile::from_graph(&flipped)?;
                let success = decide_a(&after, codes)?;
                return Ok((
                    flipped,
                    AttackOutcome {
                        success,
                        flipped: Some(slot),
                        reason: AttackReason::CodeFlipApplied,
                    },
                ));
            }
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SeedSpec;

    #[test]
    fn window_examples() {
        let w = window(1000).unwrap();
        assert_eq!(
            (w.d_lo(), w.d_hi(), w.mid(), w.delta1(), w.delta2()),
            (480, 520, 500, 20, 20)
        );
        let w = window(150).unwrap();
        assert_eq!(
            (w.d_lo(), w.d_hi(), w.mid(), w.delta1(), w.delta2()),
            (71, 79, 75, 4, 4)
        );
        assert!(matches!(
            window(50),
            Err(Error::DegenerateWindow { n: 50, .. })
        ));
        assert!(window(149).is_err());
    }

    #[test]
    fn profile_of_empty_and_complete_graphs() {
        let w = window(1000).unwrap();
        let empty = DegreeProfile::from_degrees(&w, &vec![0u32; 1000]);
        assert_eq!(empty.ydown().count_ones(), 0);
        assert_eq!(empty.yup().count_ones(), 0);
        assert_eq!(empty.z(), 0);
        assert!((w.d_lo()..=w.d_hi()).all(|y| empty.count(y) == 0));

        // All degrees 999 fall outside the window: same zero profile.
        let complete = DegreeProfile::from_degrees(&w, &vec![999u32; 1000]);
        assert_eq!(complete.ydown(), empty.ydown());
        assert_eq!(complete.yup(), empty.yup());
        assert_eq!(complete.z(), 0);
    }

    #[test]
    fn profile_matches_naive_recount() {
        let g = Graph::random(400, SeedSpec::new(4242, 0));
        let p = DegreeProfile::from_graph(&g).unwrap();
        let w = p.window();
        // Independent recount straight from the degree list.
        let degrees = g.degrees();
        for y in (w.d_lo() - 1)..=(w.d_hi() + 2) {
            let naive = degrees.iter().filter(|&&d| d as usize == y).count() as u32;
            assert_eq!(p.count(y), naive, "N_{y}");
        }
        for i in 1..=w.delta1() {
            let y = w.d_lo() + i - 1;
            let x: u32 = degrees
                .iter()
                .filter(|&&d| (d as usize) >= w.d_lo() && (d as usize) <= y)
                .count() as u32;
            assert_eq!(p.cumulative(y), x);
            assert_eq!(p.ydown().get(i), x % 2 == 1, "down bit {i}");
        }
        for j in 1..=w.delta2() {
            let y = w.mid() + j;
            let x: u32 = degrees
                .iter()
                .filter(|&&d| (d as usize) >= w.d_lo() && (d as usize) <= y)
                .count() as u32;
            assert_eq!(p.yup().get(j), x % 2 == 1, "up bit {j}");
        }
        let z: u64 = degrees
            .iter()
            .filter(|&&d| (d as usize) >= w.d_lo() && (d as usize) <= w.mid())
            .map(|&d| d as u64)
            .sum();
        assert_eq!(p.z(), z);
    }

    #[test]
    fn profile_is_permutation_invariant() {
        let mut rng = SeedSpec::new(70, 0).rng();
        for trial in 0..5 {
            let g = Graph::random(200, SeedSpec::new(71, trial));
            let perm = crate::graph::random_permutation(200, &mut rng);
            let h = g.permute(&perm).unwrap();
            assert_eq!(
                DegreeProfile::from_graph(&g).unwrap(),
                DegreeProfile::from_graph(&h).unwrap()
            );
        }
    }

    #[test]
    fn decide_examples() {
        let w = window(1000).unwrap();
        let codes = ACodes::for_window(&w);
        let empty = DegreeProfile::from_degrees(&w, &vec![0u32; 1000]);
        assert!(decide_a(&empty, &codes).unwrap());

        // Two vertices of odd degree 481: all parities even, Z = 962 = 2 mod 4.
        let mut degrees = vec![0u32; 1000];
        degrees[0] = 481;
        degrees[1] = 481;
        let p = DegreeProfile::from_degrees(&w, &degrees);
        assert_eq!(p.z() % 4, 2);
        assert!(codes.down.contains(p.ydown()).unwrap());
        assert!(codes.up.contains(p.yup()).unwrap());
        assert!(!decide_a(&p, &codes).unwrap());

        // Length mismatch is a contract violation.
        let bad = ACodes::with_lengths(w.delta1() + 1, w.delta2());
        assert!(matches!(
            decide_a(&empty, &bad),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn action_choice_keeps_z_valid() {
        assert_eq!(action_for_z(0), FlipAction::Add);
        assert_eq!(action_for_z(1), FlipAction::Delete);
        assert_eq!(action_for_z(2), FlipAction::Delete);
        assert_eq!(action_for_z(3), FlipAction::Add);
        for z in 0..8u64 {
            let z_after = match action_for_z(z) {
                FlipAction::Add => z + 1,
                FlipAction::Delete => z - 1 + 4,
            };
            assert!(matches!(z_after % 4, 0 | 1), "z={z}");
        }
    }

    #[test]
    fn find_pair_examples() {
        let complete = Graph::complete(5);
        assert_eq!(find_pair(&complete, 0, 4, true), None);

        // P3: degrees (1, 2, 1).
        let mut p3 = Graph::empty(3);
        p3 = p3.flip(EdgeSlot::new(1, 2).unwrap()).unwrap();
        p3 = p3.flip(EdgeSlot::new(2, 3).unwrap()).unwrap();
        assert_eq!(
            find_pair(&p3, 1, 1, false),
            Some(EdgeSlot::new(1, 3).unwrap())
        );
        assert_eq!(find_pair(&p3, 1, 1, true), None);
        // Only one vertex of degree 2: distinctness keeps (2,2) impossible.
        assert_eq!(find_pair(&p3, 2, 2, false), None);
        // Mixed degrees, both orders give the same pair.
        assert_eq!(
            find_pair(&p3, 2, 1, true),
            Some(EdgeSlot::new(1, 2).unwrap())
        );
        assert_eq!(
            find_pair(&p3, 1, 2, true),
            Some(EdgeSlot::new(1, 2).unwrap())
        );
    }

    #[test]
    fn flip_effect_matches_full_recomputation() {
        let mut rng = SeedSpec::new(900, 0).rng();
        let w = window(200).unwrap();
        let mut checked = 0;
        let mut trial = 0u64;
        while checked < 40 {
            trial += 1;
            let g = Graph::random(200, SeedSpec::new(901, trial));
            let before = DegreeProfile::from_degrees(&w, &g.degrees());
            let action = if rand_core::RngCore::next_u64(&mut rng) % 2 == 0 {
                FlipAction::Add
            } else {
                FlipAction::Delete
            };
            let degrees = g.degrees();
            let want_adjacent = action == FlipAction::Delete;
            let candidate = (1..=200usize)
                .flat_map(|u| ((u + 1)..=200).map(move |v| (u, v)))
                .find(|&(u, v)| {
                    g.has_edge(u, v) == want_adjacent
                        && predicted_flip_bits(
                            &w,
                            degrees[u - 1] as usize,
                            degrees[v - 1] as usize,
                            action,
                        )
                        .is_some()
                        || g.has_edge(u, v) == want_adjacent
                            && predicted_flip_bits(
                                &w,
                                degrees[v - 1] as usize,
                                degrees[u - 1] as usize,
                                action,
                            )
                            .is_some()
                });
            let Some((mut u, mut v)) = candidate else {
                continue;
            };
            // Orient so u carries the lower-window degree.
            if predicted_flip_bits(&w, degrees[u - 1] as usize, degrees[v - 1] as usize, action)
                .is_none()
            {
                std::mem::swap(&mut u, &mut v);
            }
            let (bit_down, bit_up, dz) = predicted_flip_bits(
                &w,
                degrees[u - 1] as usize,
                degrees[v - 1] as usize,
                action,
            )
            .unwrap();
            let flipped = g.flip(EdgeSlot::new(u, v).unwrap()).unwrap();
            let after = DegreeProfile::from_degrees(&w, &flipped.degrees());
            assert_eq!(after.z() as i64 - before.z() as i64, dz);
            let mut expect_down = before.ydown().clone();
            expect_down.flip(bit_down);
            let mut expect_up = before.yup().clone();
            expect_up.flip(bit_up);
            assert_eq!(after.ydown(), &expect_down, "trial {trial}");
            assert_eq!(after.yup(), &expect_up, "trial {trial}");
            checked += 1;
        }
    }

    #[test]
    fn adversary_on_member_returns_unchanged() {
        // Empty graph is in the property (zero words, Z = 0).
        let g = Graph::empty(200);
        let w = window(200).unwrap();
        let codes = ACodes::for_window(&w);
        let (out, outcome) = adversary_a(&g, &codes).unwrap();
        assert!(outcome.success);
        assert_eq!(outcome.reason, AttackReason::AlreadyInProperty);
        assert_eq!(out.diff_count(&g).unwrap(), 0);
    }

    #[test]
    fn adversary_attack_succeeds_on_random_graphs() {
        // n = 200 gives half-windows of 5 > 3 = 2^2 - 1, so in-code parity
        // words still leave free suffix coordinates to aim at.
        let w = window(200).unwrap();
        let codes = ACodes::for_window(&w);
        let mut successes = 0;
        let trials = 60;
        for t in 0..trials {
            let g = Graph::random(200, SeedSpec::new(9000, t));
            let (out, outcome) = adversary_a(&g, &codes).unwrap();
            assert!(out.diff_count(&g).unwrap() <= 1);
            if outcome.success {
                let p = DegreeProfile::from_graph(&out).unwrap();
                assert!(decide_a(&p, &codes).unwrap(), "trial {t}");
                successes += 1;
            }
        }
        assert!(successes >= trials * 9 / 10, "successes = {successes}");
    }

    #[test]
    fn perfect_length_windows_can_strand_codeword_parities() {
        // At n = 250 both half-windows are exactly 7 = 2^3 - 1: the codes
        // have no free suffix, so a parity word that is already a codeword
        // cannot be kept in the code by any single flip. Those attacks must
        // fail closed with NoFlipFound, and every other one must succeed.
        let w = window(250).unwrap();
        assert_eq!((w.delta1(), w.delta2()), (7, 7));
        let codes = ACodes::for_window(&w);
        let mut no_flip = 0;
        for t in 0..60 {
            let g = Graph::random(250, SeedSpec::new(9000, t));
            let (out, outcome) = adversary_a(&g, &codes).unwrap();
            assert!(out.diff_count(&g).unwrap() <= 1);
            if !outcome.success {
                assert_eq!(outcome.reason, AttackReason::NoFlipFound, "trial {t}");
                assert_eq!(out.diff_count(&g).unwrap(), 0);
                no_flip += 1;
            }
        }
        // About (1 - 7/8^2) of trials hit an in-code word at this length.
        assert!(no_flip > 0, "expected some stranded trials");
    }
}
