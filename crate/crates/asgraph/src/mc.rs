//! Seeded Monte Carlo experiments over uniform random graphs.
//!
//! Trial `i` of a run with master seed `s` always uses `SeedSpec::new(s, i)`,
//! and aggregation is a commutative fold of per-chunk partial sums, so the
//! counts are identical for every `jobs` value and every interleaving.

use std::time::Instant;

use crate::canon::{self, AttackOutcome};
use crate::covercode::build_code;
use crate::degseq::{self, ACodes, DegreeProfile};
use crate::error::{Error, Result};
use crate::graph::{Graph, SeedSpec};
use crate::lowerbound::{self, ThresholdSet};

pub const DEFAULT_Z: f64 = 1.96;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    ProbQk { k: u64 },
    ProbA,
    AttackQk { k: u64 },
    AttackA,
    ModUniformity { m: u64 },
    ParityUniformity,
    DegreeRange,
    ResolutionRate { k: u64 },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::ProbQk { .. } => "prob_qk",
            Experiment::ProbA => "prob_a",
            Experiment::AttackQk { .. } => "attack_qk",
            Experiment::AttackA => "attack_a",
            Experiment::ModUniformity { .. } => "mod_uniformity",
            Experiment::ParityUniformity => "parity_uniformity",
            Experiment::DegreeRange => "degree_range",
            Experiment::ResolutionRate { .. } => "resolution_rate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub jobs: usize,
    pub experiment: Experiment,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be >= 1".into()));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be >= 1".into()));
        }
        Ok(())
    }
}

/// Word-length range and resolution failures seen across Q_k trials. The
/// rare-event certificate bounds the Q_k probability by the measured
/// unresolved rate plus the density of the widest code observed.
#[derive(Clone, Copy, Debug, Default)]
pub struct QkObservations {
    pub unresolved: u64,
    pub min_word_len: Option<usize>,
    pub max_word_len: Option<usize>,
}

impl QkObservations {
    pub fn certificate(&self, trials: u64) -> Option<f64> {
        let min_len = self.min_word_len?;
        let density = build_code(min_len).density();
        Some(self.unresolved as f64 / trials as f64 + density)
    }
}

#[derive(Clone, Debug)]
pub struct EstimateResult {
    pub experiment: String,
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub successes: u64,
    pub frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub elapsed_s: f64,
    pub qk: Option<QkObservations>,
    /// Per-reason counts for attack runs, in `AttackReason` declaration order.
    pub reasons: Option<[u64; 5]>,
}

/// Wilson score interval for `successes` out of `trials` at critical value z.
pub fn wilson_ci(successes: u64, trials: u64, z: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(Error::InvalidConfig(format!(
            "wilson_ci needs 0 <= successes <= trials >= 1, got {successes}/{trials}"
        )));
    }
    let nf = trials as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    Ok(((center - half).max(0.0), (center + half).min(1.0)))
}

/// Mergeable per-trial side data.
pub trait Merge: Default + Send {
    fn merge(&mut self, other: Self);
}

impl Merge for () {
    fn merge(&mut self, _other: Self) {}
}

impl Merge for QkObservations {
    fn merge(&mut self, other: Self) {
        self.unresolved += other.unresolved;
        self.min_word_len = match (self.min_word_len, other.min_word_len) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.max_word_len = match (self.max_word_len, other.max_word_len) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
    }
}

impl Merge for [u64; 5] {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

impl Merge for Vec<u64> {
    fn merge(&mut self, other: Self) {
        if self.is_empty() {
            *self = other;
            return;
        }
        if other.is_empty() {
            return;
        }
        assert_eq!(self.len(), other.len(), "cannot merge unequal tallies");
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

/// Runs `trials` seeded trials across `jobs` worker threads and folds the
/// per-chunk results in chunk order. The outcome is independent of `jobs`.
pub fn run_seeded_trials<A, F>(trials: u64, seed: u64, jobs: usize, body: F) -> Result<(u64, A)>
where
    A: Merge,
    F: Fn(SeedSpec) -> Result<(bool, A)> + Sync,
{
    let jobs = jobs.max(1).min(trials.max(1) as usize);
    let chunk = |i: u64| trials * i / jobs as u64;
    let results: Vec<Result<(u64, A)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs as u64)
            .map(|i| {
                let body = &body;
                scope.spawn(move || {
                    let mut successes = 0u64;
                    let mut aux = A::default();
                    for trial in chunk(i)..chunk(i + 1) {
                        let (ok, side) = body(SeedSpec::new(seed, trial))
                            .map_err(|e| annotate_trial(e, trial))?;
                        successes += ok as u64;
                        aux.merge(side);
                    }
                    Ok((successes, aux))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut successes = 0u64;
    let mut aux = A::default();
    for r in results {
        let (s, a) = r?;
        successes += s;
        aux.merge(a);
    }
    Ok((successes, aux))
}

fn annotate_trial(e: Error, trial: u64) -> Error {
    match e {
        Error::InvariantViolation(msg) => {
            Error::InvariantViolation(format!("trial {trial}: {msg}"))
        }
        other => other,
    }
}

/// Property-frequency estimate for a custom decision; the backbone of the
/// named experiments and of harness self-tests.
pub fn estimate_with<F>(
    name: &str,
    n: usize,
    trials: u64,
    seed: u64,
    jobs: usize,
    decide: F,
) -> Result<EstimateResult>
where
    F: Fn(&Graph) -> Result<bool> + Sync,
{
    let start = Instant::now();
    let (successes, ()) = run_seeded_trials(trials, seed, jobs, |spec| {
        Ok((decide(&Graph::random(n, spec))?, ()))
    })?;
    finish(name, n, trials, seed, successes, None, None, start)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    name: &str,
    n: usize,
    trials: u64,
    seed: u64,
    successes: u64,
    qk: Option<QkObservations>,
    reasons: Option<[u64; 5]>,
    start: Instant,
) -> Result<EstimateResult> {
    let (ci_low, ci_high) = wilson_ci(successes, trials, DEFAULT_Z)?;
    Ok(EstimateResult {
        experiment: name.to_string(),
        n,
        trials,
        seed,
        successes,
        frequency: successes as f64 / trials as f64,
        ci_low,
        ci_high,
        elapsed_s: start.elapsed().as_secs_f64(),
        qk,
        reasons,
    })
}

/// Frequency of a property over seeded trials (prob_qk, prob_a,
/// resolution_rate).
pub fn estimate_property(cfg: &ExperimentConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    match cfg.experiment {
        Experiment::ProbA => {
            let w = degseq::window(cfg.n)?;
            let codes = ACodes::for_window(&w);
            let (successes, ()) = run_seeded_trials(cfg.trials, cfg.seed, cfg.jobs, |spec| {
                let g = Graph::random(cfg.n, spec);
                let p = DegreeProfile::from_degrees(&w, &g.degrees());
                Ok((degseq::decide_a(&p, &codes)?, ()))
            })?;
            finish("prob_a", cfg.n, cfg.trials, cfg.seed, successes, None, None, start)
        }
        Experiment::ProbQk { k } => {
            let (successes, qk) = run_seeded_trials(cfg.trials, cfg.seed, cfg.jobs, |spec| {
                let g = Graph::random(cfg.n, spec);
                let d = canon::decide_qk(&g, k)?;
                let obs = QkObservations {
                    unresolved: !d.resolved as u64,
                    min_word_len: d.word.as_ref().map(|w| w.len()),
                    max_word_len: d.word.as_ref().map(|w| w.len()),
                };
                Ok((d.in_qk, obs))
            })?;
            finish("prob_qk", cfg.n, cfg.trials, cfg.seed, successes, Some(qk), None, start)
        }
        Experiment::ResolutionRate { k } => {
            let (successes, qk) = run_seeded_trials(cfg.trials, cfg.seed, cfg.jobs, |spec| {
                let g = Graph::random(cfg.n, spec);
                let p = canon::partition(&g, k)?;
                let resolved = canon::resolves(&p);
                let wlen = p.w().len() * p.w().len().saturating_sub(1) / 2;
                let obs = QkObservations {
                    unresolved: !resolved as u64,
                    min_word_len: Some(wlen),
                    max_word_len: Some(wlen),
                };
                Ok((resolved, obs))
            })?;
            finish(
                "resolution_rate",
                cfg.n,
                cfg.trials,
                cfg.seed,
                successes,
                Some(qk),
                None,
                start,
            )
        }
        _ => Err(Error::InvalidConfig(format!(
            "estimate_property does not run {}",
            cfg.experiment.name()
        ))),
    }
}

/// Attack success frequency. Two hard invariants are re-checked on every
/// trial and abort the whole experiment when violated: the output differs
/// from the input in at most one slot, and claimed success implies the
/// decision holds on the output.
pub fn estimate_attack_success(cfg: &ExperimentConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    match cfg.experiment {
        Experiment::AttackA => {
            let w = degseq::window(cfg.n)?;
            let codes = ACodes::for_window(&w);
            let (successes, reasons) =
                run_seeded_trials(cfg.trials, cfg.seed, cfg.jobs, |spec| {
                    let g = Graph::random(cfg.n, spec);
                    let (out, outcome) = degseq::adversary_a(&g, &codes)?;
                    check_attack_invariants(&g, &out, &outcome, |h| {
                        let p = DegreeProfile::from_degrees(&w, &h.degrees());
                        degseq::decide_a(&p, &codes)
                    })?;
                    Ok((outcome.success, reason_tally(&outcome)))
                })?;
            finish(
                "attack_a",
                cfg.n,
                cfg.trials,
                cfg.seed,
                successes,
                None,
                Some(reasons),
                start,
            )
        }
        Experiment::AttackQk { k } => {
            let (successes, reasons) =
                run_seeded_trials(cfg.trials, cfg.seed, cfg.jobs, |spec| {
                    let g = Graph::random(cfg.n, spec);
                    let (out, outcome) = canon::adversary_qk(&g, k)?;
                    check_attack_invariants(&g, &out, &outcome, |h| {
                        Ok(canon::decide_qk(h, k)?.in_qk)
                    })?;
                    Ok((outcome.success, reason_tally(&outcome)))
                })?;
            finish(
                "attack_qk",
                cfg.n,
                cfg.trials,
                cfg.seed,
                successes,
                None,
                Some(reasons),
                start,
            )
        }
        _ => Err(Error::InvalidConfig(format!(
            "estimate_attack_success does not run {}",
            cfg.experiment.name()
        ))),
    }
}

fn reason_tally(outcome: &AttackOutcome) -> [u64; 5] {
    use crate::canon::AttackReason::*;
    let mut t = [0u64; 5];
    let idx = match outcome.reason {
        AlreadyInProperty => 0,
        UnresolvedHenceIn => 1,
        CodeFlipApplied => 2,
        FlipBreaksPartition => 3,
        NoFlipFound => 4,
    };
    t[idx] = 1;
    t
}

/// Reusable hard-invariant check for adversaries, also applied to stubs.
pub fn check_attack_invariants<F>(
    input: &Graph,
    output: &Graph,
    outcome: &AttackOutcome,
    decide: F,
) -> Result<()>
where
    F: Fn(&Graph) -> Result<bool>,
{
    let diff = input.diff_count(output)?;
    if diff > 1 {
        return Err(Error::InvariantViolation(format!(
            "adversary changed {diff} slots"
        )));
    }
    if outcome.success && !decide(output)? {
        return Err(Error::InvariantViolation(
            "success claimed but the decision fails on the output".into(),
        ));
    }
    Ok(())
}

/// Tallies of vertex-degree residues: deg(1) marginally and
/// (deg(1), deg(2)) jointly, with total-variation distances to uniform and
/// chi-square statistics.
#[derive(Clone, Debug)]
pub struct ModUniformityStats {
    pub n: usize,
    pub m: u64,
    pub trials: u64,
    pub seed: u64,
    pub marginal: Vec<u64>,
    pub pair: Vec<u64>,
    pub elapsed_s: f64,
}

impl ModUniformityStats {
    pub fn tv_marginal(&self) -> f64 {
        tv_to_uniform(&self.marginal, self.trials)
    }

    pub fn tv_pair(&self) -> f64 {
        tv_to_uniform(&self.pair, self.trials)
    }

    pub fn chi2_marginal(&self) -> f64 {
        chi2_uniform(&self.marginal, self.trials)
    }

    pub fn chi2_pair(&self) -> f64 {
        chi2_uniform(&self.pair, self.trials)
    }
}

fn tv_to_uniform(counts: &[u64], trials: u64) -> f64 {
    let p = 1.0 / counts.len() as f64;
    0.5 * counts
        .iter()
        .map(|&c| (c as f64 / trials as f64 - p).abs())
        .sum::<f64>()
}

fn chi2_uniform(counts: &[u64], trials: u64) -> f64 {
    let expected = trials as f64 / counts.len() as f64;
    counts
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// Residue-uniformity experiment for an odd modulus m >= 3.
pub fn mod_uniformity_test(
    n: usize,
    m: u64,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<ModUniformityStats> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::InvalidModulus(m));
    }
    if n < 2 {
        return Err(Error::InvalidConfig("mod_uniformity needs n >= 2".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let start = Instant::now();
    let cells = m as usize;
    let (_, tallies) = run_seeded_trials(trials, seed, jobs, |spec| {
        let g = Graph::random(n, spec);
        let d1 = g.degree(1) as u64 % m;
        let d2 = g.degree(2) as u64 % m;
        let mut t = vec![0u64; cells + cells * cells];
        t[d1 as usize] = 1;
        t[cells + (d1 as usize) * cells + d2 as usize] = 1;
        Ok((true, t))
    })?;
    Ok(ModUniformityStats {
        n,
        m,
        trials,
        seed,
        marginal: tallies[..cells].to_vec(),
        pair: tallies[cells..].to_vec(),
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Per-bit one-counts of the parity words and the distribution of Z mod 4.
#[derive(Clone, Debug)]
pub struct ParityStats {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub delta1: usize,
    pub delta2: usize,
    pub bit_ones: Vec<u64>,
    pub z_mod4: [u64; 4],
    pub elapsed_s: f64,
}

impl ParityStats {
    /// Mean of each bit of (Y_down, Y_up), in order.
    pub fn bit_means(&self) -> Vec<f64> {
        self.bit_ones
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    /// Frequency of Z mod 4 in {0, 1}.
    pub fn z01_frequency(&self) -> f64 {
        (self.z_mod4[0] + self.z_mod4[1]) as f64 / self.trials as f64
    }
}

/// Parity-uniformity experiment over the degree window of n.
pub fn parity_uniformity_test(
    n: usize,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<ParityStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let w = degseq::window(n)?;
    let start = Instant::now();
    let bits = w.delta1() + w.delta2();
    let (_, tallies) = run_seeded_trials(trials, seed, jobs, |spec| {
        let g = Graph::random(n, spec);
        let p = DegreeProfile::from_degrees(&w, &g.degrees());
        let mut t = vec![0u64; bits + 4];
        for i in 1..=w.delta1() {
            t[i - 1] = p.ydown().get(i) as u64;
        }
        for j in 1..=w.delta2() {
            t[w.delta1() + j - 1] = p.yup().get(j) as u64;
        }
        t[bits + (p.z() % 4) as usize] = 1;
        Ok((true, t))
    })?;
    let mut z_mod4 = [0u64; 4];
    z_mod4.copy_from_slice(&tallies[bits..]);
    Ok(ParityStats {
        n,
        trials,
        seed,
        delta1: w.delta1(),
        delta2: w.delta2(),
        bit_ones: tallies[..bits].to_vec(),
        z_mod4,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// How often each degree-range statement holds over seeded samples.
#[derive(Clone, Debug)]
pub struct DegreeRangeStats {
    pub n: usize,
    pub trials: u64,
    pub seed: u64,
    pub part_counts: [u64; 5],
    pub all_count: u64,
    pub elapsed_s: f64,
}

pub fn degree_range_test(
    n: usize,
    trials: u64,
    seed: u64,
    jobs: usize,
) -> Result<DegreeRangeStats> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let thresholds = ThresholdSet::new(n)?;
    let start = Instant::now();
    let (all_count, part_counts) = run_seeded_trials(trials, seed, jobs, |spec| {
        let g = Graph::random(n, spec);
        let check = lowerbound::check_degree_range(&g, &thresholds)?;
        let mut t = [0u64; 5];
        for (slot, ok) in t.iter_mut().zip(check.parts()) {
            *slot = ok as u64;
        }
        Ok((check.all(), t))
    })?;
    Ok(DegreeRangeStats {
        n,
        trials,
        seed,
        part_counts,
        all_count,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}
