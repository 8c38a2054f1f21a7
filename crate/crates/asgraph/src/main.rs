//! Command-line surface: graph generation, property decisions, single-flip
//! attacks, covering-code utilities, Monte Carlo experiments, and per-graph
//! reports. Every run emits one JSON document (or a CSV line with `--csv`)
//! that echoes enough configuration to reproduce it.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand};

use asgraph::canon::{self, KSchedule};
use asgraph::covercode::{build_code, exhaustive_min_cover};
use asgraph::degseq::{self, ACodes, DegreeProfile};
use asgraph::error::{Error, Result};
use asgraph::graph::{Graph, SeedSpec};
use asgraph::lowerbound::{self, SeqStats, ThresholdSet};
use asgraph::mc::{self, Experiment, ExperimentConfig};
use asgraph::report::RunReport;

#[derive(Parser)]
#[command(
    name = "asgraph",
    version,
    about = "Anti-stochastic graph toolkit: sampling, property decisions, one-flip attacks, covering codes, Monte Carlo experiments"
)]
struct Cli {
    /// Emit a one-line CSV record instead of JSON
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a uniform random graph and write it as ASGRAPH v1
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide the degree-partition property Q_k for a graph file
    DecideQk {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: Option<u64>,
        /// Two-column threshold table (n_threshold k); used when --k is absent
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Attack toward Q_k with at most one edge change
    AttackQk {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        schedule: Option<PathBuf>,
        /// Try every slot when the code flip fails (small n only)
        #[arg(long)]
        fallback_exhaustive: bool,
    },
    /// Decide the degree-sequence property for a graph file
    DecideDeg {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        codes_down_len: Option<usize>,
        #[arg(long)]
        codes_up_len: Option<usize>,
    },
    /// Attack toward the degree-sequence property with one edge change
    AttackDeg {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        codes_down_len: Option<usize>,
        #[arg(long)]
        codes_up_len: Option<usize>,
    },
    /// Covering-code utilities on the expanded Hamming construction
    #[command(group(ArgGroup::new("action").required(true).args(["check", "flip", "density", "min_cover"])))]
    Code {
        #[arg(long)]
        len: usize,
        /// Exhaustively verify the radius-1 covering property
        #[arg(long)]
        check: bool,
        /// Report the repair flip for a word (bits from --in or stdin)
        #[arg(long)]
        flip: bool,
        /// Report construction parameters and density only
        #[arg(long)]
        density: bool,
        /// Exact minimum covering code by exhaustive search (len <= 5)
        #[arg(long)]
        min_cover: bool,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Seeded Monte Carlo experiments
    Simulate {
        /// One of: prob_qk, prob_a, attack_qk, attack_a, mod_uniformity,
        /// parity_uniformity, degree_range, resolution_rate
        #[arg(long)]
        experiment: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        m: Option<u64>,
        /// Worker threads; never changes the counts, only the wall time
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        schedule: Option<PathBuf>,
    },
    /// Per-graph report: window, thresholds, P-conditions, degree ranges,
    /// degree classes, and the k-partition summary
    Stats {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        k: Option<u64>,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(report) => print!("{}", report.render(cli.csv)),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph> {
    Graph::parse_asgraph(&fs::read_to_string(path)?)
}

fn resolve_k(k: Option<u64>, schedule: Option<&PathBuf>, n: usize) -> Result<u64> {
    if let Some(k) = k {
        if !canon::valid_k(k) {
            return Err(Error::InvalidK(k));
        }
        return Ok(k);
    }
    let sched = match schedule {
        Some(path) => KSchedule::parse(&fs::read_to_string(path)?)?,
        None => KSchedule::default_schedule(),
    };
    canon::choose_k(n as u64, &sched)
}

fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get().min(8))
        .unwrap_or(1)
}

fn run(cmd: Cmd) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match cmd {
        Cmd::Gen { n, seed, out } => {
            if n == 0 {
                return Err(Error::InvalidConfig("n must be >= 1".into()));
            }
            let g = Graph::random(n, SeedSpec::new(seed, 0));
            fs::write(&out, g.to_asgraph())?;
            let mut r = RunReport::new("gen");
            r.n = Some(n as u64);
            r.seed = Some(seed);
            r.notes = format!("wrote {}; edges={}", out.display(), g.edge_count());
            r
        }
        Cmd::DecideQk { input, k, schedule } => {
            let g = read_graph(&input)?;
            let k = resolve_k(k, schedule.as_ref(), g.n())?;
            let d = canon::decide_qk(&g, k)?;
            let mut r = RunReport::new("decide-qk");
            r.n = Some(g.n() as u64);
            r.k = Some(k);
            r.successes = Some(d.in_qk as u64);
            r.frequency = Some(d.in_qk as u64 as f64);
            r.notes = format!(
                "in={}; in_qk={}; resolved={}; word_len={}; code_member={}",
                input.display(),
                d.in_qk,
                d.resolved,
                d.word.as_ref().map_or("-".into(), |w| w.len().to_string()),
                d.code_member.map_or("-".into(), |b| b.to_string()),
            );
            r
        }
        Cmd::AttackQk {
            input,
            out,
            k,
            schedule,
            fallback_exhaustive,
        } => {
            let g = read_graph(&input)?;
            let k = resolve_k(k, schedule.as_ref(), g.n())?;
            let (attacked, outcome) = if fallback_exhaustive {
                canon::adversary_qk_exhaustive(&g, k)?
            } else {
                canon::adversary_qk(&g, k)?
            };
            if let Some(path) = &out {
                fs::write(path, attacked.to_asgraph())?;
            }
            let mut r = RunReport::new("attack-qk");
            r.n = Some(g.n() as u64);
            r.k = Some(k);
            r.successes = Some(outcome.success as u64);
            r.frequency = Some(outcome.success as u64 as f64);
            r.notes = format!(
                "in={}; out={}; success={}; reason={}; flipped={}",
                input.display(),
                out.as_ref().map_or("-".into(), |p| p.display().to_string()),
                outcome.success,
                outcome.reason,
                outcome
                    .flipped
                    .map_or("-".into(), |s| format!("({},{})", s.u(), s.v())),
            );
            r
        }
        Cmd::DecideDeg {
            input,
            codes_down_len,
            codes_up_len,
        } => {
            let g = read_graph(&input)?;
            let profile = DegreeProfile::from_graph(&g)?;
            let w = *profile.window();
            let codes = ACodes::with_lengths(
                codes_down_len.unwrap_or(w.delta1()),
                codes_up_len.unwrap_or(w.delta2()),
            );
            let verdict = degseq::decide_a(&profile, &codes)?;
            let mut r = RunReport::new("decide-deg");
            r.n = Some(g.n() as u64);
            r.successes = Some(verdict as u64);
            r.frequency = Some(verdict as u64 as f64);
            r.notes = format!(
                "in={}; in_a={}; window=[{},{}]; mid={}; codes={}/{}; z={}; z_mod4={}; down_in_code={}; up_in_code={}",
                input.display(),
                verdict,
                w.d_lo(),
                w.d_hi(),
                w.mid(),
                codes.down.len(),
                codes.up.len(),
                profile.z(),
                profile.z() % 4,
                codes.down.contains(profile.ydown())?,
                codes.up.contains(profile.yup())?,
            );
            r
        }
        Cmd::AttackDeg {
            input,
            out,
            codes_down_len,
            codes_up_len,
        } => {
            let g = read_graph(&input)?;
            let w = degseq::window(g.n())?;
            let codes = ACodes::with_lengths(
                codes_down_len.unwrap_or(w.delta1()),
                codes_up_len.unwrap_or(w.delta2()),
            );
            let (attacked, outcome) = degseq::adversary_a(&g, &codes)?;
            if let Some(path) = &out {
                fs::write(path, attacked.to_asgraph())?;
            }
            let mut r = RunReport::new("attack-deg");
            r.n = Some(g.n() as u64);
            r.successes = Some(outcome.success as u64);
            r.frequency = Some(outcome.success as u64 as f64);
            r.notes = format!(
                "in={}; out={}; success={}; reason={}; flipped={}; window=[{},{}]",
                input.display(),
                out.as_ref().map_or("-".into(), |p| p.display().to_string()),
                outcome.success,
                outcome.reason,
                outcome
                    .flipped
                    .map_or("-".into(), |s| format!("({},{})", s.u(), s.v())),
                w.d_lo(),
                w.d_hi(),
            );
            r
        }
        Cmd::Code {
            len,
            check,
            flip,
            density,
            min_cover,
            input,
        } => run_code(len, check, flip, density, min_cover, input)?,
        Cmd::Simulate {
            experiment,
            n,
            trials,
            seed,
            k,
            m,
            jobs,
            schedule,
        } => {
            let jobs = jobs.unwrap_or_else(default_jobs);
            run_simulate(&experiment, n, trials, seed, k, m, jobs, schedule.as_ref())?
        }
        Cmd::Stats { input, n, seed, k } => {
            let g = match (&input, n) {
                (Some(path), _) => read_graph(path)?,
                (None, Some(n)) if n > 0 => Graph::random(n, SeedSpec::new(seed, 0)),
                _ => {
                    return Err(Error::InvalidConfig(
                        "stats needs --in or a positive --n".into(),
                    ))
                }
            };
            let mut r = RunReport::new("stats");
            r.n = Some(g.n() as u64);
            r.k = k;
            r.seed = input.is_none().then_some(seed);
            r.notes = stats_notes(&g, k)?;
            r
        }
    };
    report.elapsed_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn run_code(
    len: usize,
    check: bool,
    flip: bool,
    _density: bool,
    min_cover: bool,
    input: Option<PathBuf>,
) -> Result<RunReport> {
    let code = build_code(len);
    let mut r = RunReport::new("code");
    r.n = Some(len as u64);
    r.m = Some(code.hamming_len() as u64);
    r.frequency = Some(code.density());
    if check {
        let covered = code.verify_covering()?;
        r.successes = Some(covered as u64);
        r.notes = format!(
            "covered={covered}; len={len}; r={}; m={}; density={}",
            code.order(),
            code.hamming_len(),
            code.density()
        );
    } else if flip {
        let text = match input {
            Some(path) => fs::read_to_string(path)?,
            None => {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf)?;
                buf
            }
        };
        let word = asgraph::word::Word::from_bits(text.trim())?;
        match code.flip_to_code(&word)? {
            None => {
                r.successes = Some(1);
                r.notes = format!("in_code=true; len={len}");
            }
            Some(t) => {
                r.successes = Some(0);
                r.notes = format!("in_code=false; flip_index={t}; len={len}");
            }
        }
    } else if min_cover {
        let cover = exhaustive_min_cover(len)?;
        r.successes = Some(cover.len() as u64);
        let words: Vec<String> = cover.iter().map(|w| w.bit_string()).collect();
        r.notes = format!(
            "min_cover_size={}; min_density={}; construction_density={}; words=[{}]",
            cover.len(),
            cover.len() as f64 / (1u64 << len) as f64,
            code.density(),
            words.join(" ")
        );
    } else {
        r.notes = format!(
            "len={len}; r={}; m={}; density={}; codewords_log2={}",
            code.order(),
            code.hamming_len(),
            code.density(),
            code.codewords_log2()
        );
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    experiment: &str,
    n: usize,
    trials: u64,
    seed: u64,
    k: Option<u64>,
    m: Option<u64>,
    jobs: usize,
    schedule: Option<&PathBuf>,
) -> Result<RunReport> {
    let name = experiment.replace('-', "_");
    let need_k = matches!(name.as_str(), "prob_qk" | "attack_qk" | "resolution_rate");
    let resolved_k = if need_k {
        Some(resolve_k(k, schedule, n)?)
    } else {
        None
    };
    let cfg = |experiment| ExperimentConfig {
        n,
        trials,
        seed,
        jobs,
        experiment,
    };
    let mut r = RunReport::new(name.clone());
    r.n = Some(n as u64);
    r.trials = Some(trials);
    r.seed = Some(seed);
    r.k = resolved_k;
    match name.as_str() {
        "prob_a" => {
            let est = mc::estimate_property(&cfg(Experiment::ProbA))?;
            fill_estimate(&mut r, &est);
            let w = degseq::window(n)?;
            r.notes = format!(
                "window=[{},{}]; codes={}/{}",
                w.d_lo(),
                w.d_hi(),
                w.delta1(),
                w.delta2()
            );
        }
        "prob_qk" | "resolution_rate" => {
            let k = resolved_k.expect("resolved above");
            let exp = if name == "prob_qk" {
                Experiment::ProbQk { k }
            } else {
                Experiment::ResolutionRate { k }
            };
            let est = mc::estimate_property(&cfg(exp))?;
            fill_estimate(&mut r, &est);
            if let Some(qk) = est.qk {
                let lens = match (qk.min_word_len, qk.max_word_len) {
                    (Some(a), Some(b)) => format!("[{a},{b}]"),
                    _ => "-".into(),
                };
                let cert = qk
                    .certificate(est.trials)
                    .map_or("-".into(), |c| format!("{c:.3e}"));
                r.notes = format!(
                    "unresolved={}; word_len={}; certificate_p_bound={}",
                    qk.unresolved, lens, cert
                );
            }
        }
        "attack_a" | "attack_qk" => {
            let exp = if name == "attack_a" {
                Experiment::AttackA
            } else {
                Experiment::AttackQk {
                    k: resolved_k.expect("resolved above"),
                }
            };
            let est = mc::estimate_attack_success(&cfg(exp))?;
            fill_estimate(&mut r, &est);
            if let Some(t) = est.reasons {
                r.notes = format!(
                    "reasons: already_in={}; unresolved_in={}; code_flip={}; flip_broke={}; no_flip={}",
                    t[0], t[1], t[2], t[3], t[4]
                );
            }
        }
        "mod_uniformity" => {
            let m = m.ok_or_else(|| {
                Error::InvalidConfig("mod_uniformity needs --m".into())
            })?;
            let stats = mc::mod_uniformity_test(n, m, trials, seed, jobs)?;
            r.m = Some(m);
            r.notes = format!(
                "tv_marginal={:.5}; tv_pair={:.5}; chi2_marginal={:.3}; chi2_pair={:.3}",
                stats.tv_marginal(),
                stats.tv_pair(),
                stats.chi2_marginal(),
                stats.chi2_pair()
            );
        }
        "parity_uniformity" => {
            let stats = mc::parity_uniformity_test(n, trials, seed, jobs)?;
            let z01 = stats.z_mod4[0] + stats.z_mod4[1];
            r.successes = Some(z01);
            r.frequency = Some(stats.z01_frequency());
            let (lo, hi) = mc::wilson_ci(z01, trials, mc::DEFAULT_Z)?;
            r.ci_low = Some(lo);
            r.ci_high = Some(hi);
            let means = stats.bit_means();
            let min = means.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            r.notes = format!(
                "delta1={}; delta2={}; bit_mean_min={min:.4}; bit_mean_max={max:.4}; z_mod4=[{},{},{},{}]",
                stats.delta1, stats.delta2,
                stats.z_mod4[0], stats.z_mod4[1], stats.z_mod4[2], stats.z_mod4[3]
            );
        }
        "degree_range" => {
            let stats = mc::degree_range_test(n, trials, seed, jobs)?;
            r.successes = Some(stats.all_count);
            r.frequency = Some(stats.all_count as f64 / trials as f64);
            let (lo, hi) = mc::wilson_ci(stats.all_count, trials, mc::DEFAULT_Z)?;
            r.ci_low = Some(lo);
            r.ci_high = Some(hi);
            let p = stats.part_counts;
            r.notes = format!(
                "part_counts=[{},{},{},{},{}]",
                p[0], p[1], p[2], p[3], p[4]
            );
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown experiment {other:?}"
            )))
        }
    }
    Ok(r)
}

fn fill_estimate(r: &mut RunReport, est: &mc::EstimateResult) {
    r.successes = Some(est.successes);
    r.frequency = Some(est.frequency);
    r.ci_low = Some(est.ci_low);
    r.ci_high = Some(est.ci_high);
}

fn stats_notes(g: &Graph, k: Option<u64>) -> Result<String> {
    let mut parts: Vec<String> = Vec::new();
    let stats = SeqStats::from_graph(g)?;
    parts.push(format!(
        "edges={}; mean_degree={:.3}",
        g.edge_count(),
        stats.mean()
    ));
    match degseq::window(g.n()) {
        Ok(w) => parts.push(format!(
            "window=[{},{}]; mid={}; delta1={}; delta2={}",
            w.d_lo(),
            w.d_hi(),
            w.mid(),
            w.delta1(),
            w.delta2()
        )),
        Err(e) => parts.push(format!("window unavailable ({e})")),
    }
    match ThresholdSet::new(g.n()) {
        Ok(t) => {
            parts.push(format!("a={:.3}; b={:.3}; c={:.3}", t.a(), t.b(), t.c()));
            let p = lowerbound::check_p_conditions(&stats, &t);
            parts.push(format!(
                "P=[{},{},{},{}]",
                p.p1 as u8, p.p2 as u8, p.p3 as u8, p.p4 as u8
            ));
            match lowerbound::check_degree_range(g, &t) {
                Ok(l) => {
                    let b = l.parts();
                    parts.push(format!(
                        "degree_range=[{},{},{},{},{}]",
                        b[0] as u8, b[1] as u8, b[2] as u8, b[3] as u8, b[4] as u8
                    ));
                }
                Err(e) => parts.push(format!("degree_range unavailable ({e})")),
            }
            let classes = lowerbound::classify_degrees(&stats, &t);
            parts.push(format!(
                "vertices: very_good={}; good={}; bad={}",
                classes.very_good_vertices,
                classes.good_vertices - classes.very_good_vertices,
                classes.bad_vertices
            ));
        }
        Err(e) => parts.push(format!("thresholds unavailable ({e})")),
    }
    if let Some(k) = k {
        let p = canon::partition(g, k)?;
        let resolved = canon::resolves(&p);
        parts.push(format!(
            "k={}; |W|={}; |U0|={}; |R|={}; resolved={}",
            k,
            p.w().len(),
            p.u0().len(),
            p.r_vertices().len(),
            resolved
        ));
    }
    Ok(parts.join(" | "))
}
