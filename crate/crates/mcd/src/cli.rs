//! File-based command-line front end.
//!
//! Subcommands mirror the pipeline stages: `gen`, `stats`, `split`, `learn`,
//! `scan`, `solve`, `evaluate`, and `bench`. Every output file is written
//! next to a `<output>.manifest` with the command line, input digests, seeds,
//! and timings needed to re-run it. All randomness flows from explicit
//! `--seed` flags.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::baselines::{
    estimate_accuracy, ground_set, ic_spread, EvalReport, IcConfig, RNG_ALGORITHM,
};
use crate::credit_engine::scan_log;
use crate::error::{McdError, Result};
use crate::event_log::{EventLog, UserId};
use crate::model_learner::{learn, LearnedParams};
use crate::social_graph::SocialGraph;
use crate::solvers::{
    brute_force, celf_greedy, stream_budgeted, stream_cardinality, Constraint, SeedResult,
    WeightVector,
};
use crate::synth::{generate, GenConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Key-value record written as `<output>.manifest` beside each output file;
/// holds everything needed to re-run the command that produced the file.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(argv: &[String]) -> Self {
        let mut m = RunManifest::default();
        m.push("tool", "mcd");
        m.push("version", VERSION);
        m.push("command", argv.join(" "));
        m.push("rng", RNG_ALGORITHM);
        m
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    /// Records an input path and its content digest.
    pub fn input(&mut self, name: &str, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.push(format!("input.{name}"), path.display());
        self.push(format!("sha256.{name}"), hex);
        Ok(())
    }

    pub fn write_for(&self, output: &Path) -> Result<()> {
        let mut path = output.as_os_str().to_owned();
        path.push(".manifest");
        let mut f = std::io::BufWriter::new(std::fs::File::create(PathBuf::from(path))?);
        writeln!(f, "output={}", output.display())?;
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ConstraintSpec {
    K(usize),
    Budget(f64),
}

fn parse_constraint(s: &str) -> std::result::Result<ConstraintSpec, String> {
    if let Some(v) = s.strip_prefix("k=") {
        v.parse()
            .map(ConstraintSpec::K)
            .map_err(|_| format!("invalid cardinality `{v}`"))
    } else if let Some(v) = s.strip_prefix("budget=") {
        let b: f64 = v.parse().map_err(|_| format!("invalid budget `{v}`"))?;
        Ok(ConstraintSpec::Budget(b))
    } else {
        Err("expected k=N or budget=B".to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMode {
    Stream,
    Celf,
    Brute,
}

#[derive(Parser, Debug)]
#[command(
    name = "mcd",
    version,
    about = "Influence maximization over multi-action event logs"
)]
struct Cli {
    /// Worker threads for parallel stages (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic follow graph and multi-action event log.
    Gen {
        #[arg(long, default_value_t = 200)]
        users: usize,
        #[arg(long, default_value_t = 800)]
        edges: usize,
        #[arg(long, default_value_t = 20)]
        actions: usize,
        #[arg(long, default_value_t = 2)]
        initiators: usize,
        #[arg(long, default_value_t = 0.3)]
        repeat_rate: f64,
        #[arg(long, default_value_t = 0.3)]
        adopt: f64,
        #[arg(long, default_value_t = 120.0)]
        mean_delay: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_log: PathBuf,
    },
    /// Print per-action repetition rates of a log, highest first.
    Stats {
        #[arg(long)]
        log: PathBuf,
        /// Print only the N highest-rate actions.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Split a log into disjoint train/test action sets.
    Split {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        test_fraction: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_train: PathBuf,
        #[arg(long)]
        out_test: PathBuf,
    },
    /// Learn delay normalizers and performance counts from a training log.
    Learn {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Scan a log into per-action credits; optionally dump the credit table.
    Scan {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        log: PathBuf,
        /// Write `action source receiver credit` lines here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Select a seed set under a cardinality or knapsack constraint.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_enum)]
        mode: SolveMode,
        /// `k=N` or `budget=B`.
        #[arg(long, value_parser = parse_constraint)]
        constraint: ConstraintSpec,
        /// Per-user costs (`user weight` lines); required with `budget=B`.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Threshold-ladder accuracy (default 0.1 cardinality, 0.05 knapsack).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Visit the ground set in a seeded random order instead of ascending ids.
        #[arg(long)]
        shuffle: Option<u64>,
        /// Refuse exhaustive enumeration beyond this many subsets.
        #[arg(long, default_value_t = 1 << 22)]
        brute_limit: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimation-accuracy report: per-action influence estimates of the
    /// multi-action and first-occurrence models against true performer counts.
    Evaluate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long)]
        seed_size: usize,
        #[arg(long, default_value_t = 0.1)]
        ic_prob: f64,
        #[arg(long, default_value_t = 10_000)]
        ic_sims: u32,
        #[arg(long, default_value_t = 12345)]
        ic_seed: u64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        report: PathBuf,
        /// Also write a CSV series sorted by action popularity.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Generate an instance and race the streaming solver against lazy greedy.
    Bench {
        #[arg(long, default_value_t = 2000)]
        users: usize,
        #[arg(long, default_value_t = 6000)]
        edges: usize,
        #[arg(long, default_value_t = 100)]
        actions: usize,
        #[arg(long, default_value_t = 12)]
        initiators: usize,
        #[arg(long, default_value_t = 0.3)]
        repeat_rate: f64,
        #[arg(long, default_value_t = 0.3)]
        adopt: f64,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Cardinality constraints to race.
        #[arg(long, value_delimiter = ',', default_value = "10,25,50")]
        k: Vec<usize>,
        /// Also race a knapsack constraint with seeded integer weights.
        #[arg(long)]
        budget: Option<f64>,
    },
}

/// Runs the CLI; returns the process exit status. Usage errors exit 2,
/// domain errors exit 1.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(argv.iter()) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // a pool may already exist when dispatch is called twice in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match execute(cli.command, &argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn load_weights(path: &Path) -> Result<BTreeMap<UserId, f64>> {
    use std::io::BufRead;
    let file = std::fs::File::open(path)?;
    let mut weights = BTreeMap::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(McdError::parse(
                lineno,
                format!("expected 2 fields `user weight`, got {}", fields.len()),
            ));
        }
        let user: UserId = fields[0]
            .parse()
            .map_err(|_| McdError::parse(lineno, format!("invalid user id `{}`", fields[0])))?;
        let w: f64 = fields[1]
            .parse()
            .map_err(|_| McdError::parse(lineno, format!("invalid weight `{}`", fields[1])))?;
        weights.insert(user, w);
    }
    Ok(weights)
}

fn execute(command: Command, argv: &[String]) -> Result<()> {
    match command {
        Command::Gen {
            users,
            edges,
            actions,
            initiators,
            repeat_rate,
            adopt,
            mean_delay,
            seed,
            out_graph,
            out_log,
        } => {
            let cfg = GenConfig {
                users,
                edges,
                actions,
                initiators_per_action: initiators,
                repeat_rate,
                adoption_probability: adopt,
                mean_delay_s: mean_delay,
                rng_seed: seed,
            };
            let started = Instant::now();
            let (graph, log) = generate(&cfg)?;
            graph.write_path(&out_graph)?;
            log.write_path(&out_log)?;
            let elapsed = started.elapsed().as_secs_f64();
            for out in [&out_graph, &out_log] {
                let mut m = RunManifest::new(argv);
                m.push("seed.gen", seed);
                m.push("time_s", format!("{elapsed:.6}"));
                m.write_for(out)?;
            }
            println!(
                "generated {} users, {} edges, {} actions, {} records",
                graph.node_count(),
                graph.edge_count(),
                log.actions().len(),
                log.len()
            );
            Ok(())
        }
        Command::Stats { log, top } => {
            let event_log = EventLog::read_path(&log)?;
            let mut rows: Vec<(f64, u64, usize, usize)> = Vec::new();
            for &a in event_log.actions() {
                let slice = event_log.action_records(a);
                let users: BTreeSet<UserId> = slice.iter().map(|r| r.user).collect();
                rows.push((event_log.repetition_rate(a)?, a, slice.len(), users.len()));
            }
            rows.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
            let n = top.unwrap_or(rows.len()).min(rows.len());
            println!("action\trepetition_rate\tperformances\tusers");
            for (rate, a, performances, users) in rows.into_iter().take(n) {
                println!("{a}\t{rate:.6}\t{performances}\t{users}");
            }
            Ok(())
        }
        Command::Split {
            log,
            test_fraction,
            seed,
            out_train,
            out_test,
        } => {
            let event_log = EventLog::read_path(&log)?;
            let started = Instant::now();
            let (train, test) = event_log.split_by_action(test_fraction, seed)?;
            train.write_path(&out_train)?;
            test.write_path(&out_test)?;
            let elapsed = started.elapsed().as_secs_f64();
            for out in [&out_train, &out_test] {
                let mut m = RunManifest::new(argv);
                m.input("log", &log)?;
                m.push("seed.split", seed);
                m.push("test_fraction", test_fraction);
                m.push("time_s", format!("{elapsed:.6}"));
                m.write_for(out)?;
            }
            println!(
                "split {} actions into {} train / {} test",
                event_log.actions().len(),
                train.actions().len(),
                test.actions().len()
            );
            Ok(())
        }
        Command::Learn { graph, log, out } => {
            let social = SocialGraph::read_path(&graph)?;
            let event_log = EventLog::read_path(&log)?;
            let started = Instant::now();
            let params = learn(&social, &event_log);
            let elapsed = started.elapsed().as_secs_f64();
            params.write_path(&out)?;
            let mut m = RunManifest::new(argv);
            m.input("graph", &graph)?;
            m.input("log", &log)?;
            m.push("time_s", format!("{elapsed:.6}"));
            m.write_for(&out)?;
            println!("learned delay normalizers for {} pairs", params.tau_len());
            Ok(())
        }
        Command::Scan {
            graph,
            params,
            log,
            dump,
        } => {
            let social = SocialGraph::read_path(&graph)?;
            let learned = LearnedParams::read_path(&params)?;
            let event_log = EventLog::read_path(&log)?;
            let started = Instant::now();
            let model = scan_log(&social, &learned, &event_log);
            let table = model.credit_table();
            let elapsed = started.elapsed().as_secs_f64();
            let (nodes, edges): (usize, usize) = model
                .action_ids()
                .map(|a| {
                    let dag = model.dag(a).expect("scanned action");
                    (dag.node_count(), dag.edge_count())
                })
                .fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
            println!(
                "scanned {} actions: {} performer nodes, {} credit edges, {} fallback normalizers",
                model.action_count(),
                nodes,
                edges,
                model.fallback_tau_uses()
            );
            if let Some(dump_path) = dump {
                let mut f = std::io::BufWriter::new(std::fs::File::create(&dump_path)?);
                table.dump(&mut f)?;
                drop(f);
                let mut m = RunManifest::new(argv);
                m.input("graph", &graph)?;
                m.input("params", &params)?;
                m.input("log", &log)?;
                m.push("time_s", format!("{elapsed:.6}"));
                m.write_for(&dump_path)?;
            }
            Ok(())
        }
        Command::Solve {
            graph,
            params,
            log,
            mode,
            constraint,
            weights,
            epsilon,
            shuffle,
            brute_limit,
            out,
        } => {
            let social = SocialGraph::read_path(&graph)?;
            let learned = LearnedParams::read_path(&params)?;
            let event_log = EventLog::read_path(&log)?;
            let model = scan_log(&social, &learned, &event_log);
            let table = model.credit_table();
            let mut ground = ground_set(&social, &model);
            if let Some(seed) = shuffle {
                ground.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            }
            let constraint = match constraint {
                ConstraintSpec::K(k) => {
                    if k < 1 {
                        return Err(McdError::domain("k must be >= 1"));
                    }
                    Constraint::Cardinality(k)
                }
                ConstraintSpec::Budget(b) => {
                    let Some(weights_path) = weights.as_ref() else {
                        return Err(McdError::config(
                            "budget constraint requires --weights FILE",
                        ));
                    };
                    Constraint::Knapsack(WeightVector::new(load_weights(weights_path)?, b)?)
                }
            };
            let eps = epsilon.unwrap_or(match &constraint {
                Constraint::Cardinality(_) => 0.1,
                Constraint::Knapsack(_) => 0.05,
            });
            let result = match (mode, &constraint) {
                (SolveMode::Stream, Constraint::Cardinality(k)) => {
                    stream_cardinality(&table, &ground, *k, eps)?
                }
                (SolveMode::Stream, Constraint::Knapsack(w)) => {
                    stream_budgeted(&table, &ground, w, eps)?
                }
                (SolveMode::Celf, c) => celf_greedy(&model, &ground, c)?,
                (SolveMode::Brute, c) => brute_force(&model, &ground, c, brute_limit)?,
            };
            result.write_path(&out)?;
            let mut m = RunManifest::new(argv);
            m.input("graph", &graph)?;
            m.input("params", &params)?;
            m.input("log", &log)?;
            if let Some(w) = &weights {
                m.input("weights", w)?;
            }
            m.push("epsilon", eps);
            if let Some(seed) = shuffle {
                m.push("seed.shuffle", seed);
            }
            m.push("time_s", format!("{:.6}", result.wall_time_s));
            m.write_for(&out)?;
            println!(
                "selected {} seeds, value {:.6}, {} passes, {:.3}s",
                result.seeds.len(),
                result.value,
                result.passes,
                result.wall_time_s
            );
            Ok(())
        }
        Command::Evaluate {
            graph,
            params,
            train,
            test,
            seed_size,
            ic_prob,
            ic_sims,
            ic_seed,
            epsilon,
            report,
            plot,
        } => {
            let social = SocialGraph::read_path(&graph)?;
            let learned = LearnedParams::read_path(&params)?;
            let train_log = EventLog::read_path(&train)?;
            let test_log = EventLog::read_path(&test)?;

            let mcd_started = Instant::now();
            let mcd = estimate_accuracy(&social, &learned, &test_log, seed_size, epsilon)?;
            let mcd_s = mcd_started.elapsed().as_secs_f64();

            let cd_started = Instant::now();
            let train_first = train_log.dedupe_first_occurrence();
            let test_first = test_log.dedupe_first_occurrence();
            let cd_params = learn(&social, &train_first);
            let cd = estimate_accuracy(&social, &cd_params, &test_first, seed_size, epsilon)?;
            let cd_s = cd_started.elapsed().as_secs_f64();

            let ic_cfg = IcConfig::new(ic_prob, ic_sims, ic_seed)?;
            let mcd_seeds: BTreeSet<UserId> = mcd.seeds.iter().copied().collect();
            let cd_seeds: BTreeSet<UserId> = cd.seeds.iter().copied().collect();
            let ic_started = Instant::now();
            let spread_mcd = ic_spread(&social, &mcd_seeds, &ic_cfg)?;
            let spread_cd = ic_spread(&social, &cd_seeds, &ic_cfg)?;
            let ic_s = ic_started.elapsed().as_secs_f64();

            write_report(
                &report, &mcd, &cd, seed_size, epsilon, &ic_cfg, spread_mcd, spread_cd, mcd_s,
                cd_s, ic_s,
            )?;
            let mut m = RunManifest::new(argv);
            m.input("graph", &graph)?;
            m.input("params", &params)?;
            m.input("train", &train)?;
            m.input("test", &test)?;
            m.push("seed.ic", ic_seed);
            m.push("seed_size", seed_size);
            m.write_for(&report)?;

            if let Some(plot_path) = plot {
                write_plot(&plot_path, &mcd, &cd)?;
                let mut m = RunManifest::new(argv);
                m.input("test", &test)?;
                m.write_for(&plot_path)?;
            }
            println!(
                "evaluated {} test actions; report written to {}",
                mcd.per_action.len(),
                report.display()
            );
            Ok(())
        }
        Command::Bench {
            users,
            edges,
            actions,
            initiators,
            repeat_rate,
            adopt,
            test_fraction,
            seed,
            epsilon,
            k,
            budget,
        } => {
            let cfg = GenConfig {
                users,
                edges,
                actions,
                initiators_per_action: initiators,
                repeat_rate,
                adoption_probability: adopt,
                mean_delay_s: 120.0,
                rng_seed: seed,
            };
            let (graph, log) = generate(&cfg)?;
            let (train, test) = log.split_by_action(test_fraction, seed)?;
            let params = learn(&graph, &train);
            let model = scan_log(&graph, &params, &test);
            let table = model.credit_table();
            let ground = ground_set(&graph, &model);
            println!(
                "instance: {} users, {} edges, {} train / {} test actions, {} records",
                graph.node_count(),
                graph.edge_count(),
                train.actions().len(),
                test.actions().len(),
                log.len()
            );
            println!(
                "{:<8} {:<12} {:>14} {:>8} {:>10}",
                "solver", "constraint", "value", "passes", "time_s"
            );
            let row = |solver: &str, constraint: &str, r: &SeedResult| {
                println!(
                    "{:<8} {:<12} {:>14.4} {:>8} {:>10.3}",
                    solver, constraint, r.value, r.passes, r.wall_time_s
                );
            };
            for &k in &k {
                let label = format!("k={k}");
                let s = stream_cardinality(&table, &ground, k, epsilon)?;
                row("stream", &label, &s);
                let c = celf_greedy(&model, &ground, &Constraint::Cardinality(k))?;
                row("celf", &label, &c);
                let ratio = if s.value > 0.0 {
                    c.value / s.value
                } else {
                    1.0
                };
                let speedup = if s.wall_time_s > 0.0 {
                    c.wall_time_s / s.wall_time_s
                } else {
                    f64::INFINITY
                };
                println!(
                    "{:<8} {:<12} greedy/stream value {:.4}, stream speedup {:.1}x",
                    "", label, ratio, speedup
                );
            }
            if let Some(b) = budget {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
                let weights: BTreeMap<UserId, f64> = ground
                    .iter()
                    .map(|&u| (u, rng.gen_range(1..=4) as f64))
                    .collect();
                let wv = WeightVector::new(weights, b)?;
                let label = format!("budget={b}");
                let s = stream_budgeted(&table, &ground, &wv, 0.05)?;
                row("stream", &label, &s);
                let c = celf_greedy(&model, &ground, &Constraint::Knapsack(wv))?;
                row("celf", &label, &c);
            }
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn write_report(
    path: &Path,
    mcd: &EvalReport,
    cd: &EvalReport,
    seed_size: usize,
    epsilon: f64,
    ic_cfg: &IcConfig,
    spread_mcd: f64,
    spread_cd: f64,
    mcd_s: f64,
    cd_s: f64,
    ic_s: f64,
) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "action\ttrue_count\tmcd_estimate\tcd_estimate")?;
    let mut mean_true = 0.0;
    let mut mean_mcd = 0.0;
    let mut mean_cd = 0.0;
    let mut max_initiator_gap = 0.0f64;
    for (a, est) in &mcd.per_action {
        let cd_est = cd.per_action.get(a).map(|e| e.estimate).unwrap_or(0.0);
        writeln!(
            f,
            "{a}\t{}\t{:.6}\t{:.6}",
            est.true_count, est.estimate, cd_est
        )?;
        mean_true += est.true_count as f64;
        mean_mcd += est.estimate;
        mean_cd += cd_est;
        max_initiator_gap =
            max_initiator_gap.max((est.initiator_estimate - est.true_count as f64).abs());
    }
    let n = mcd.per_action.len().max(1) as f64;
    writeln!(f, "# summary")?;
    writeln!(f, "# actions={}", mcd.per_action.len())?;
    writeln!(f, "# seed_size={seed_size}")?;
    writeln!(f, "# epsilon={epsilon}")?;
    writeln!(f, "# rng={}", mcd.rng_algorithm)?;
    writeln!(
        f,
        "# mean_true={:.6} mean_mcd={:.6} mean_cd={:.6}",
        mean_true / n,
        mean_mcd / n,
        mean_cd / n
    )?;
    writeln!(f, "# max_initiator_gap={max_initiator_gap:.3e}")?;
    writeln!(
        f,
        "# sigma.mcd={:.6} sigma.cd={:.6}",
        mcd.seed_values["stream"], cd.seed_values["stream"]
    )?;
    writeln!(
        f,
        "# ic_prob={} ic_sims={} ic_spread.mcd_seeds={:.4} ic_spread.cd_seeds={:.4}",
        ic_cfg.edge_probability, ic_cfg.simulations, spread_mcd, spread_cd
    )?;
    writeln!(
        f,
        "# runtime.mcd_s={mcd_s:.3} runtime.cd_s={cd_s:.3} runtime.ic_s={ic_s:.3}"
    )?;
    Ok(())
}

/// CSV series for bar charts, sorted by increasing action popularity.
fn write_plot(path: &Path, mcd: &EvalReport, cd: &EvalReport) -> Result<()> {
    let mut rows: Vec<(usize, u64, f64, f64)> = mcd
        .per_action
        .iter()
        .map(|(&a, est)| {
            let cd_est = cd.per_action.get(&a).map(|e| e.estimate).unwrap_or(0.0);
            (est.true_count, a, est.estimate, cd_est)
        })
        .collect();
    rows.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)));
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "action,true_count,mcd_estimate,cd_estimate")?;
    for (true_count, a, m, c) in rows {
        writeln!(f, "{a},{true_count},{m:.6},{c:.6}")?;
    }
    Ok(())
}
