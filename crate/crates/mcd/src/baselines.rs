//! Evaluation harness: the first-occurrence credit baseline, an
//! independent-cascade Monte Carlo spread estimator, and the per-action
//! estimation-accuracy report.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::credit_engine::{scan_log, CreditModel};
use crate::error::{McdError, Result};
use crate::event_log::{ActionId, EventLog, UserId};
use crate::model_learner::{learn, LearnedParams};
use crate::social_graph::SocialGraph;
use crate::solvers::{stream_budgeted, stream_cardinality, Constraint, SeedResult};

/// The RNG family used for every Monte Carlo run in this crate.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Debug, Clone, PartialEq)]
pub struct IcConfig {
    pub edge_probability: f64,
    pub simulations: u32,
    pub rng_seed: u64,
}

impl IcConfig {
    pub fn new(edge_probability: f64, simulations: u32, rng_seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&edge_probability) {
            return Err(McdError::config(format!(
                "edge probability must lie in [0, 1], got {edge_probability}"
            )));
        }
        if simulations == 0 {
            return Err(McdError::config("simulation count must be at least 1"));
        }
        Ok(IcConfig {
            edge_probability,
            simulations,
            rng_seed,
        })
    }
}

fn cascade_size(
    graph: &SocialGraph,
    seeds: &BTreeSet<UserId>,
    p: f64,
    rng: &mut ChaCha8Rng,
) -> u64 {
    let mut active: BTreeSet<UserId> = seeds.clone();
    let mut frontier: VecDeque<UserId> = seeds.iter().copied().collect();
    while let Some(v) = frontier.pop_front() {
        for w in graph.out_neighbors(v) {
            if !active.contains(&w) && rng.gen::<f64>() < p {
                active.insert(w);
                frontier.push_back(w);
            }
        }
    }
    active.len() as u64
}

/// Expected activation count of `seeds` under the independent-cascade model:
/// every live edge fires once with the configured probability. Replicas run
/// on independent counter-based substreams, so the result is deterministic
/// for a fixed seed regardless of the worker-pool size.
pub fn ic_spread(graph: &SocialGraph, seeds: &BTreeSet<UserId>, cfg: &IcConfig) -> Result<f64> {
    for &s in seeds {
        if !graph.contains(s) {
            return Err(McdError::domain(format!(
                "seed user {s} is not in the graph"
            )));
        }
    }
    if seeds.is_empty() {
        return Ok(0.0);
    }
    let total: u64 = (0..cfg.simulations)
        .into_par_iter()
        .map(|replica| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(replica as u64 + 1);
            cascade_size(graph, seeds, cfg.edge_probability, &mut rng)
        })
        .sum();
    Ok(total as f64 / cfg.simulations as f64)
}

/// Which log the learn/scan pipeline consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelVariant {
    /// The full multi-action log.
    MultiAction,
    /// Logs restricted to each pair's first occurrence; the conventional
    /// single-occurrence special case.
    FirstOccurrence,
}

/// One full learn -> scan -> solve run.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub params: LearnedParams,
    pub model: CreditModel,
    pub result: SeedResult,
}

/// Runs the pipeline with the streaming solver. The first-occurrence variant
/// runs the identical code on deduplicated logs; on a repeat-free log the two
/// variants are exactly equal.
pub fn run_pipeline(
    graph: &SocialGraph,
    train: &EventLog,
    test: &EventLog,
    variant: ModelVariant,
    constraint: &Constraint,
    epsilon: f64,
) -> Result<PipelineRun> {
    let (train, test) = match variant {
        ModelVariant::MultiAction => (train.clone(), test.clone()),
        ModelVariant::FirstOccurrence => (
            train.dedupe_first_occurrence(),
            test.dedupe_first_occurrence(),
        ),
    };
    let params = learn(graph, &train);
    let model = scan_log(graph, &params, &test);
    let table = model.credit_table();
    let ground = ground_set(graph, &model);
    let result = match constraint {
        Constraint::Cardinality(k) => stream_cardinality(&table, &ground, *k, epsilon)?,
        Constraint::Knapsack(w) => stream_budgeted(&table, &ground, w, epsilon)?,
    };
    Ok(PipelineRun {
        params,
        model,
        result,
    })
}

/// First-occurrence baseline: the identical pipeline on deduplicated logs.
pub fn cd_baseline(
    graph: &SocialGraph,
    train: &EventLog,
    test: &EventLog,
    constraint: &Constraint,
    epsilon: f64,
) -> Result<PipelineRun> {
    run_pipeline(
        graph,
        train,
        test,
        ModelVariant::FirstOccurrence,
        constraint,
        epsilon,
    )
}

/// All potential seeds: graph users plus any log-only performers, ascending.
pub fn ground_set(graph: &SocialGraph, model: &CreditModel) -> Vec<UserId> {
    let mut ground: BTreeSet<UserId> = graph.users().clone();
    ground.extend(model.users().iter().copied());
    ground.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionEstimate {
    /// Distinct performers of the action in the evaluated log.
    pub true_count: usize,
    /// Influence restricted to the action for the solver-selected seeds.
    pub estimate: f64,
    /// Influence restricted to the action for the action's initiator set;
    /// equals `true_count` because every credit chain ends at an initiator.
    pub initiator_estimate: f64,
}

#[derive(Debug, Clone, Default)]
pub struct EvalReport {
    pub per_action: BTreeMap<ActionId, ActionEstimate>,
    pub seed_values: BTreeMap<String, f64>,
    pub runtimes: BTreeMap<String, f64>,
    pub rng_algorithm: String,
    pub seeds: Vec<UserId>,
}

/// Selects a fixed-size seed set with the streaming solver and reports, per
/// action, the estimated influence against the true performer count.
pub fn estimate_accuracy(
    graph: &SocialGraph,
    params: &LearnedParams,
    test: &EventLog,
    seed_size: usize,
    epsilon: f64,
) -> Result<EvalReport> {
    if seed_size < 1 {
        return Err(McdError::domain(format!(
            "seed size must be >= 1, got {seed_size}"
        )));
    }
    let scan_started = std::time::Instant::now();
    let model = scan_log(graph, params, test);
    let table = model.credit_table();
    let scan_s = scan_started.elapsed().as_secs_f64();
    let ground = ground_set(graph, &model);
    let result = stream_cardinality(&table, &ground, seed_size, epsilon)?;
    let seed_set: BTreeSet<UserId> = result.seeds.iter().copied().collect();

    let mut report = EvalReport {
        rng_algorithm: RNG_ALGORITHM.to_string(),
        ..EvalReport::default()
    };
    for a in model.action_ids() {
        let dag = model.dag(a).expect("scanned action");
        let initiators = model.initiators(a);
        report.per_action.insert(
            a,
            ActionEstimate {
                true_count: dag.node_count(),
                estimate: model.action_influence(&seed_set, a),
                initiator_estimate: model.action_influence(&initiators, a),
            },
        );
    }
    report
        .seed_values
        .insert("stream".to_string(), result.value);
    report.runtimes.insert("scan_s".to_string(), scan_s);
    report
        .runtimes
        .insert("solve_s".to_string(), result.wall_time_s);
    report.seeds = result.seeds;
    Ok(report)
}
