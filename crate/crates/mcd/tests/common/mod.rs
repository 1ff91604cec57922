//! Shared helpers for the integration suites: random instances and the
//! from-scratch credit oracle, kept independent of the incremental tables.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use mcd::credit_engine::{scan_log, CreditModel};
use mcd::event_log::{EventLog, EventRecord, UserId};
use mcd::model_learner::learn;
use mcd::social_graph::SocialGraph;

/// Random multi-action instance over a random directed graph. Users are
/// `0..n`; each performs each action with fixed chance and may repeat.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    min_users: u64,
    max_users: u64,
    max_actions: u64,
    repeat_chance: f64,
) -> (SocialGraph, EventLog) {
    let n = rng.gen_range(min_users..=max_users);
    let edge_prob = rng.gen_range(0.15..0.5);
    let mut graph = SocialGraph::new();
    for u in 0..n {
        graph.add_node(u);
    }
    for v in 0..n {
        for u in 0..n {
            if v != u && rng.gen_bool(edge_prob) {
                graph.add_edge(v, u).unwrap();
            }
        }
    }
    let actions = rng.gen_range(1..=max_actions);
    let mut records = Vec::new();
    for a in 0..actions {
        for u in 0..n {
            if rng.gen_bool(0.7) {
                let first = rng.gen_range(0..60);
                records.push(EventRecord {
                    user: u,
                    action: a,
                    time: first,
                });
                let mut t = first;
                while rng.gen_bool(repeat_chance) {
                    t += rng.gen_range(1..20);
                    records.push(EventRecord {
                        user: u,
                        action: a,
                        time: t,
                    });
                }
            }
        }
    }
    (graph, EventLog::from_records(records))
}

pub fn build_model(graph: &SocialGraph, log: &EventLog) -> CreditModel {
    let params = learn(graph, log);
    scan_log(graph, &params, log)
}

/// Independent oracle: total credit given to `seeds` by each performer,
/// evaluated by the defining recursion over the scanned DAG in
/// first-performance order.
pub fn oracle_total_credit(
    model: &CreditModel,
    seeds: &BTreeSet<UserId>,
    action: u64,
) -> BTreeMap<UserId, f64> {
    let mut credit = BTreeMap::new();
    let Some(dag) = model.dag(action) else {
        return credit;
    };
    for &u in dag.order() {
        let value = if seeds.contains(&u) {
            1.0
        } else {
            dag.parents(u)
                .iter()
                .map(|e| e.gamma * credit.get(&e.parent).copied().unwrap_or(0.0))
                .sum()
        };
        credit.insert(u, value);
    }
    credit
}

/// Independent oracle for the influence ability of a seed set.
pub fn oracle_sigma(model: &CreditModel, seeds: &BTreeSet<UserId>) -> f64 {
    let mut total = 0.0;
    for a in model.action_ids() {
        for (u, c) in oracle_total_credit(model, seeds, a) {
            total += c / model.distinct_action_count(u) as f64;
        }
    }
    total
}
