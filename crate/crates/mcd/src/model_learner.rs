//! Learning per-edge average delays and per-pair performance counts from a
//! training log, and the effective-delay aggregate.
//!
//! For an edge `(v, u)` active on action `a`, the delay multiset collects
//! `t1(u,a) - t` over every performance time `t` of `v` strictly before `u`'s
//! first performance. The effective delay is the reciprocal of the sum of
//! reciprocal delays (parallel-resistance form): it is at most the smallest
//! delay and strictly decreases whenever another performance is added. The
//! per-edge normalizer `tau` is the plain arithmetic average of those delays,
//! first within each action, then across the actions `v` propagated to `u`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{McdError, Result};
use crate::event_log::{ActionId, EventLog, UserId};
use crate::social_graph::SocialGraph;

/// Nonempty multiset of strictly positive delays in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaySet(Vec<f64>);

impl DelaySet {
    pub fn new(delays: impl IntoIterator<Item = f64>) -> Result<Self> {
        let delays: Vec<f64> = delays.into_iter().collect();
        if delays.is_empty() {
            return Err(McdError::domain("delay set must be nonempty"));
        }
        if let Some(bad) = delays.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(McdError::domain(format!(
                "delays must be strictly positive, got {bad}"
            )));
        }
        Ok(DelaySet(delays))
    }

    pub fn delays(&self) -> &[f64] {
        &self.0
    }
}

/// Reciprocal of the sum of reciprocal delays.
pub fn effective_delay(delays: &DelaySet) -> f64 {
    reciprocal_sum_delay(&delays.0)
}

fn reciprocal_sum_delay(delays: &[f64]) -> f64 {
    1.0 / delays.iter().map(|d| 1.0 / d).sum::<f64>()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LearnedParams {
    /// (influencer v, follower u) -> average delay in seconds. Present exactly
    /// for pairs with at least one propagated action.
    tau: BTreeMap<(UserId, UserId), f64>,
    /// (user, action) -> performance count in the training log.
    action_counts: BTreeMap<(UserId, ActionId), u32>,
    /// (v, u) -> number of actions v propagated to u.
    propagated_actions: BTreeMap<(UserId, UserId), u32>,
}

impl LearnedParams {
    pub fn tau(&self, v: UserId, u: UserId) -> Option<f64> {
        self.tau.get(&(v, u)).copied()
    }

    pub fn tau_entries(&self) -> impl Iterator<Item = (UserId, UserId, f64)> + '_ {
        self.tau.iter().map(|(&(v, u), &t)| (v, u, t))
    }

    pub fn tau_len(&self) -> usize {
        self.tau.len()
    }

    pub fn action_count(&self, u: UserId, a: ActionId) -> u32 {
        self.action_counts.get(&(u, a)).copied().unwrap_or(0)
    }

    pub fn propagated_action_count(&self, v: UserId, u: UserId) -> u32 {
        self.propagated_actions.get(&(v, u)).copied().unwrap_or(0)
    }

    /// Mean of all learned tau values; the fallback for pairs never observed
    /// in training. None when nothing was learned.
    pub fn global_mean_tau(&self) -> Option<f64> {
        if self.tau.is_empty() {
            return None;
        }
        Some(self.tau.values().sum::<f64>() / self.tau.len() as f64)
    }

    /// Text format: a `tau` section of `v u value` lines followed by a
    /// `counts` section of `u a count` lines.
    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "tau")?;
        for (&(v, u), &t) in &self.tau {
            writeln!(w, "{v} {u} {t:.12e}")?;
        }
        writeln!(w, "counts")?;
        for (&(u, a), &c) in &self.action_counts {
            writeln!(w, "{u} {a} {c}")?;
        }
        Ok(())
    }

    pub fn write_path(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut f)?;
        Ok(())
    }

    pub fn parse(reader: impl BufRead) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Tau,
            Counts,
        }
        let mut section = Section::None;
        let mut params = LearnedParams::default();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match trimmed {
                "tau" => {
                    section = Section::Tau;
                    continue;
                }
                "counts" => {
                    section = Section::Counts;
                    continue;
                }
                _ => {}
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(McdError::parse(
                    lineno,
                    format!("expected 3 fields, got {}", fields.len()),
                ));
            }
            let parse_id = |s: &str| -> Result<u64> {
                s.parse()
                    .map_err(|_| McdError::parse(lineno, format!("invalid id `{s}`")))
            };
            match section {
                Section::Tau => {
                    let v = parse_id(fields[0])?;
                    let u = parse_id(fields[1])?;
                    let t: f64 = fields[2].parse().map_err(|_| {
                        McdError::parse(lineno, format!("invalid tau value `{}`", fields[2]))
                    })?;
                    if !(t.is_finite() && t > 0.0) {
                        return Err(McdError::parse(lineno, format!("nonpositive tau `{t}`")));
                    }
                    params.tau.insert((v, u), t);
                }
                Section::Counts => {
                    let u = parse_id(fields[0])?;
                    let a = parse_id(fields[1])?;
                    let c: u32 = fields[2].parse().map_err(|_| {
                        McdError::parse(lineno, format!("invalid count `{}`", fields[2]))
                    })?;
                    params.action_counts.insert((u, a), c);
                }
                Section::None => {
                    return Err(McdError::parse(
                        lineno,
                        "data line before a `tau`/`counts` section header",
                    ));
                }
            }
        }
        Ok(params)
    }

    pub fn read_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        LearnedParams::parse(std::io::BufReader::new(file))
    }
}

/// Per-action partial learned by one scan: (v,u) -> mean delay for this action.
struct ActionPartial {
    mean_delays: BTreeMap<(UserId, UserId), f64>,
    counts: BTreeMap<(UserId, ActionId), u32>,
}

/// Groups the performers of one action by first-performance time. Within a
/// group the order is by user id; group members never parent each other.
pub(crate) fn first_performance_groups(
    times: &BTreeMap<UserId, Vec<i64>>,
) -> Vec<(i64, Vec<UserId>)> {
    let mut firsts: Vec<(i64, UserId)> = times.iter().map(|(&u, ts)| (ts[0], u)).collect();
    firsts.sort_unstable();
    let mut groups: Vec<(i64, Vec<UserId>)> = Vec::new();
    for (t, u) in firsts {
        match groups.last_mut() {
            Some((gt, members)) if *gt == t => members.push(u),
            _ => groups.push((t, vec![u])),
        }
    }
    groups
}

fn learn_action(graph: &SocialGraph, log: &EventLog, action: ActionId) -> ActionPartial {
    let times = log.user_times(action);
    let mut partial = ActionPartial {
        mean_delays: BTreeMap::new(),
        counts: BTreeMap::new(),
    };
    for (&u, ts) in &times {
        partial.counts.insert((u, action), ts.len() as u32);
    }
    let mut current: BTreeSet<UserId> = BTreeSet::new();
    for (t_first, members) in first_performance_groups(&times) {
        for &u in &members {
            for v in graph.in_neighbors(u) {
                if !current.contains(&v) {
                    continue;
                }
                // every performance of v strictly before u's first one
                let delays: Vec<f64> = times[&v]
                    .iter()
                    .take_while(|&&t| t < t_first)
                    .map(|&t| (t_first - t) as f64)
                    .collect();
                debug_assert!(!delays.is_empty());
                let mean = delays.iter().sum::<f64>() / delays.len() as f64;
                partial.mean_delays.insert((v, u), mean);
            }
        }
        current.extend(members);
    }
    partial
}

/// Learns average delays and performance counts from a training log.
/// Parent discovery uses first performances only; delay sets and counts use
/// the full log including repeats.
pub fn learn(graph: &SocialGraph, train: &EventLog) -> LearnedParams {
    let actions: Vec<ActionId> = train.actions().iter().copied().collect();
    let partials: Vec<ActionPartial> = actions
        .par_iter()
        .map(|&a| learn_action(graph, train, a))
        .collect();

    // sequential merge in action order keeps floating-point sums deterministic
    let mut sums: BTreeMap<(UserId, UserId), f64> = BTreeMap::new();
    let mut params = LearnedParams::default();
    for partial in partials {
        for ((v, u), mean) in partial.mean_delays {
            *sums.entry((v, u)).or_insert(0.0) += mean;
            *params.propagated_actions.entry((v, u)).or_insert(0) += 1;
        }
        for (key, c) in partial.counts {
            match params.action_counts.entry(key) {
                Entry::Vacant(e) => {
                    e.insert(c);
                }
                Entry::Occupied(mut e) => *e.get_mut() += c,
            }
        }
    }
    for ((v, u), sum) in sums {
        let n = params.propagated_actions[&(v, u)] as f64;
        params.tau.insert((v, u), sum / n);
    }
    params
}
