//! Credit computation: direct credits, the one-pass log scanner that builds
//! the total-credit table, the influence-ability objective, and the
//! incremental marginal-gain/absorb updates the solvers run on.
//!
//! Two evaluation routes coexist on purpose. [`CreditModel`] holds the
//! per-action DAGs with direct credits `gamma` and evaluates total credits by
//! the defining recursion (its `influence_ability` walks every action from
//! scratch). [`CreditTable`] holds the path-summed credit tensor
//! `uc[a][v][u]` plus the seed-set credit `sc[a][u]` and supports O(row)
//! marginal gains and in-place absorption of a new seed. The two routes must
//! agree to floating-point accuracy; the test suites hold them to 1e-9.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::event_log::{ActionId, EventLog, Timestamp, UserId};
use crate::model_learner::{first_performance_groups, LearnedParams};
use crate::social_graph::SocialGraph;

/// An in-edge of the per-action propagation DAG with its direct credit.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditEdge {
    pub parent: UserId,
    /// Direct credit `gamma`, normalized over the receiver's in-neighbors.
    pub gamma: f64,
    /// Effective delay of the parent's performances, in seconds.
    pub effective_delay: f64,
    /// The delay normalizer used for this pair.
    pub tau: f64,
}

/// Propagation DAG of one action, in first-performance order.
#[derive(Debug, Clone, Default)]
pub struct ActionDag {
    order: Vec<UserId>,
    first_time: BTreeMap<UserId, Timestamp>,
    parents: BTreeMap<UserId, Vec<CreditEdge>>,
}

impl ActionDag {
    /// Performers in first-performance order (ties broken by user id).
    pub fn order(&self) -> &[UserId] {
        &self.order
    }

    pub fn contains(&self, u: UserId) -> bool {
        self.first_time.contains_key(&u)
    }

    pub fn first_time(&self, u: UserId) -> Option<Timestamp> {
        self.first_time.get(&u).copied()
    }

    pub fn parents(&self, u: UserId) -> &[CreditEdge] {
        self.parents.get(&u).map_or(&[], |v| v.as_slice())
    }

    pub fn node_count(&self) -> usize {
        self.order.len()
    }

    pub fn edge_count(&self) -> usize {
        self.parents.values().map(|p| p.len()).sum()
    }
}

/// Per-neighbor direct credits for one receiver: exponential decay of each
/// effective delay over its pair normalizer, normalized to sum to one.
///
/// The inputs are `(effective_delay, tau)` pairs for every in-neighbor.
/// Weights are computed relative to the smallest delay/tau ratio so that the
/// normalization never underflows.
pub fn direct_credits(delay_tau: &[(f64, f64)]) -> Result<Vec<f64>> {
    if delay_tau.is_empty() {
        return Err(crate::error::McdError::domain(
            "direct credit requires at least one in-neighbor",
        ));
    }
    for &(d, t) in delay_tau {
        if !(t.is_finite() && t > 0.0) {
            return Err(crate::error::McdError::domain(format!(
                "tau must be positive, got {t}"
            )));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(crate::error::McdError::domain(format!(
                "effective delay must be positive, got {d}"
            )));
        }
    }
    let ratios: Vec<f64> = delay_tau.iter().map(|&(d, t)| d / t).collect();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = ratios.iter().map(|r| (-(r - min)).exp()).collect();
    let norm: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / norm).collect())
}

/// The scanned credit structure: per-action DAGs with direct credits, plus
/// the per-user distinct-action counts of the scanned log.
#[derive(Debug, Clone, Default)]
pub struct CreditModel {
    actions: BTreeMap<ActionId, ActionDag>,
    distinct_actions: BTreeMap<UserId, u32>,
    users: BTreeSet<UserId>,
    fallback_tau_uses: u64,
}

impl CreditModel {
    pub fn action_ids(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.actions.keys().copied()
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn dag(&self, a: ActionId) -> Option<&ActionDag> {
        self.actions.get(&a)
    }

    /// Performers of the scanned log.
    pub fn users(&self) -> &BTreeSet<UserId> {
        &self.users
    }

    /// Number of distinct actions `u` performs in the scanned log.
    pub fn distinct_action_count(&self, u: UserId) -> u32 {
        self.distinct_actions.get(&u).copied().unwrap_or(0)
    }

    /// How many edges fell back to the global mean delay normalizer because
    /// the pair was never observed in training.
    pub fn fallback_tau_uses(&self) -> u64 {
        self.fallback_tau_uses
    }

    /// Performers of `a` with no earlier-performing in-neighbor.
    pub fn initiators(&self, a: ActionId) -> BTreeSet<UserId> {
        self.actions.get(&a).map_or_else(BTreeSet::new, |dag| {
            dag.order
                .iter()
                .copied()
                .filter(|&u| dag.parents(u).is_empty())
                .collect()
        })
    }

    /// Total credit `sc[u]` given to `seeds` by each performer of `a`,
    /// evaluated by the defining recursion in first-performance order.
    pub fn total_credit(&self, seeds: &BTreeSet<UserId>, a: ActionId) -> BTreeMap<UserId, f64> {
        let mut credit: BTreeMap<UserId, f64> = BTreeMap::new();
        let Some(dag) = self.actions.get(&a) else {
            return credit;
        };
        for &u in &dag.order {
            let val = if seeds.contains(&u) {
                1.0
            } else {
                dag.parents(u)
                    .iter()
                    .map(|e| e.gamma * credit.get(&e.parent).copied().unwrap_or(0.0))
                    .sum()
            };
            credit.insert(u, val);
        }
        credit
    }

    /// Influence restricted to one action: the plain credit sum over its
    /// performers, a lower bound on the number of performers.
    pub fn action_influence(&self, seeds: &BTreeSet<UserId>, a: ActionId) -> f64 {
        self.total_credit(seeds, a).values().sum()
    }

    /// The influence-ability objective: credits averaged per user over the
    /// distinct actions the user performs, summed over all users.
    pub fn influence_ability(&self, seeds: &BTreeSet<UserId>) -> f64 {
        let mut total = 0.0;
        for &a in self.actions.keys() {
            for (u, c) in self.total_credit(seeds, a) {
                total += c / self.distinct_actions[&u] as f64;
            }
        }
        total
    }

    /// Builds the pristine path-summed credit table for the solvers.
    pub fn credit_table(&self) -> CreditTable {
        let mut uc: BTreeMap<ActionId, ActionTable> = BTreeMap::new();
        let mut col_support: BTreeMap<ActionId, BTreeMap<UserId, Vec<UserId>>> = BTreeMap::new();
        for (&a, dag) in &self.actions {
            // column-major accumulation in first-performance order:
            // cols[u][w] is the path credit given to w by u
            let mut cols: BTreeMap<UserId, BTreeMap<UserId, f64>> = BTreeMap::new();
            for &u in &dag.order {
                let mut col: BTreeMap<UserId, f64> = BTreeMap::new();
                for edge in dag.parents(u) {
                    *col.entry(edge.parent).or_insert(0.0) += edge.gamma;
                    if let Some(parent_col) = cols.get(&edge.parent) {
                        for (&w, &c) in parent_col {
                            *col.entry(w).or_insert(0.0) += c * edge.gamma;
                        }
                    }
                }
                cols.insert(u, col);
            }
            let mut support: BTreeMap<UserId, Vec<UserId>> = BTreeMap::new();
            let mut rows: BTreeMap<UserId, BTreeMap<UserId, f64>> = BTreeMap::new();
            for (&u, col) in &cols {
                let mut sup: Vec<UserId> = col.keys().copied().collect();
                sup.push(u); // the diagonal row
                support.insert(u, sup);
                for (&w, &c) in col {
                    rows.entry(w).or_default().insert(u, c);
                }
            }
            for &v in &dag.order {
                rows.entry(v).or_default().insert(v, 1.0);
            }
            let table = ActionTable {
                rows: rows.into_iter().map(|(v, r)| (v, Arc::new(r))).collect(),
            };
            uc.insert(a, table);
            col_support.insert(a, support);
        }

        let mut user_actions: BTreeMap<UserId, Vec<ActionId>> = BTreeMap::new();
        for (&a, dag) in &self.actions {
            for &u in &dag.order {
                user_actions.entry(u).or_default().push(a);
            }
        }
        let inv_action_count: BTreeMap<UserId, f64> = self
            .distinct_actions
            .iter()
            .map(|(&u, &c)| (u, 1.0 / c as f64))
            .collect();

        CreditTable {
            uc,
            sc: BTreeMap::new(),
            seeds: Vec::new(),
            seed_set: BTreeSet::new(),
            inv_action_count: Arc::new(inv_action_count),
            user_actions: Arc::new(user_actions),
            col_support: Arc::new(col_support),
        }
    }
}

/// Scans a log with learned parameters: per action, a chronological pass over
/// first performances assigns direct credits from each performer's
/// earlier-performing in-neighbors. Pairs missing a learned normalizer fall
/// back to the global mean (1.0 when nothing was learned) and are counted.
pub fn scan_log(graph: &SocialGraph, params: &LearnedParams, log: &EventLog) -> CreditModel {
    let fallback = params.global_mean_tau().unwrap_or(1.0);
    let actions: Vec<ActionId> = log.actions().iter().copied().collect();
    let scanned: Vec<(ActionId, ActionDag, u64)> = actions
        .par_iter()
        .map(|&a| {
            let (dag, fallbacks) = scan_action(graph, params, log, a, fallback);
            (a, dag, fallbacks)
        })
        .collect();

    let mut model = CreditModel::default();
    for (a, dag, fallbacks) in scanned {
        for &u in &dag.order {
            *model.distinct_actions.entry(u).or_insert(0) += 1;
            model.users.insert(u);
        }
        model.fallback_tau_uses += fallbacks;
        model.actions.insert(a, dag);
    }
    model
}

fn scan_action(
    graph: &SocialGraph,
    params: &LearnedParams,
    log: &EventLog,
    action: ActionId,
    fallback_tau: f64,
) -> (ActionDag, u64) {
    let times = log.user_times(action);
    let mut dag = ActionDag::default();
    let mut fallbacks = 0u64;
    let mut current: BTreeSet<UserId> = BTreeSet::new();
    for (t_first, members) in first_performance_groups(&times) {
        for &u in &members {
            dag.order.push(u);
            dag.first_time.insert(u, t_first);
            let mut delay_tau: Vec<(f64, f64)> = Vec::new();
            let mut parent_ids: Vec<UserId> = Vec::new();
            for v in graph.in_neighbors(u) {
                if !current.contains(&v) {
                    continue;
                }
                let inv_sum: f64 = times[&v]
                    .iter()
                    .take_while(|&&t| t < t_first)
                    .map(|&t| 1.0 / (t_first - t) as f64)
                    .sum();
                debug_assert!(inv_sum > 0.0);
                let effective = 1.0 / inv_sum;
                let tau = match params.tau(v, u) {
                    Some(t) => t,
                    None => {
                        fallbacks += 1;
                        fallback_tau
                    }
                };
                delay_tau.push((effective, tau));
                parent_ids.push(v);
            }
            if !parent_ids.is_empty() {
                let gammas = direct_credits(&delay_tau).expect("validated inputs");
                let edges: Vec<CreditEdge> = parent_ids
                    .into_iter()
                    .zip(delay_tau.iter().zip(gammas))
                    .map(|(parent, (&(d, t), gamma))| CreditEdge {
                        parent,
                        gamma,
                        effective_delay: d,
                        tau: t,
                    })
                    .collect();
                dag.parents.insert(u, edges);
            }
        }
        current.extend(members);
    }
    (dag, fallbacks)
}

type Row = BTreeMap<UserId, f64>;

#[derive(Debug, Clone, Default)]
struct ActionTable {
    rows: BTreeMap<UserId, Arc<Row>>,
}

/// Path-summed credit state for one solver thread: the residual credit
/// tensor `uc[a][v][u]`, the seed-set credit `sc[a][u]`, and the seeds
/// absorbed so far. Cloning is cheap: rows are copy-on-write and only the
/// rows an `absorb` touches are duplicated.
#[derive(Debug, Clone)]
pub struct CreditTable {
    uc: BTreeMap<ActionId, ActionTable>,
    sc: BTreeMap<ActionId, BTreeMap<UserId, f64>>,
    seeds: Vec<UserId>,
    seed_set: BTreeSet<UserId>,
    inv_action_count: Arc<BTreeMap<UserId, f64>>,
    user_actions: Arc<BTreeMap<UserId, Vec<ActionId>>>,
    col_support: Arc<BTreeMap<ActionId, BTreeMap<UserId, Vec<UserId>>>>,
}

impl CreditTable {
    pub fn seeds(&self) -> &[UserId] {
        &self.seeds
    }

    pub fn is_seed(&self, x: UserId) -> bool {
        self.seed_set.contains(&x)
    }

    /// Residual path credit given to `v` by `u` on action `a`.
    pub fn uc(&self, a: ActionId, v: UserId, u: UserId) -> f64 {
        self.uc
            .get(&a)
            .and_then(|t| t.rows.get(&v))
            .and_then(|r| r.get(&u))
            .copied()
            .unwrap_or(0.0)
    }

    /// Credit given to the current seed set by `u` on action `a`.
    pub fn sc(&self, a: ActionId, u: UserId) -> f64 {
        self.sc
            .get(&a)
            .and_then(|m| m.get(&u))
            .copied()
            .unwrap_or(0.0)
    }

    /// The influence ability of the current seed set, read off the seed-set
    /// credit state.
    pub fn influence(&self) -> f64 {
        self.sc
            .values()
            .map(|m| {
                m.iter()
                    .map(|(u, s)| s * self.inv_action_count[u])
                    .sum::<f64>()
            })
            .sum()
    }

    /// Exact gain of absorbing `x` into the current seed set: per action,
    /// the residual credit row of `x` weighted by the receivers'
    /// inverse action counts, scaled by the credit `x` has not yet
    /// surrendered to the seeds.
    pub fn marginal_gain(&self, x: UserId) -> f64 {
        assert!(
            !self.seed_set.contains(&x),
            "marginal gain queried for user {x} already in the seed set"
        );
        let Some(acts) = self.user_actions.get(&x) else {
            return 0.0;
        };
        let mut total = 0.0;
        for a in acts {
            let keep = 1.0 - self.sc(*a, x);
            if keep <= 0.0 {
                continue;
            }
            let Some(row) = self.uc.get(a).and_then(|t| t.rows.get(&x)) else {
                continue;
            };
            let gain: f64 = row.iter().map(|(u, g)| g * self.inv_action_count[u]).sum();
            total += keep * gain;
        }
        total
    }

    /// Absorbs `x` into the seed set: seed-set credits grow by `x`'s residual
    /// row, and every path through `x` is removed from the residual tensor.
    pub fn absorb(&mut self, x: UserId) {
        assert!(
            self.seed_set.insert(x),
            "user {x} absorbed into the seed set twice"
        );
        self.seeds.push(x);
        let acts: Vec<ActionId> = self.user_actions.get(&x).cloned().unwrap_or_default();
        for a in acts {
            let table = self.uc.get_mut(&a).expect("action table exists");
            let Some(row_x) = table.rows.get(&x).cloned() else {
                continue;
            };
            let sc_a = self.sc.entry(a).or_default();
            let keep = 1.0 - sc_a.get(&x).copied().unwrap_or(0.0);
            if keep > 0.0 {
                for (&u, &g) in row_x.iter() {
                    if g != 0.0 {
                        let e = sc_a.entry(u).or_insert(0.0);
                        *e += g * keep;
                    }
                }
            }
            // remove paths through x; the column support of x never grows,
            // so the pristine support list covers every affected row
            let support = self.col_support[&a]
                .get(&x)
                .map(|v| v.as_slice())
                .unwrap_or(&[]);
            for &v in support {
                let Some(row_v) = table.rows.get_mut(&v) else {
                    continue;
                };
                let through = row_v.get(&x).copied().unwrap_or(0.0);
                if through == 0.0 {
                    continue;
                }
                let row_v = Arc::make_mut(row_v);
                for (&u, &g) in row_x.iter() {
                    if g == 0.0 {
                        continue;
                    }
                    let e = row_v.entry(u).or_insert(0.0);
                    // exact arithmetic keeps this nonnegative; clamp the dust
                    *e = (*e - through * g).max(0.0);
                }
            }
        }
    }

    /// Dump lines `a v u credit` for inspection, skipping zeros.
    pub fn dump(&self, mut w: impl Write) -> std::io::Result<()> {
        for (a, table) in &self.uc {
            for (v, row) in &table.rows {
                for (u, g) in row.iter() {
                    if *g > 0.0 {
                        writeln!(w, "{a} {v} {u} {g:.12e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Scans several actions in parallel and merges deterministically; exposed
/// so callers can size the worker pool via rayon.
pub fn scan_log_with_table(
    graph: &SocialGraph,
    params: &LearnedParams,
    log: &EventLog,
) -> (CreditModel, CreditTable) {
    let model = scan_log(graph, params, log);
    let table = model.credit_table();
    (model, table)
}
