//! Seed-set selection: single-pass streaming threshold algorithms under
//! cardinality and knapsack constraints, a lazy-greedy baseline, and an
//! exhaustive oracle.
//!
//! The streaming solvers keep one candidate set per optimum-value guess on a
//! geometric threshold ladder. The running maximum `m` over singleton gains
//! (gain per weight in the knapsack case) bounds the optimum from below;
//! guesses live while they fall inside the window tied to `m`, and each new
//! guess starts from a pristine copy of the credit state. Both solvers read
//! every ground-set element exactly once; the cardinality variant returns a
//! set within (1/2 - eps) of optimal, the budgeted variant within
//! (1/3 - eps).
//!
//! The lazy-greedy baseline and the exhaustive oracle evaluate the objective
//! from scratch through [`CreditModel`]; they never touch the incremental
//! credit tables.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::credit_engine::{CreditModel, CreditTable};
use crate::error::{McdError, Result};
use crate::event_log::UserId;

/// Per-user selection costs with a total budget.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: BTreeMap<UserId, f64>,
    budget: f64,
}

impl WeightVector {
    pub fn new(weights: BTreeMap<UserId, f64>, budget: f64) -> Result<Self> {
        if !(budget.is_finite() && budget > 0.0) {
            return Err(McdError::domain(format!(
                "budget must be positive, got {budget}"
            )));
        }
        if weights.is_empty() {
            return Err(McdError::domain("weight vector must be nonempty"));
        }
        for (u, w) in &weights {
            if !(w.is_finite() && *w > 0.0) {
                return Err(McdError::domain(format!(
                    "weight of user {u} must be positive, got {w}"
                )));
            }
        }
        Ok(WeightVector { weights, budget })
    }

    /// Scales weights and budget by the reciprocal of the minimum weight, so
    /// the smallest weight becomes one. The feasible sets, and therefore the
    /// optimal solutions, are unchanged.
    pub fn normalized(&self) -> WeightVector {
        let min = self.weights.values().copied().fold(f64::INFINITY, f64::min);
        WeightVector {
            weights: self.weights.iter().map(|(&u, &w)| (u, w / min)).collect(),
            budget: self.budget / min,
        }
    }

    pub fn weight(&self, u: UserId) -> Result<f64> {
        self.weights
            .get(&u)
            .copied()
            .ok_or_else(|| McdError::domain(format!("no weight given for user {u}")))
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn users(&self) -> impl Iterator<Item = UserId> + '_ {
        self.weights.keys().copied()
    }
}

/// Selection constraint for the greedy and exhaustive solvers.
#[derive(Debug, Clone)]
pub enum Constraint {
    Cardinality(usize),
    Knapsack(WeightVector),
}

/// Final state of one threshold guess.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdStat {
    pub threshold: f64,
    pub size: usize,
    pub value: f64,
    /// Set when the guess froze on a single dominant element.
    pub big_element: bool,
}

/// A selected seed set with solver diagnostics.
#[derive(Debug, Clone)]
pub struct SeedResult {
    /// Selected users in acceptance order.
    pub seeds: Vec<UserId>,
    /// Influence ability of the selected set.
    pub value: f64,
    /// Full scans over the ground set (1 for the streaming solvers; one per
    /// selection round plus the initial scan for greedy).
    pub passes: u64,
    /// Final per-threshold diagnostics, keyed by ladder exponent.
    pub per_threshold: BTreeMap<i32, ThresholdStat>,
    pub wall_time_s: f64,
    /// How often each ground element was read (streaming) or evaluated
    /// (greedy / exhaustive).
    pub visits: BTreeMap<UserId, u32>,
}

impl SeedResult {
    fn empty() -> Self {
        SeedResult {
            seeds: Vec::new(),
            value: 0.0,
            passes: 0,
            per_threshold: BTreeMap::new(),
            wall_time_s: 0.0,
            visits: BTreeMap::new(),
        }
    }

    /// Result-file format: `value=`, `passes=`, `time_s=` header lines, then
    /// one seed user id per line in acceptance order.
    pub fn write(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "value={:.12e}", self.value)?;
        writeln!(w, "passes={}", self.passes)?;
        writeln!(w, "time_s={:.6}", self.wall_time_s)?;
        for s in &self.seeds {
            writeln!(w, "{s}")?;
        }
        Ok(())
    }

    pub fn write_path(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut f)?;
        Ok(())
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(McdError::domain(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    Ok(())
}

fn check_ground(ground: &[UserId]) -> Result<()> {
    let distinct: BTreeSet<UserId> = ground.iter().copied().collect();
    if distinct.len() != ground.len() {
        return Err(McdError::domain("ground set contains duplicate users"));
    }
    Ok(())
}

/// Exponent window [lo, hi] of base powers covering [lower, upper].
fn exponent_window(base: f64, lower: f64, upper: f64) -> (i32, i32) {
    let lo = (lower.ln() / base.ln() - 1e-9).ceil() as i32;
    let hi = (upper.ln() / base.ln() + 1e-9).floor() as i32;
    (lo, hi)
}

struct LadderThread {
    threshold: f64,
    table: CreditTable,
    weight_sum: f64,
    /// A dominant singleton that froze this guess, with its value.
    big_element: Option<(UserId, f64)>,
}

/// Drops guesses below the window and instantiates fresh ones inside it.
/// New guesses start from the pristine state: they have skipped every
/// earlier element by construction.
fn refresh_ladder(
    ladder: &mut BTreeMap<i32, LadderThread>,
    base: f64,
    lo: i32,
    hi: i32,
    pristine: &CreditTable,
) {
    ladder.retain(|&i, _| i >= lo);
    for i in lo..=hi {
        ladder.entry(i).or_insert_with(|| LadderThread {
            threshold: base.powi(i),
            table: pristine.clone(),
            weight_sum: 0.0,
            big_element: None,
        });
    }
}

fn thread_value(thread: &LadderThread) -> f64 {
    match thread.big_element {
        Some((_, v)) => v,
        None => thread.table.influence(),
    }
}

fn finish_result(
    ladder: BTreeMap<i32, LadderThread>,
    visits: BTreeMap<UserId, u32>,
    started: Instant,
) -> SeedResult {
    let mut best: Option<(i32, f64)> = None;
    let mut per_threshold = BTreeMap::new();
    for (&i, thread) in &ladder {
        let value = thread_value(thread);
        per_threshold.insert(
            i,
            ThresholdStat {
                threshold: thread.threshold,
                size: match thread.big_element {
                    Some(_) => 1,
                    None => thread.table.seeds().len(),
                },
                value,
                big_element: thread.big_element.is_some(),
            },
        );
        // strict comparison keeps the lowest exponent on ties
        if best.is_none_or(|(_, bv)| value > bv) {
            best = Some((i, value));
        }
    }
    let (seeds, value) = match best {
        Some((i, value)) => {
            let thread = &ladder[&i];
            let seeds = match thread.big_element {
                Some((u, _)) => vec![u],
                None => thread.table.seeds().to_vec(),
            };
            (seeds, value)
        }
        None => (Vec::new(), 0.0),
    };
    SeedResult {
        seeds,
        value,
        passes: 1,
        per_threshold,
        wall_time_s: started.elapsed().as_secs_f64(),
        visits,
    }
}

/// Single-pass streaming selection under a cardinality constraint.
///
/// One scan over `ground`; `m` tracks the best singleton seen so far and the
/// guess window is `[m, 2km]`. A guess accepts an element when the marginal
/// gain against its private state is at least `threshold / 2k` and it still
/// has room. Returns the best guess; the value is within `(1/2 - epsilon)`
/// of the optimum.
pub fn stream_cardinality(
    pristine: &CreditTable,
    ground: &[UserId],
    k: usize,
    epsilon: f64,
) -> Result<SeedResult> {
    if k < 1 {
        return Err(McdError::domain(format!("k must be >= 1, got {k}")));
    }
    check_epsilon(epsilon)?;
    check_ground(ground)?;
    let started = Instant::now();
    let base = 1.0 + epsilon;
    let twok = 2.0 * k as f64;
    let mut ladder: BTreeMap<i32, LadderThread> = BTreeMap::new();
    let mut m = 0.0f64;
    let mut visits: BTreeMap<UserId, u32> = BTreeMap::new();

    for &x in ground {
        *visits.entry(x).or_insert(0) += 1;
        let singleton = pristine.marginal_gain(x);
        if singleton > m {
            m = singleton;
            let (lo, hi) = exponent_window(base, m, twok * m);
            refresh_ladder(&mut ladder, base, lo, hi, pristine);
        }
        if m <= 0.0 {
            continue;
        }
        for thread in ladder.values_mut() {
            if thread.table.seeds().len() >= k {
                continue;
            }
            let bar = thread.threshold / twok;
            // submodularity: the gain cannot exceed the singleton value
            if singleton < bar {
                continue;
            }
            if thread.table.marginal_gain(x) >= bar {
                thread.table.absorb(x);
            }
        }
    }
    Ok(finish_result(ladder, visits, started))
}

/// Single-pass streaming selection under a knapsack constraint.
///
/// Weights are normalized so the minimum weight is one. `m` tracks the best
/// singleton gain per weight against the pristine state; the guess window is
/// `[m / (1+3 epsilon), 2bm]` on a `(1+3 epsilon)` ladder. A guess freezes on
/// a feasible element of weight at least half the budget whose singleton
/// gain per weight reaches `2q/3b`; otherwise it accepts elements whose
/// incremental gain reaches `2 q w / 3b` while the budget holds. The value is
/// within `(1/3 - epsilon)` of the optimum.
pub fn stream_budgeted(
    pristine: &CreditTable,
    ground: &[UserId],
    weights: &WeightVector,
    epsilon: f64,
) -> Result<SeedResult> {
    check_epsilon(epsilon)?;
    check_ground(ground)?;
    let w = weights.normalized();
    let budget = w.budget();
    let started = Instant::now();
    let base = 1.0 + 3.0 * epsilon;
    let mut ladder: BTreeMap<i32, LadderThread> = BTreeMap::new();
    let mut m = 0.0f64;
    let mut visits: BTreeMap<UserId, u32> = BTreeMap::new();

    for &x in ground {
        *visits.entry(x).or_insert(0) += 1;
        let gx = w.weight(x)?;
        if gx > budget {
            // cannot belong to any feasible set; it must not steer the
            // optimum-value guesses either
            continue;
        }
        let singleton = pristine.marginal_gain(x);
        let per_weight = singleton / gx;
        if per_weight > m {
            m = per_weight;
            let (lo, hi) = exponent_window(base, m / base, 2.0 * budget * m);
            refresh_ladder(&mut ladder, base, lo, hi, pristine);
        }
        if m <= 0.0 {
            continue;
        }
        for thread in ladder.values_mut() {
            if thread.big_element.is_some() {
                continue;
            }
            let q = thread.threshold;
            // a dominant element freezes this guess as a singleton
            if gx >= budget / 2.0 && gx <= budget && per_weight >= 2.0 * q / (3.0 * budget) {
                thread.big_element = Some((x, singleton));
                continue;
            }
            if thread.weight_sum + gx > budget {
                continue;
            }
            let bar = 2.0 * q * gx / (3.0 * budget);
            if singleton < bar {
                continue;
            }
            if thread.table.marginal_gain(x) >= bar {
                thread.table.absorb(x);
                thread.weight_sum += gx;
            }
        }
    }
    Ok(finish_result(ladder, visits, started))
}

#[derive(Debug, PartialEq)]
struct CelfEntry {
    score: f64,
    user: UserId,
    round: u64,
}

impl Eq for CelfEntry {}

impl Ord for CelfEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on score; ties pop the lowest user id first
        self.score
            .total_cmp(&other.score)
            .then(other.user.cmp(&self.user))
    }
}

impl PartialOrd for CelfEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lazy-forward greedy baseline. Marginal gains are evaluated from scratch
/// against the current seed set (gain per weight under a knapsack), and an
/// element is accepted when its refreshed gain stays on top of the queue.
pub fn celf_greedy(
    model: &CreditModel,
    ground: &[UserId],
    constraint: &Constraint,
) -> Result<SeedResult> {
    check_ground(ground)?;
    let started = Instant::now();
    let (weights, budget) = match constraint {
        Constraint::Cardinality(k) => (None, *k as f64),
        Constraint::Knapsack(w) => {
            let norm = w.normalized();
            (Some(norm.clone()), norm.budget())
        }
    };
    if budget < 1.0 || ground.is_empty() {
        let mut empty = SeedResult::empty();
        empty.wall_time_s = started.elapsed().as_secs_f64();
        return Ok(empty);
    }
    let cost = |u: UserId| -> Result<f64> {
        match &weights {
            Some(w) => w.weight(u),
            None => Ok(1.0),
        }
    };

    let mut visits: BTreeMap<UserId, u32> = BTreeMap::new();
    let mut heap = std::collections::BinaryHeap::with_capacity(ground.len());
    for &x in ground {
        let gx = cost(x)?;
        let gain = model.influence_ability(&BTreeSet::from([x]));
        *visits.entry(x).or_insert(0) += 1;
        heap.push(CelfEntry {
            score: gain / gx,
            user: x,
            round: 0,
        });
    }

    let mut seeds: Vec<UserId> = Vec::new();
    let mut seed_set: BTreeSet<UserId> = BTreeSet::new();
    let mut base_value = 0.0f64;
    let mut weight_sum = 0.0f64;
    let mut round = 0u64;
    while let Some(top) = heap.pop() {
        let gx = cost(top.user)?;
        if weight_sum + gx > budget {
            // the budget only shrinks; this element can never fit again
            continue;
        }
        if top.round == round {
            seeds.push(top.user);
            seed_set.insert(top.user);
            weight_sum += gx;
            base_value = model.influence_ability(&seed_set);
            round += 1;
        } else {
            let mut with = seed_set.clone();
            with.insert(top.user);
            let gain = model.influence_ability(&with) - base_value;
            *visits.entry(top.user).or_insert(0) += 1;
            heap.push(CelfEntry {
                score: gain / gx,
                user: top.user,
                round,
            });
        }
    }

    Ok(SeedResult {
        value: base_value,
        passes: 1 + seeds.len() as u64,
        seeds,
        per_threshold: BTreeMap::new(),
        wall_time_s: started.elapsed().as_secs_f64(),
        visits,
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Advances index combination `subset` (sorted, drawn from `0..n`) to its
/// lexicographic successor; false when exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let size = subset.len();
    let mut i = size;
    while i > 0 {
        i -= 1;
        if subset[i] < n - size + i {
            subset[i] += 1;
            for j in i + 1..size {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Exhaustive oracle: evaluates the objective from scratch on every feasible
/// subset. Refuses when the enumeration would exceed `limit` evaluations.
pub fn brute_force(
    model: &CreditModel,
    ground: &[UserId],
    constraint: &Constraint,
    limit: u64,
) -> Result<SeedResult> {
    check_ground(ground)?;
    let started = Instant::now();
    let n = ground.len();
    let mut best_set: Vec<UserId> = Vec::new();
    let mut best_value = 0.0f64;
    let mut evaluations: u64 = 0;
    let mut visits: BTreeMap<UserId, u32> = BTreeMap::new();

    match constraint {
        Constraint::Cardinality(k) => {
            let k = (*k).min(n);
            let total: u128 = (0..=k as u128).map(|j| binomial(n as u128, j)).sum();
            if total > limit as u128 {
                return Err(McdError::EnumerationLimit {
                    subsets: total,
                    limit,
                });
            }
            // lexicographic combinations of each size, sizes ascending
            for size in 0..=k {
                let mut subset: Vec<usize> = (0..size).collect();
                loop {
                    let candidate: BTreeSet<UserId> = subset.iter().map(|&i| ground[i]).collect();
                    for &u in &candidate {
                        *visits.entry(u).or_insert(0) += 1;
                    }
                    let value = model.influence_ability(&candidate);
                    evaluations += 1;
                    if value > best_value {
                        best_value = value;
                        best_set = candidate.into_iter().collect();
                    }
                    if size == 0 || !next_combination(&mut subset, n) {
                        break;
                    }
                }
            }
        }
        Constraint::Knapsack(w) => {
            if n >= 63 {
                return Err(McdError::EnumerationLimit {
                    subsets: u128::MAX,
                    limit,
                });
            }
            let total: u128 = 1u128 << n;
            if total > limit as u128 {
                return Err(McdError::EnumerationLimit {
                    subsets: total,
                    limit,
                });
            }
            let w = w.normalized();
            let budget = w.budget();
            let costs: Vec<f64> = ground.iter().map(|&u| w.weight(u)).collect::<Result<_>>()?;
            for mask in 0u64..(1u64 << n) {
                let mut cost = 0.0;
                for (i, c) in costs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        cost += c;
                    }
                }
                if cost > budget {
                    continue;
                }
                let candidate: BTreeSet<UserId> = (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ground[i])
                    .collect();
                for &u in &candidate {
                    *visits.entry(u).or_insert(0) += 1;
                }
                let value = model.influence_ability(&candidate);
                evaluations += 1;
                if value > best_value {
                    best_value = value;
                    best_set = candidate.into_iter().collect();
                }
            }
        }
    }

    Ok(SeedResult {
        seeds: best_set,
        value: best_value,
        passes: evaluations,
        per_threshold: BTreeMap::new(),
        wall_time_s: started.elapsed().as_secs_f64(),
        visits,
    })
}
