//! Multi-action event logs: parsing, ordering, splitting, and the
//! repetition-rate statistic.
//!
//! A log is a set of `(user, action, time)` records. The same `(user, action)`
//! pair may appear many times; exact duplicate triples are collapsed to one
//! record on ingestion. Records are kept sorted by `(action, time, user)` so
//! that every action occupies one contiguous, chronologically ordered slice.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{McdError, Result};

pub type UserId = u64;
pub type ActionId = u64;
/// Seconds since an arbitrary epoch. Always nonnegative.
pub type Timestamp = i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventRecord {
    pub user: UserId,
    pub action: ActionId,
    pub time: Timestamp,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    records: Vec<EventRecord>,
    users: BTreeSet<UserId>,
    actions: BTreeSet<ActionId>,
}

impl EventLog {
    /// Builds a log from arbitrary records: sorts by `(action, time, user)`
    /// and collapses exact duplicate triples.
    pub fn from_records(records: impl IntoIterator<Item = EventRecord>) -> Self {
        let mut records: Vec<EventRecord> = records.into_iter().collect();
        records.sort_by_key(|r| (r.action, r.time, r.user));
        records.dedup();
        let mut users = BTreeSet::new();
        let mut actions = BTreeSet::new();
        for r in &records {
            users.insert(r.user);
            actions.insert(r.action);
        }
        EventLog {
            records,
            users,
            actions,
        }
    }

    /// Parses the plain-text log format: one record per line, three
    /// whitespace-separated nonnegative integers `user action time`.
    /// `#`-prefixed lines and blank lines are ignored.
    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut records = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(McdError::parse(
                    lineno,
                    format!("expected 3 fields `user action time`, got {}", fields.len()),
                ));
            }
            let user: UserId = fields[0]
                .parse()
                .map_err(|_| McdError::parse(lineno, format!("invalid user id `{}`", fields[0])))?;
            let action: ActionId = fields[1].parse().map_err(|_| {
                McdError::parse(lineno, format!("invalid action id `{}`", fields[1]))
            })?;
            let time: Timestamp = fields[2].parse().map_err(|_| {
                McdError::parse(lineno, format!("invalid timestamp `{}`", fields[2]))
            })?;
            if time < 0 {
                return Err(McdError::parse(
                    lineno,
                    format!("negative timestamp `{}`", fields[2]),
                ));
            }
            records.push(EventRecord { user, action, time });
        }
        Ok(EventLog::from_records(records))
    }

    pub fn read_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        EventLog::parse(std::io::BufReader::new(file))
    }

    /// Writes the module-standard text format (sorted, deduplicated).
    pub fn write(&self, mut w: impl Write) -> std::io::Result<()> {
        for r in &self.records {
            writeln!(w, "{} {} {}", r.user, r.action, r.time)?;
        }
        Ok(())
    }

    pub fn write_path(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut f)?;
        Ok(())
    }

    pub fn records(&self) -> &[EventRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn users(&self) -> &BTreeSet<UserId> {
        &self.users
    }

    pub fn actions(&self) -> &BTreeSet<ActionId> {
        &self.actions
    }

    /// Contiguous slice of records for one action, in `(time, user)` order.
    pub fn action_records(&self, action: ActionId) -> &[EventRecord] {
        let lo = self.records.partition_point(|r| r.action < action);
        let hi = self.records.partition_point(|r| r.action <= action);
        &self.records[lo..hi]
    }

    /// Number of times `user` performed `action` (the per-pair performance count).
    pub fn performance_count(&self, user: UserId, action: ActionId) -> u32 {
        self.action_records(action)
            .iter()
            .filter(|r| r.user == user)
            .count() as u32
    }

    /// Per-user sorted timestamp lists for one action.
    pub fn user_times(&self, action: ActionId) -> BTreeMap<UserId, Vec<Timestamp>> {
        let mut map: BTreeMap<UserId, Vec<Timestamp>> = BTreeMap::new();
        for r in self.action_records(action) {
            map.entry(r.user).or_default().push(r.time);
        }
        // records come sorted by (time, user), so each list is already sorted
        map
    }

    /// Fraction of performances of `action` that are not first performances:
    /// `1 - distinct_performers / total_performances`.
    pub fn repetition_rate(&self, action: ActionId) -> Result<f64> {
        let slice = self.action_records(action);
        if slice.is_empty() {
            return Err(McdError::domain(format!(
                "action {action} does not appear in the log"
            )));
        }
        let total = slice.len() as f64;
        let distinct = slice.iter().map(|r| r.user).collect::<BTreeSet<_>>().len() as f64;
        Ok(1.0 - distinct / total)
    }

    /// Partitions the log's actions into disjoint train/test logs.
    /// `round(test_fraction * |actions|)` actions go to the test side, at
    /// least one on each side. Deterministic for a fixed seed.
    pub fn split_by_action(&self, test_fraction: f64, seed: u64) -> Result<(EventLog, EventLog)> {
        if !(0.0 < test_fraction && test_fraction < 1.0) {
            return Err(McdError::domain(format!(
                "test fraction must lie in (0,1), got {test_fraction}"
            )));
        }
        let n = self.actions.len();
        if n < 2 {
            return Err(McdError::domain(format!(
                "cannot split a log with {n} distinct action(s); need at least 2"
            )));
        }
        let mut action_list: Vec<ActionId> = self.actions.iter().copied().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        action_list.shuffle(&mut rng);
        let n_test = ((test_fraction * n as f64).round() as usize).clamp(1, n - 1);
        let test_actions: BTreeSet<ActionId> = action_list[..n_test].iter().copied().collect();
        let (test, train): (Vec<_>, Vec<_>) = self
            .records
            .iter()
            .copied()
            .partition(|r| test_actions.contains(&r.action));
        Ok((EventLog::from_records(train), EventLog::from_records(test)))
    }

    /// Keeps only the earliest record of every `(user, action)` pair. This is
    /// the single-occurrence restriction the first-occurrence baseline runs on.
    pub fn dedupe_first_occurrence(&self) -> EventLog {
        let mut seen: BTreeSet<(ActionId, UserId)> = BTreeSet::new();
        let mut kept = Vec::new();
        // records are sorted by (action, time, user): the first record seen
        // for a pair is its earliest
        for r in &self.records {
            if seen.insert((r.action, r.user)) {
                kept.push(*r);
            }
        }
        EventLog::from_records(kept)
    }
}
