//! The static directed follow graph and per-action propagation graphs.
//!
//! An edge `(v, u)` means `v` can influence `u` (u follows v). For an action
//! `a`, the propagation graph keeps only the performers of `a` and the edges
//! whose source first performed `a` strictly before the target did; it is a
//! DAG ordered by first-performance time.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use crate::error::{McdError, Result};
use crate::event_log::{ActionId, EventLog, Timestamp, UserId};

#[derive(Debug, Clone, Default)]
pub struct SocialGraph {
    nodes: BTreeSet<UserId>,
    in_nbrs: BTreeMap<UserId, BTreeSet<UserId>>,
    out_nbrs: BTreeMap<UserId, BTreeSet<UserId>>,
    edge_count: usize,
}

impl SocialGraph {
    pub fn new() -> Self {
        SocialGraph::default()
    }

    /// Adds edge `(v, u)`: v influences u. Duplicates are ignored.
    pub fn add_edge(&mut self, v: UserId, u: UserId) -> Result<()> {
        if v == u {
            return Err(McdError::domain(format!("self-loop edge {v} -> {u}")));
        }
        self.nodes.insert(v);
        self.nodes.insert(u);
        if self.out_nbrs.entry(v).or_default().insert(u) {
            self.in_nbrs.entry(u).or_default().insert(v);
            self.edge_count += 1;
        }
        Ok(())
    }

    /// Registers a node without edges.
    pub fn add_node(&mut self, u: UserId) {
        self.nodes.insert(u);
    }

    /// Parses the edge-list format: one `v u` pair per line, `#` comments
    /// and blank lines ignored. Self-loops are rejected.
    pub fn parse(reader: impl BufRead) -> Result<Self> {
        let mut graph = SocialGraph::new();
        for (idx, line) in reader.lines().enumerate() {
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
                    format!("expected 2 fields `v u`, got {}", fields.len()),
                ));
            }
            let v: UserId = fields[0]
                .parse()
                .map_err(|_| McdError::parse(lineno, format!("invalid user id `{}`", fields[0])))?;
            let u: UserId = fields[1]
                .parse()
                .map_err(|_| McdError::parse(lineno, format!("invalid user id `{}`", fields[1])))?;
            if v == u {
                return Err(McdError::parse(
                    lineno,
                    format!("self-loop edge {v} -> {u}"),
                ));
            }
            graph.add_edge(v, u)?;
        }
        Ok(graph)
    }

    pub fn read_path(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        SocialGraph::parse(std::io::BufReader::new(file))
    }

    pub fn write(&self, mut w: impl std::io::Write) -> std::io::Result<()> {
        for (v, outs) in &self.out_nbrs {
            for u in outs {
                writeln!(w, "{v} {u}")?;
            }
        }
        Ok(())
    }

    pub fn write_path(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write(&mut f)?;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn users(&self) -> &BTreeSet<UserId> {
        &self.nodes
    }

    pub fn contains(&self, u: UserId) -> bool {
        self.nodes.contains(&u)
    }

    pub fn has_edge(&self, v: UserId, u: UserId) -> bool {
        self.out_nbrs.get(&v).is_some_and(|s| s.contains(&u))
    }

    /// Users that can influence `u`.
    pub fn in_neighbors(&self, u: UserId) -> impl Iterator<Item = UserId> + '_ {
        self.in_nbrs.get(&u).into_iter().flatten().copied()
    }

    /// Users that `v` can influence.
    pub fn out_neighbors(&self, v: UserId) -> impl Iterator<Item = UserId> + '_ {
        self.out_nbrs.get(&v).into_iter().flatten().copied()
    }

    pub fn out_degree(&self, v: UserId) -> usize {
        self.out_nbrs.get(&v).map_or(0, |s| s.len())
    }
}

/// Per-action propagation graph: performers of the action, with the follow
/// edges whose source first performed it strictly earlier than the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropagationGraph {
    pub action: ActionId,
    pub nodes: BTreeSet<UserId>,
    pub edges: BTreeSet<(UserId, UserId)>,
}

impl PropagationGraph {
    pub fn in_degree(&self, u: UserId) -> usize {
        self.edges.iter().filter(|(_, t)| *t == u).count()
    }

    /// Nodes with no earlier-performing in-neighbor.
    pub fn initiators(&self) -> BTreeSet<UserId> {
        let targets: BTreeSet<UserId> = self.edges.iter().map(|&(_, u)| u).collect();
        self.nodes.difference(&targets).copied().collect()
    }
}

/// Derives the propagation graph of `action` from the follow graph and a log.
/// Ties in first-performance time produce no edge.
pub fn propagation_graph(
    graph: &SocialGraph,
    log: &EventLog,
    action: ActionId,
) -> Result<PropagationGraph> {
    let times = log.user_times(action);
    if times.is_empty() {
        return Err(McdError::domain(format!(
            "action {action} does not appear in the log"
        )));
    }
    let first: BTreeMap<UserId, Timestamp> = times.iter().map(|(&u, ts)| (u, ts[0])).collect();
    let nodes: BTreeSet<UserId> = first.keys().copied().collect();
    let mut edges = BTreeSet::new();
    for (&u, &tu) in &first {
        for v in graph.in_neighbors(u) {
            if let Some(&tv) = first.get(&v) {
                if tv < tu {
                    edges.insert((v, u));
                }
            }
        }
    }
    Ok(PropagationGraph {
        action,
        nodes,
        edges,
    })
}
