//! Influence maximization over multi-action event logs.
//!
//! The pipeline has three stages. A model learner reads a training log over a
//! directed follow graph and learns per-edge average delays and per-pair
//! performance counts. A log scanner replays a test log once, assigning
//! exponentially decayed, neighbor-normalized credits along each action's
//! propagation DAG, and materializes a sparse total-credit table. Problem
//! solvers then select seed sets that maximize the credit-based influence
//! ability, either with single-pass streaming threshold algorithms (under
//! cardinality or knapsack constraints) or with lazy-greedy and brute-force
//! baselines. A synthetic generator, a first-occurrence baseline, and an
//! independent-cascade Monte Carlo estimator round out the evaluation harness.
//!
//! See the crate examples for runnable walkthroughs of each capability, and
//! the `mcd` binary for the file-based command-line pipeline.
//!
//! ```
//! use std::collections::BTreeSet;
//! use mcd::{learn, scan_log, stream_cardinality, EventLog, SocialGraph};
//!
//! let graph = SocialGraph::parse("1 2\n1 3\n2 3".as_bytes())?;
//! let log = EventLog::parse("1 5 0\n1 5 2\n2 5 3\n3 5 6".as_bytes())?;
//!
//! let params = learn(&graph, &log);
//! let model = scan_log(&graph, &params, &log);
//! let table = model.credit_table();
//!
//! let ground: Vec<u64> = graph.users().iter().copied().collect();
//! let result = stream_cardinality(&table, &ground, 1, 0.1)?;
//! assert_eq!(result.seeds, vec![1]);
//! assert!((result.value - 3.0).abs() < 1e-9);
//!
//! // the incremental value matches a from-scratch evaluation
//! let seeds: BTreeSet<u64> = result.seeds.iter().copied().collect();
//! assert!((model.influence_ability(&seeds) - result.value).abs() < 1e-9);
//! # Ok::<(), mcd::McdError>(())
//! ```

pub mod baselines;
pub mod cli;
pub mod credit_engine;
pub mod error;
pub mod event_log;
pub mod model_learner;
pub mod social_graph;
pub mod solvers;
pub mod synth;

pub use credit_engine::{scan_log, CreditModel, CreditTable};
pub use error::{McdError, Result};
pub use event_log::{ActionId, EventLog, EventRecord, Timestamp, UserId};
pub use model_learner::{effective_delay, learn, DelaySet, LearnedParams};
pub use social_graph::{propagation_graph, PropagationGraph, SocialGraph};
pub use solvers::{
    brute_force, celf_greedy, stream_budgeted, stream_cardinality, Constraint, SeedResult,
    WeightVector,
};
pub use synth::{generate, GenConfig};
