//! Event-log handling: parsing, repetition statistics, action-level
//! train/test splitting, and the first-occurrence restriction.
//!
//! Run with: `cargo run --example event_log_workflow`

use mcd::event_log::EventLog;
use mcd::model_learner::{effective_delay, DelaySet};
use mcd::synth::{generate, GenConfig};

fn main() {
    // parse a small log by hand: user, action, timestamp per line
    let text = "\
# user action time
7 0 10
7 0 25
7 0 31
8 0 40
9 1 5
7 1 12
";
    let log = EventLog::parse(text.as_bytes()).unwrap();
    println!(
        "parsed {} records, {} users, {} actions",
        log.len(),
        log.users().len(),
        log.actions().len()
    );
    for &a in log.actions() {
        println!(
            "  action {a}: repetition rate {:.3}",
            log.repetition_rate(a).unwrap()
        );
    }

    // user 7 performed action 0 at t = 10, 25, 31; a follower acting at
    // t = 40 sees three delays whose effective value is below the smallest
    let delays = DelaySet::new([30.0, 15.0, 9.0]).unwrap();
    println!(
        "\neffective delay of {{30, 15, 9}} seconds: {:.3}s",
        effective_delay(&delays)
    );

    // first-occurrence restriction keeps the earliest record per pair
    let first = log.dedupe_first_occurrence();
    println!(
        "first-occurrence view: {} records (was {})",
        first.len(),
        log.len()
    );

    // action-level split on a bigger synthetic log
    let (_, big) = generate(&GenConfig {
        users: 150,
        edges: 600,
        actions: 20,
        rng_seed: 2,
        ..GenConfig::default()
    })
    .unwrap();
    let (train, test) = big.split_by_action(0.2, 11).unwrap();
    println!(
        "\nsynthetic log with {} actions split into {} train / {} test (disjoint)",
        big.actions().len(),
        train.actions().len(),
        test.actions().len()
    );
    let mean_rate: f64 = big
        .actions()
        .iter()
        .map(|&a| big.repetition_rate(a).unwrap())
        .sum::<f64>()
        / big.actions().len() as f64;
    println!("mean repetition rate of the synthetic log: {mean_rate:.3}");
}
