//! Solver-level properties on random instances: lazy greedy must match a
//! plain greedy, greedy must meet its classical bound, the threshold ladder
//! must respect its window, and absorption must commute.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mcd::baselines::ground_set;
use mcd::credit_engine::CreditModel;
use mcd::event_log::UserId;
use mcd::solvers::{
    brute_force, celf_greedy, stream_budgeted, stream_cardinality, Constraint, WeightVector,
};

mod common;
use common::{build_model, oracle_sigma, random_instance};

const TOL: f64 = 1e-9;

/// Plain greedy with the same tie-breaking as the lazy version: highest
/// fresh gain wins, lowest user id on ties.
fn naive_greedy(model: &CreditModel, ground: &[UserId], k: usize) -> (Vec<UserId>, f64) {
    let mut seeds: Vec<UserId> = Vec::new();
    let mut seed_set: BTreeSet<UserId> = BTreeSet::new();
    let mut base = 0.0;
    for _ in 0..k {
        let mut best: Option<(f64, UserId)> = None;
        for &x in ground {
            if seed_set.contains(&x) {
                continue;
            }
            let mut with = seed_set.clone();
            with.insert(x);
            let gain = model.influence_ability(&with) - base;
            let better = match best {
                None => true,
                Some((bg, bu)) => gain > bg || (gain == bg && x < bu),
            };
            if better {
                best = Some((gain, x));
            }
        }
        match best {
            Some((gain, x)) => {
                seeds.push(x);
                seed_set.insert(x);
                base += gain;
            }
            None => break,
        }
    }
    (seeds, model.influence_ability(&seed_set))
}

#[test]
fn celf_matches_naive_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9001);
    for _ in 0..30 {
        let (graph, log) = random_instance(&mut rng, 5, 12, 3, 0.3);
        let model = build_model(&graph, &log);
        let ground = ground_set(&graph, &model);
        let k = rng.gen_range(1..=4usize);
        let (naive_seeds, naive_value) = naive_greedy(&model, &ground, k);
        let celf = celf_greedy(&model, &ground, &Constraint::Cardinality(k)).unwrap();
        assert_eq!(celf.seeds, naive_seeds);
        assert!((celf.value - naive_value).abs() <= TOL);
        assert!(celf.passes >= k.min(celf.seeds.len()) as u64);
    }
}

#[test]
fn celf_meets_classical_greedy_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9002);
    for _ in 0..25 {
        let (graph, log) = random_instance(&mut rng, 5, 12, 3, 0.3);
        let model = build_model(&graph, &log);
        let ground = ground_set(&graph, &model);
        let k = rng.gen_range(1..=3usize);
        let opt = brute_force(&model, &ground, &Constraint::Cardinality(k), 1 << 20)
            .unwrap()
            .value;
        let celf = celf_greedy(&model, &ground, &Constraint::Cardinality(k)).unwrap();
        assert!(
            celf.value >= (1.0 - 1.0 / std::f64::consts::E) * opt - TOL,
            "greedy value {} below (1 - 1/e) x OPT = {}",
            celf.value,
            (1.0 - 1.0 / std::f64::consts::E) * opt
        );
    }
}

#[test]
fn ladder_window_and_witness_rung() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9003);
    let eps = 0.1;
    let base: f64 = 1.0 + eps;
    for _ in 0..30 {
        let (graph, log) = random_instance(&mut rng, 5, 12, 3, 0.3);
        let model = build_model(&graph, &log);
        let table = model.credit_table();
        let ground = ground_set(&graph, &model);
        let k = rng.gen_range(1..=3usize);
        let result = stream_cardinality(&table, &ground, k, eps).unwrap();
        let m = ground
            .iter()
            .map(|&x| oracle_sigma(&model, &BTreeSet::from([x])))
            .fold(0.0f64, f64::max);
        if m <= 0.0 {
            continue;
        }
        let upper = 2.0 * k as f64 * m;
        // every retained guess sits inside the final window
        for stat in result.per_threshold.values() {
            assert!(stat.threshold >= m * (1.0 - 1e-9));
            assert!(stat.threshold <= upper * (1.0 + 1e-9));
        }
        // the witness rung for the optimum lies inside the window
        let opt = brute_force(&model, &ground, &Constraint::Cardinality(k), 1 << 20)
            .unwrap()
            .value;
        if opt > 0.0 && opt <= upper {
            let witness = base.powi((opt.ln() / base.ln()).floor() as i32);
            assert!(witness >= opt / base * (1.0 - 1e-9) && witness <= opt * (1.0 + 1e-9));
            if witness >= m {
                let key = result
                    .per_threshold
                    .values()
                    .any(|s| (s.threshold - witness).abs() <= 1e-6 * witness);
                assert!(key, "witness rung {witness} missing from the final ladder");
            }
        }
    }
}

#[test]
fn unit_weights_reduce_knapsack_to_cardinality_feasibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9004);
    for _ in 0..20 {
        let (graph, log) = random_instance(&mut rng, 5, 10, 3, 0.3);
        let model = build_model(&graph, &log);
        let table = model.credit_table();
        let ground = ground_set(&graph, &model);
        let k = rng.gen_range(1..=3usize);
        let weights =
            WeightVector::new(ground.iter().map(|&u| (u, 1.0)).collect(), k as f64).unwrap();
        let opt = brute_force(&model, &ground, &Constraint::Cardinality(k), 1 << 20)
            .unwrap()
            .value;
        let opt_knap = brute_force(
            &model,
            &ground,
            &Constraint::Knapsack(weights.clone()),
            1 << 20,
        )
        .unwrap()
        .value;
        // identical feasible sets, identical optimum
        assert!((opt - opt_knap).abs() <= TOL);
        let result = stream_budgeted(&table, &ground, &weights, 0.05).unwrap();
        assert!(result.value >= (1.0 / 3.0 - 0.05) * opt - TOL);
        assert!(result.seeds.len() <= k);
    }
}

#[test]
fn absorb_order_independent_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9005);
    for _ in 0..40 {
        let (graph, log) = random_instance(&mut rng, 4, 10, 3, 0.4);
        let model = build_model(&graph, &log);
        let users: Vec<UserId> = model.users().iter().copied().collect();
        if users.len() < 2 {
            continue;
        }
        let x = users[rng.gen_range(0..users.len())];
        let y = loop {
            let y = users[rng.gen_range(0..users.len())];
            if y != x {
                break y;
            }
        };
        let mut xy = model.credit_table();
        xy.absorb(x);
        xy.absorb(y);
        let mut yx = model.credit_table();
        yx.absorb(y);
        yx.absorb(x);
        for a in model.action_ids() {
            for &u in model.dag(a).unwrap().order() {
                assert!((xy.sc(a, u) - yx.sc(a, u)).abs() <= TOL);
            }
        }
        assert!((xy.influence() - yx.influence()).abs() <= TOL);
    }
}

#[test]
fn shuffled_ground_order_keeps_the_guarantee() {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9006);
    for _ in 0..15 {
        let (graph, log) = random_instance(&mut rng, 5, 11, 3, 0.3);
        let model = build_model(&graph, &log);
        let table = model.credit_table();
        let mut ground = ground_set(&graph, &model);
        ground.shuffle(&mut rng);
        let k = 2;
        let opt = brute_force(&model, &ground, &Constraint::Cardinality(k), 1 << 20)
            .unwrap()
            .value;
        let result = stream_cardinality(&table, &ground, k, 0.1).unwrap();
        assert!(result.value >= (0.5 - 0.1) * opt - TOL);
        assert!(result.visits.values().all(|&v| v == 1));
    }
}

/// The returned value always matches a from-scratch evaluation of the seeds.
#[test]
fn reported_values_match_from_scratch_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9007);
    for _ in 0..20 {
        let (graph, log) = random_instance(&mut rng, 5, 12, 4, 0.3);
        let model = build_model(&graph, &log);
        let table = model.credit_table();
        let ground = ground_set(&graph, &model);
        let weights = WeightVector::new(
            ground
                .iter()
                .map(|&u| (u, rng.gen_range(1..=3) as f64))
                .collect(),
            rng.gen_range(2..=5) as f64,
        )
        .unwrap();
        for result in [
            stream_cardinality(&table, &ground, 3, 0.1).unwrap(),
            stream_budgeted(&table, &ground, &weights, 0.05).unwrap(),
            celf_greedy(&model, &ground, &Constraint::Cardinality(3)).unwrap(),
        ] {
            let seeds: BTreeSet<UserId> = result.seeds.iter().copied().collect();
            assert!((oracle_sigma(&model, &seeds) - result.value).abs() <= TOL);
        }
    }
}

#[test]
fn weight_map_must_cover_the_ground_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9008);
    let (graph, log) = random_instance(&mut rng, 5, 8, 2, 0.2);
    let model = build_model(&graph, &log);
    let table = model.credit_table();
    let ground = ground_set(&graph, &model);
    let mut weights: BTreeMap<UserId, f64> = ground.iter().map(|&u| (u, 1.0)).collect();
    weights.remove(&ground[0]);
    let wv = WeightVector::new(weights, 3.0).unwrap();
    assert!(stream_budgeted(&table, &ground, &wv, 0.05).is_err());
}
