//! Property checks over randomized inputs. Each returns a description of the
//! first failure, so the same checks back both the invariant tests and the
//! acceptance report.

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use uape_core::baseline::{edge_draws, run_ic_topic, IcConfig};
use uape_core::eval::roc_auc;
use uape_core::opinion::{
    degroot_update, interest_probability, persistence_update, Message, ReferenceOpinions,
};
use uape_core::{
    run_uape, run_uape_from, Attitude, DirectedGraph, EngineState, NodeId, SimulationConfig,
    TopicId, TopicSelection,
};

use super::cases::{attitudes_of, config_of, graph_of, random_case, SMALL_LIMITS};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn known_attitude() -> impl Strategy<Value = Attitude> {
    prop::sample::select(Attitude::KNOWN.to_vec())
}

fn any_attitude() -> impl Strategy<Value = Attitude> {
    prop::sample::select(vec![
        Attitude::Unknown,
        Attitude::Positive,
        Attitude::Neutral,
        Attitude::Negative,
    ])
}

fn message() -> impl Strategy<Value = Message> {
    (known_attitude(), 0.0..=1.0f64).prop_map(|(sender_attitude, influence)| Message {
        sender_attitude,
        influence,
    })
}

/// Every attitude stays on the lattice, and no aware node ever loses its attitude.
pub fn lattice_and_awareness(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let input = random_case(seed, SMALL_LIMITS);
        let initial = attitudes_of(&input);
        let out = run_uape(&graph_of(&input), &initial, &config_of(&input))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mut state = initial.clone();
        for e in &out.trace.events {
            prop_assert_eq!(state.get(e.node, e.topic), e.old);
            prop_assert!(e.new.is_known(), "event {:?} forgets an attitude", e);
            prop_assert!(Attitude::from_value(e.new.value()) == Some(e.new));
            state.set(e.node, e.topic, e.new);
        }
        prop_assert_eq!(&state, &out.state.attitudes);
        for t in 0..input.z {
            let t = TopicId(t);
            for v in initial.known_nodes(t) {
                prop_assert!(state.get(v, t).is_known());
            }
            let mut last = initial.known_nodes(t).len();
            for s in out.trace.summaries.iter().filter(|s| s.topic == t) {
                let aware = s.counts.known();
                prop_assert!(
                    aware >= last,
                    "topic {} shrank from {} to {}",
                    t,
                    last,
                    aware
                );
                prop_assert_eq!(s.counts.total(), input.n);
                last = aware;
            }
        }
        Ok(())
    })
}

/// Stepping the engine one round at a time keeps the partitions coherent at
/// every boundary and matches an uninterrupted run.
pub fn partition_coherence(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let mut input = random_case(seed, SMALL_LIMITS);
        input.bernoulli = false;
        let graph = graph_of(&input);
        let mut config = config_of(&input);
        let topic = TopicId(input.topic.unwrap_or(0));
        config.topic = TopicSelection::Single(topic);
        let full = run_uape(&graph, &attitudes_of(&input), &config)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;

        let step = SimulationConfig {
            rounds: 1,
            ..config.clone()
        };
        let mut state = EngineState::new(attitudes_of(&input), config.initial_persistence);
        state
            .check_invariants()
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        for _ in 0..config.rounds {
            let before = state.active(topic).len();
            state = run_uape_from(&graph, state, &step)
                .map_err(|e| TestCaseError::fail(e.to_string()))?
                .state;
            state
                .check_invariants()
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(state.active(topic).len() >= before);
        }
        prop_assert_eq!(&state, &full.state);
        Ok(())
    })
}

/// Interest over the active topics sums to one.
pub fn interest_normalisation(cases: u32) -> Result<(), String> {
    let refs = prop::collection::vec(prop::option::weighted(0.8, 0.0..=1.0f64), 1..6);
    check(cases, (0.0..=1.0f64, refs), |(own, values)| {
        let refs = ReferenceOpinions { values };
        let active = refs.active_topics();
        prop_assume!(!active.is_empty());
        let mut total = 0.0;
        for &t in &active {
            let p = interest_probability(own, t, &refs)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!((0.0..=1.0).contains(&p));
            total += p;
        }
        prop_assert!((total - 1.0).abs() <= 1e-9, "interest sums to {}", total);
        Ok(())
    })
}

/// Persistence stays in `[0, 1]`; an agreeing message never lowers it, and a
/// lone disagreeing message with positive influence always does.
pub fn persistence_bounds(cases: u32) -> Result<(), String> {
    let history = prop::collection::vec(message(), 0..12);
    check(
        cases,
        (0.0..=1.0f64, history, any_attitude(), message()),
        |(previous, mut log, current, incoming)| {
            let before = persistence_update(previous, &log, current);
            prop_assert!((0.0..=1.0).contains(&before));

            if incoming.sender_attitude == current {
                let lone = persistence_update(previous, &[incoming], current);
                prop_assert!(
                    lone >= previous,
                    "lone agreement lowered {} to {}",
                    previous,
                    lone
                );

                let agreeing: Vec<Message> = log
                    .iter()
                    .map(|m| Message {
                        sender_attitude: current,
                        ..*m
                    })
                    .chain(std::iter::once(incoming))
                    .collect();
                let after = persistence_update(previous, &agreeing, current);
                prop_assert!(
                    after >= previous,
                    "agreeing history lowered {} to {}",
                    previous,
                    after
                );

                let mut silent = log.clone();
                silent.push(Message {
                    influence: 0.0,
                    ..incoming
                });
                let mut heard = log.clone();
                heard.push(incoming);
                let without = persistence_update(previous, &silent, current);
                let with = persistence_update(previous, &heard, current);
                prop_assert!(with >= without, "agreement lowered {} to {}", without, with);
            } else if incoming.influence > 0.0 {
                let lone = persistence_update(previous, &[incoming], current);
                prop_assert!(
                    lone < previous || (previous == 0.0 && lone == 0.0),
                    "lone disagreement left {} at {}",
                    previous,
                    lone
                );
            }

            log.push(incoming);
            let after = persistence_update(previous, &log, current);
            prop_assert!((0.0..=1.0).contains(&after));
            Ok(())
        },
    )
}

/// Averaging stays within the interval spanned by its inputs.
pub fn degroot_containment(cases: u32) -> Result<(), String> {
    let received = prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0]), 0..40);
    check(cases, (0.0..=1.0f64, received), |(own, received)| {
        let out = degroot_update(own, &received);
        let lo = received.iter().copied().fold(own, f64::min);
        let hi = received.iter().copied().fold(own, f64::max);
        prop_assert!(lo <= out && out <= hi, "{} outside [{}, {}]", out, lo, hi);
        Ok(())
    })
}

fn scored_labels() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    prop::collection::vec((0u32..40, any::<bool>()), 2..60)
        .prop_filter("labels need both classes", |v| {
            v.iter().any(|x| x.1) && v.iter().any(|x| !x.1)
        })
        .prop_map(|v| v.into_iter().map(|(s, l)| (s as f64 / 40.0, l)).unzip())
}

/// AUC ignores strictly increasing rescaling of the scores.
pub fn auc_monotone_invariance(cases: u32) -> Result<(), String> {
    check(
        cases,
        (scored_labels(), 0usize..3),
        |((scores, labels), which)| {
            let transform = |x: f64| match which {
                0 => x * x * x + 2.0 * x,
                1 => (3.0 * x).exp(),
                _ => 10.0 * x - 7.0,
            };
            let moved: Vec<f64> = scores.iter().map(|&x| transform(x)).collect();
            let a = roc_auc(&scores, &labels).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let b = roc_auc(&moved, &labels).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
            Ok(())
        },
    )
}

/// Swapping the classes maps AUC to its complement.
pub fn auc_label_flip(cases: u32) -> Result<(), String> {
    check(cases, scored_labels(), |(scores, labels)| {
        let flipped: Vec<bool> = labels.iter().map(|l| !l).collect();
        let a = roc_auc(&scores, &labels).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let b = roc_auc(&scores, &flipped).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!((a + b - 1.0).abs() <= 1e-12, "{} + {} != 1", a, b);
        Ok(())
    })
}

/// In-degrees sum to the edge count, and edge lists survive a write/read cycle.
pub fn graph_round_trip(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let input = random_case(seed, SMALL_LIMITS);
        let g = graph_of(&input);
        prop_assert_eq!(g.in_degrees().iter().sum::<usize>(), g.edge_count());
        let out_sum: usize = g.nodes().map(|v| g.out_degree(v)).sum();
        prop_assert_eq!(out_sum, g.edge_count());
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = uape_core::load_edge_list(buf.as_slice(), 1.0)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back.node_count(), g.node_count());
        prop_assert_eq!(back.labels(), g.labels());
        prop_assert_eq!(back.edges(), g.edges());
        Ok(())
    })
}

/// IC never retries an edge, and under shared draws a larger probability
/// activates a superset of nodes.
pub fn ic_one_shot_and_monotone(cases: u32) -> Result<(), String> {
    check(
        cases,
        (any::<u64>(), 0.0..=1.0f64, 0.0..=1.0f64),
        |(seed, p1, p2)| {
            use rand::SeedableRng;
            let input = random_case(seed, SMALL_LIMITS);
            let g: DirectedGraph = graph_of(&input);
            let initial = attitudes_of(&input);
            let t = TopicId(0);
            let seeds: Vec<(NodeId, Attitude)> = initial
                .known_nodes(t)
                .into_iter()
                .map(|v| (v, initial.get(v, t)))
                .collect();
            let draws = edge_draws(&g, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            let run = |p: f64| {
                let cfg = IcConfig {
                    probability: Some(p),
                    rounds: input.rounds,
                    rng_seed: 0,
                };
                run_ic_topic(&g, &seeds, t, &cfg, &draws)
                    .map_err(|e| TestCaseError::fail(e.to_string()))
            };
            let (a, b) = (run(lo)?, run(hi)?);
            for out in [&a, &b] {
                let mut slots = out.attempts.clone();
                slots.sort_unstable();
                let before = slots.len();
                slots.dedup();
                prop_assert_eq!(before, slots.len(), "an edge was attempted twice");
            }
            for v in 0..g.node_count() {
                if a.attitudes[v].is_known() {
                    prop_assert!(b.attitudes[v].is_known(), "node {} lost at p={}", v, hi);
                }
            }
            Ok(())
        },
    )
}
