//! Random scenario generation and conversion into engine inputs.

use std::collections::BTreeMap;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uape_core::{
    Attitude, AttitudeState, DirectedGraph, EdgeGate, IndicatorOperator, NodeId, SimulationConfig,
    TopicId, TopicSelection,
};

use super::reference::{RefInput, UNKNOWN};

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_topics: usize,
    pub max_rounds: usize,
    pub allow_gate: bool,
}

pub const ORACLE_LIMITS: Limits = Limits {
    max_nodes: 50,
    max_edges: 200,
    max_topics: 3,
    max_rounds: 10,
    allow_gate: true,
};

pub const SMALL_LIMITS: Limits = Limits {
    max_nodes: 20,
    max_edges: 60,
    max_topics: 3,
    max_rounds: 6,
    allow_gate: true,
};

pub fn random_case(seed: u64, limits: Limits) -> RefInput {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=limits.max_nodes);
    let pairs = n * (n - 1);
    let m = rng.random_range(0..=limits.max_edges.min(pairs));
    let z = rng.random_range(1..=limits.max_topics);
    let bernoulli = limits.allow_gate && rng.random_bool(0.3);
    let mut edges = Vec::with_capacity(m);
    for k in index::sample(&mut rng, pairs.max(1), m).into_iter() {
        let s = k / (n - 1);
        let mut t = k % (n - 1);
        if t >= s {
            t += 1;
        }
        let w = if bernoulli {
            rng.random_range(0.05..=1.0)
        } else {
            1.0
        };
        edges.push((s, t, w));
    }
    let known_share = rng.random_range(0.05..0.6);
    let mut attitudes = BTreeMap::new();
    for v in 0..n {
        for t in 0..z {
            if rng.random_bool(known_share) {
                attitudes.insert((v, t), [0.0, 0.5, 1.0][rng.random_range(0..3)]);
            }
        }
    }
    RefInput {
        n,
        z,
        edges,
        attitudes,
        rounds: rng.random_range(1..=limits.max_rounds),
        topic: if rng.random_bool(0.3) {
            None
        } else {
            Some(rng.random_range(0..z))
        },
        initial_persistence: if rng.random_bool(0.2) {
            0.5
        } else {
            rng.random_range(0.0..=1.0)
        },
        abs_diff: rng.random_bool(0.3),
        bernoulli,
        rng_seed: rng.random(),
    }
}

pub fn graph_of(input: &RefInput) -> DirectedGraph {
    DirectedGraph::from_edges(input.n, &input.edges).expect("generated graph is valid")
}

pub fn attitudes_of(input: &RefInput) -> AttitudeState {
    let mut a = AttitudeState::new(input.n, input.z);
    for (&(v, t), &x) in &input.attitudes {
        if x != UNKNOWN {
            a.set(
                NodeId(v),
                TopicId(t),
                Attitude::from_value(x).expect("lattice value"),
            );
        }
    }
    a
}

pub fn config_of(input: &RefInput) -> SimulationConfig {
    SimulationConfig {
        rounds: input.rounds,
        topic: match input.topic {
            Some(t) => TopicSelection::Single(TopicId(t)),
            None => TopicSelection::All,
        },
        rng_seed: input.rng_seed,
        indicator_mode: if input.abs_diff {
            IndicatorOperator::AbsDiff
        } else {
            IndicatorOperator::XorIndicator
        },
        initial_persistence: input.initial_persistence,
        edge_gate: if input.bernoulli {
            EdgeGate::Bernoulli
        } else {
            EdgeGate::Off
        },
        ..SimulationConfig::default()
    }
}

/// Runs engine and reference on one case and reports the first divergence.
pub fn compare_with_reference(seed: u64, limits: Limits) -> Result<usize, String> {
    let input = random_case(seed, limits);
    let expected = super::reference::run_reference(&input);
    let outcome = uape_core::run_uape(&graph_of(&input), &attitudes_of(&input), &config_of(&input))
        .map_err(|e| format!("seed {seed}: engine error {e}"))?;
    let events = &outcome.trace.events;
    if events.len() != expected.events.len() {
        return Err(format!(
            "seed {seed}: engine logged {} events, reference {}",
            events.len(),
            expected.events.len()
        ));
    }
    for (i, (e, r)) in events.iter().zip(&expected.events).enumerate() {
        let got = (
            e.round,
            e.node.0,
            e.topic.0,
            e.old.value(),
            e.new.value(),
            e.sender.0,
            e.p,
            e.a,
        );
        let want = (r.round, r.node, r.topic, r.old, r.new, r.sender, r.p, r.a);
        if got != want {
            return Err(format!(
                "seed {seed}: event {i} differs: engine {got:?}, reference {want:?}"
            ));
        }
    }
    for (&(v, t), &x) in &expected.attitudes {
        let got = outcome.state.attitudes.get(NodeId(v), TopicId(t)).value();
        if got != x {
            return Err(format!(
                "seed {seed}: final attitude of ({v},{t}) is {got}, reference {x}"
            ));
        }
    }
    Ok(events.len())
}
