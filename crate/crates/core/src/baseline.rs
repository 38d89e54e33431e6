//! Independent Cascade baseline.
//!
//! Every edge gets one uniform draw per topic up front, in adjacency order, so
//! runs at different activation probabilities share their randomness: an edge
//! that transmits at `p` also transmits at any `p' > p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{SimulationConfig, TopicSelection};
use crate::error::{Error, Result};
use crate::graph::{Attitude, AttitudeState, DirectedGraph, NodeId, TopicId};
use crate::trace::{AttitudeCounts, CascadeTrace, RoundSummary, TraceEvent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcConfig {
    /// Global activation probability; `None` uses each edge's weight.
    pub probability: Option<f64>,
    pub rounds: usize,
    pub rng_seed: u64,
}

impl IcConfig {
    pub fn from_simulation(config: &SimulationConfig) -> Self {
        IcConfig {
            probability: config.ic_probability,
            rounds: config.rounds,
            rng_seed: config.rng_seed,
        }
    }
}

/// Result of a single-topic IC run.
#[derive(Debug, Clone)]
pub struct IcTopicOutcome {
    /// Nodes first activated in each round; entry 0 holds the seeds.
    pub activated_per_round: Vec<Vec<NodeId>>,
    /// Final attitudes on the topic, one per node.
    pub attitudes: Vec<Attitude>,
    /// Adjacency slots of every activation attempt, in order.
    pub attempts: Vec<usize>,
    pub events: Vec<TraceEvent>,
    pub summaries: Vec<RoundSummary>,
}

/// Draws one uniform per edge slot in adjacency order.
pub fn edge_draws<R: Rng>(graph: &DirectedGraph, rng: &mut R) -> Vec<f64> {
    (0..graph.edge_count())
        .map(|_| rng.random::<f64>())
        .collect()
}

/// Runs IC on one topic with fixed per-edge draws. Activated nodes copy the
/// sender's attitude.
pub fn run_ic_topic(
    graph: &DirectedGraph,
    seeds: &[(NodeId, Attitude)],
    topic: TopicId,
    config: &IcConfig,
    draws: &[f64],
) -> Result<IcTopicOutcome> {
    let n = graph.node_count();
    if let Some(p) = config.probability {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Config(format!(
                "activation probability {p} outside [0, 1]"
            )));
        }
    }
    let mut attitudes = vec![Attitude::Unknown; n];
    let mut frontier = Vec::new();
    for &(v, a) in seeds {
        if v.0 >= n {
            return Err(Error::NodeOutOfRange {
                node: v.0,
                node_count: n,
            });
        }
        if !a.is_known() {
            return Err(Error::Config(format!("seed {v} has no attitude")));
        }
        if !attitudes[v.0].is_known() {
            frontier.push(v);
        }
        attitudes[v.0] = a;
    }
    frontier.sort_unstable();

    let mut counts = AttitudeCounts {
        unknown: n,
        ..Default::default()
    };
    for &v in &frontier {
        counts.remove(Attitude::Unknown);
        counts.add(attitudes[v.0]);
    }

    // Adjacency slot of the first out-edge of each node.
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for v in graph.nodes() {
        offsets.push(offsets[v.0] + graph.out_degree(v));
    }

    let mut reached = vec![false; n];
    let mut adjacent = 0usize;
    let mut out = IcTopicOutcome {
        activated_per_round: vec![frontier.clone()],
        attitudes: Vec::new(),
        attempts: Vec::new(),
        events: Vec::new(),
        summaries: Vec::new(),
    };
    for round in 1..=config.rounds {
        let mut next = Vec::new();
        for &v in &frontier {
            for (k, (q, weight)) in graph.out_iter(v).enumerate() {
                if attitudes[q.0].is_known() {
                    continue;
                }
                let slot = offsets[v.0] + k;
                out.attempts.push(slot);
                if !reached[q.0] {
                    reached[q.0] = true;
                    adjacent += 1;
                }
                let p = config.probability.unwrap_or(weight);
                if draws[slot] < p {
                    let a = attitudes[v.0];
                    attitudes[q.0] = a;
                    counts.remove(Attitude::Unknown);
                    counts.add(a);
                    next.push(q);
                    out.events.push(TraceEvent {
                        round,
                        node: q,
                        topic,
                        old: Attitude::Unknown,
                        new: a,
                        sender: v,
                        p,
                        a: f64::NAN,
                    });
                }
            }
        }
        next.sort_unstable();
        out.summaries.push(RoundSummary {
            round,
            topic,
            counts,
            adjacent,
        });
        out.activated_per_round.push(next.clone());
        frontier = next;
    }
    out.attitudes = attitudes;
    Ok(out)
}

/// Final attitudes and trace of an IC run over the selected topics.
#[derive(Debug, Clone)]
pub struct IcOutcome {
    pub attitudes: AttitudeState,
    pub trace: CascadeTrace,
    pub per_topic: Vec<IcTopicOutcome>,
}

/// Runs IC on each selected topic, seeded by the nodes aware of it.
pub fn run_ic(
    graph: &DirectedGraph,
    initial: &AttitudeState,
    topic: TopicSelection,
    config: &IcConfig,
) -> Result<IcOutcome> {
    if initial.node_count() != graph.node_count() {
        return Err(Error::Config(
            "attitude table does not match the graph".into(),
        ));
    }
    let topics = topic.resolve(initial.topic_count())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut attitudes = initial.clone();
    let mut trace = CascadeTrace::new(initial);
    let mut per_topic = Vec::with_capacity(topics.len());
    for t in topics {
        let draws = edge_draws(graph, &mut rng);
        let seeds: Vec<_> = initial
            .known_nodes(t)
            .into_iter()
            .map(|v| (v, initial.get(v, t)))
            .collect();
        let outcome = run_ic_topic(graph, &seeds, t, config, &draws)?;
        for (v, &a) in outcome.attitudes.iter().enumerate() {
            attitudes.set(NodeId(v), t, a);
        }
        trace.events.extend_from_slice(&outcome.events);
        trace.summaries.extend_from_slice(&outcome.summaries);
        per_topic.push(outcome);
    }
    Ok(IcOutcome {
        attitudes,
        trace,
        per_topic,
    })
}
