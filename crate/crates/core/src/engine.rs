//! The round-based attitude dissemination engine.
//!
//! Each round snapshots the aware set of the running topic, then lets every
//! aware node (ascending id) message each of its followers (ascending id).
//! A message updates the recipient's persistence and may move its attitude;
//! changes apply immediately. Nodes that become aware start sending in the
//! next round. Opinions are averaged once per round after all messages.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{EdgeGate, SimulationConfig};
use crate::error::{Error, Result};
use crate::graph::{Attitude, AttitudeState, DirectedGraph, NodeId, TopicId};
use crate::opinion::{
    degroot_update, influence_probability, Message, OpinionState, PersistenceState,
};
use crate::trace::{AttitudeCounts, CascadeTrace, RoundSummary, TraceEvent};

/// Attitude of a recipient after one message.
///
/// Unaware and neutral recipients adopt the sender's attitude when
/// `influence > persistence` and settle on neutral otherwise. Positive and
/// negative recipients keep their attitude when it matches the sender's;
/// otherwise they move half a step toward the sender when
/// `influence > persistence` and stay put when not.
pub fn get_att(
    current: Attitude,
    sender: Attitude,
    influence: f64,
    persistence: f64,
) -> Result<Attitude> {
    if !sender.is_known() {
        return Err(Error::Internal(
            "message from a node without an attitude".into(),
        ));
    }
    let flips = influence > persistence;
    let next = match current {
        Attitude::Unknown | Attitude::Neutral => {
            if flips {
                sender
            } else {
                Attitude::Neutral
            }
        }
        Attitude::Positive | Attitude::Negative => {
            if current == sender || !flips {
                current
            } else {
                let step = if sender.value() > current.value() {
                    0.5
                } else {
                    -0.5
                };
                Attitude::from_value(current.value() + step).ok_or_else(|| {
                    Error::Internal(format!(
                        "shift of {current} toward {sender} left the lattice"
                    ))
                })?
            }
        }
    };
    Ok(next)
}

/// Mutable state of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    pub attitudes: AttitudeState,
    pub opinions: OpinionState,
    pub persistence: PersistenceState,
    active: Vec<BTreeSet<NodeId>>,
    adjacent: Vec<BTreeSet<NodeId>>,
    partitions: Vec<[BTreeSet<NodeId>; 3]>,
}

impl EngineState {
    pub fn new(attitudes: AttitudeState, initial_persistence: f64) -> Self {
        let z = attitudes.topic_count();
        let mut active = vec![BTreeSet::new(); z];
        let mut partitions: Vec<[BTreeSet<NodeId>; 3]> =
            (0..z).map(|_| Default::default()).collect();
        for v in 0..attitudes.node_count() {
            let v = NodeId(v);
            for (t, a) in attitudes.row(v).iter().enumerate() {
                if let Some(slot) = a.class_index() {
                    active[t].insert(v);
                    partitions[t][slot].insert(v);
                }
            }
        }
        EngineState {
            opinions: OpinionState::from_attitudes(&attitudes),
            persistence: PersistenceState::new(attitudes.node_count(), z, initial_persistence),
            adjacent: vec![BTreeSet::new(); z],
            attitudes,
            active,
            partitions,
        }
    }

    /// Nodes aware of `t`.
    pub fn active(&self, t: TopicId) -> &BTreeSet<NodeId> {
        &self.active[t.0]
    }

    /// Nodes that have received at least one message on `t`.
    pub fn adjacent(&self, t: TopicId) -> &BTreeSet<NodeId> {
        &self.adjacent[t.0]
    }

    /// Positive, neutral, and negative holders of `t`.
    pub fn partitions(&self, t: TopicId) -> &[BTreeSet<NodeId>; 3] {
        &self.partitions[t.0]
    }

    fn transition(&mut self, v: NodeId, t: TopicId, old: Attitude, new: Attitude) {
        if let Some(slot) = old.class_index() {
            self.partitions[t.0][slot].remove(&v);
        }
        if let Some(slot) = new.class_index() {
            self.partitions[t.0][slot].insert(v);
        }
        self.attitudes.set(v, t, new);
    }

    pub fn counts(&self, t: TopicId) -> AttitudeCounts {
        let [p, n, g] = &self.partitions[t.0];
        AttitudeCounts {
            positive: p.len(),
            neutral: n.len(),
            negative: g.len(),
            unknown: self.attitudes.node_count() - self.active[t.0].len(),
        }
    }

    /// Verifies that the partitions are disjoint, cover exactly the aware set,
    /// and agree with the attitude table.
    pub fn check_invariants(&self) -> Result<()> {
        for t in 0..self.attitudes.topic_count() {
            let t = TopicId(t);
            let parts = &self.partitions[t.0];
            let total: usize = parts.iter().map(BTreeSet::len).sum();
            let union: BTreeSet<NodeId> = parts.iter().flatten().copied().collect();
            if total != union.len() {
                return Err(Error::Internal(format!("partitions of topic {t} overlap")));
            }
            if union != self.active[t.0] {
                return Err(Error::Internal(format!(
                    "partitions of topic {t} differ from its aware set"
                )));
            }
            for v in 0..self.attitudes.node_count() {
                let v = NodeId(v);
                let a = self.attitudes.get(v, t);
                let listed = a.class_index().is_some_and(|slot| parts[slot].contains(&v));
                if a.is_known() != listed {
                    return Err(Error::Internal(format!(
                        "node {v} attitude {a} not reflected in topic {t} partitions"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Final state and trace of a run.
#[derive(Debug, Clone)]
pub struct UapeOutcome {
    pub state: EngineState,
    pub trace: CascadeTrace,
}

/// Runs the configured topic(s) from the given initial attitudes.
pub fn run_uape(
    graph: &DirectedGraph,
    attitudes: &AttitudeState,
    config: &SimulationConfig,
) -> Result<UapeOutcome> {
    let state = EngineState::new(attitudes.clone(), config.initial_persistence);
    run_uape_from(graph, state, config)
}

/// Runs from a prepared state, e.g. one with per-node persistence overrides.
pub fn run_uape_from(
    graph: &DirectedGraph,
    mut state: EngineState,
    config: &SimulationConfig,
) -> Result<UapeOutcome> {
    if state.attitudes.node_count() != graph.node_count() {
        return Err(Error::Config(format!(
            "attitude table covers {} nodes but the graph has {}",
            state.attitudes.node_count(),
            graph.node_count()
        )));
    }
    if config.rounds == 0 {
        return Err(Error::Config("rounds must be at least 1".into()));
    }
    let topics = config.topic.resolve(state.attitudes.topic_count())?;
    let mut trace = CascadeTrace::new(&state.attitudes);
    if graph.node_count() == 0 {
        return Ok(UapeOutcome { state, trace });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut received: Vec<Vec<f64>> = vec![Vec::new(); graph.node_count()];
    let mut touched: Vec<NodeId> = Vec::new();

    for &topic in &topics {
        for round in 1..=config.rounds {
            let refs = state.opinions.reference_opinions(&state.attitudes);
            let senders: Vec<NodeId> = state.active[topic.0].iter().copied().collect();
            for &sender in &senders {
                for (recipient, weight) in graph.out_iter(sender) {
                    if config.edge_gate == EdgeGate::Bernoulli && rng.random::<f64>() >= weight {
                        continue;
                    }
                    let told = state.attitudes.get(sender, topic);
                    let before = state.attitudes.get(recipient, topic);
                    let influence = influence_probability(
                        sender,
                        recipient,
                        topic,
                        graph,
                        &state.attitudes,
                        &state.opinions,
                        &refs,
                        config.indicator_mode,
                    )?;
                    let persistence = state.persistence.update(
                        recipient,
                        topic,
                        before,
                        Message {
                            sender_attitude: told,
                            influence: influence.clamped,
                        },
                    );
                    let after = get_att(before, told, influence.clamped, persistence)?;
                    if after != before {
                        state.transition(recipient, topic, before, after);
                        trace.events.push(TraceEvent {
                            round,
                            node: recipient,
                            topic,
                            old: before,
                            new: after,
                            sender,
                            p: influence.raw,
                            a: persistence,
                        });
                    }
                    state.adjacent[topic.0].insert(recipient);
                    if !before.is_known() && after.is_known() {
                        state.active[topic.0].insert(recipient);
                    }
                    if received[recipient.0].is_empty() {
                        touched.push(recipient);
                    }
                    received[recipient.0].push(told.value());
                }
            }

            touched.sort_unstable();
            for &v in &touched {
                let own = state.opinions.effective(v, topic, &state.attitudes);
                let updated = degroot_update(own, &received[v.0]);
                state.opinions.set(v, topic, updated);
                received[v.0].clear();
            }
            touched.clear();

            trace.summaries.push(RoundSummary {
                round,
                topic,
                counts: state.counts(topic),
                adjacent: state.adjacent[topic.0].len(),
            });
        }
    }
    Ok(UapeOutcome { state, trace })
}
