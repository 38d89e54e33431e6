//! Numerical kernels of the attitude model: opinion averaging, topic interest,
//! per-message influence, and attitude persistence.
//!
//! Attitudes are compared exactly; every lattice value is representable in f64.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Attitude, AttitudeState, DirectedGraph, NodeId, TopicId};

/// Smoothing constant in the interest weights `1 / (|d| + 0.01)`.
pub const INTEREST_SMOOTHING: f64 = 0.01;

/// Opinion substituted for a node that holds no attitude.
pub const NEUTRAL_OPINION: f64 = 0.5;

/// How attitude pairs are scored inside the similarity factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndicatorOperator {
    /// Each shared topic scores `xor_indicator(t_u - t_v, 0.5)`.
    #[default]
    XorIndicator,
    /// Each shared topic scores `(1 - |t_u - t_v|)^2`.
    AbsDiff,
}

impl fmt::Display for IndicatorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndicatorOperator::XorIndicator => "xor",
            IndicatorOperator::AbsDiff => "abs_diff",
        })
    }
}

impl FromStr for IndicatorOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "xor" | "xor_indicator" => Ok(IndicatorOperator::XorIndicator),
            "abs_diff" => Ok(IndicatorOperator::AbsDiff),
            other => Err(Error::Config(format!(
                "indicator_mode must be `xor` or `abs_diff`, got `{other}`"
            ))),
        }
    }
}

/// 0 when `x == y` exactly, otherwise 1. The complement `1 - xor_indicator`
/// selects the "same value" branch.
#[inline]
pub fn xor_indicator(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        1.0
    }
}

/// One DeGroot averaging step: the mean of the node's own opinion and the
/// opinions it received.
pub fn degroot_update(own: f64, received: &[f64]) -> f64 {
    let sum = received.iter().fold(own, |acc, x| acc + x);
    sum / (received.len() + 1) as f64
}

/// Continuous opinions per (node, topic). Undefined entries belong to nodes
/// that have never held an attitude on the topic.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionState {
    topic_count: usize,
    values: Vec<Option<f64>>,
}

impl OpinionState {
    /// Known attitudes seed their lattice value; unknown ones stay undefined.
    pub fn from_attitudes(attitudes: &AttitudeState) -> Self {
        let topic_count = attitudes.topic_count();
        let mut values = Vec::with_capacity(attitudes.node_count() * topic_count);
        for v in 0..attitudes.node_count() {
            for &a in attitudes.row(NodeId(v)) {
                values.push(a.is_known().then(|| a.value()));
            }
        }
        OpinionState {
            topic_count,
            values,
        }
    }

    pub fn get(&self, v: NodeId, t: TopicId) -> Option<f64> {
        self.values[v.0 * self.topic_count + t.0]
    }

    pub fn set(&mut self, v: NodeId, t: TopicId, value: f64) {
        self.values[v.0 * self.topic_count + t.0] = Some(value);
    }

    /// Opinion used wherever a number is required: the stored opinion, else the
    /// current attitude value for a node that just became aware, else neutral.
    pub fn effective(&self, v: NodeId, t: TopicId, attitudes: &AttitudeState) -> f64 {
        match self.get(v, t) {
            Some(o) => o,
            None => match attitudes.get(v, t) {
                Attitude::Unknown => NEUTRAL_OPINION,
                a => a.value(),
            },
        }
    }

    /// Mean effective opinion of the aware nodes of each topic.
    pub fn reference_opinions(&self, attitudes: &AttitudeState) -> ReferenceOpinions {
        let z = self.topic_count;
        let mut sums = vec![0.0; z];
        let mut counts = vec![0usize; z];
        for v in 0..attitudes.node_count() {
            let v = NodeId(v);
            for t in 0..z {
                let t = TopicId(t);
                if attitudes.get(v, t).is_known() {
                    sums[t.0] += self.effective(v, t, attitudes);
                    counts[t.0] += 1;
                }
            }
        }
        ReferenceOpinions {
            values: sums
                .into_iter()
                .zip(counts)
                .map(|(s, c)| (c > 0).then(|| s / c as f64))
                .collect(),
        }
    }
}

/// Public opinion of each topic; `None` marks a topic nobody is aware of.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOpinions {
    pub values: Vec<Option<f64>>,
}

impl ReferenceOpinions {
    /// Topics with at least one aware node, ascending.
    pub fn active_topics(&self) -> Vec<TopicId> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(t, v)| v.map(|_| TopicId(t)))
            .collect()
    }
}

/// Share of a node's interest that falls on `topic`, given the node's own
/// opinion on it and the public opinion of every active topic.
pub fn interest_probability(own: f64, topic: TopicId, refs: &ReferenceOpinions) -> Result<f64> {
    let weight = |reference: f64| 1.0 / ((own - reference).abs() + INTEREST_SMOOTHING);
    let mut total = 0.0;
    let mut target = None;
    for (t, reference) in refs.values.iter().enumerate() {
        if let Some(r) = *reference {
            let w = weight(r);
            total += w;
            if t == topic.0 {
                target = Some(w);
            }
        }
    }
    if total == 0.0 {
        return Err(Error::Internal(
            "interest requested with no active topics".into(),
        ));
    }
    let w = target
        .ok_or_else(|| Error::Internal(format!("interest requested for inactive topic {topic}")))?;
    Ok(w / total)
}

/// Square-root similarity over the topics on which both nodes hold an attitude.
pub fn attitude_similarity(
    sender: &[Attitude],
    recipient: &[Attitude],
    op: IndicatorOperator,
) -> f64 {
    let mut sum = 0.0;
    for (&a, &b) in sender.iter().zip(recipient) {
        if !(a.is_known() && b.is_known()) {
            continue;
        }
        let diff = a.value() - b.value();
        sum += match op {
            IndicatorOperator::XorIndicator => xor_indicator(diff, 0.5),
            IndicatorOperator::AbsDiff => (1.0 - diff.abs()).powi(2),
        };
    }
    sum.sqrt()
}

/// Influence of one message, before and after clamping to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Influence {
    pub raw: f64,
    pub clamped: f64,
}

/// Influence of `sender` on `recipient` regarding `topic`:
/// interest × similarity / in-degree.
#[allow(clippy::too_many_arguments)]
pub fn influence_probability(
    sender: NodeId,
    recipient: NodeId,
    topic: TopicId,
    graph: &DirectedGraph,
    attitudes: &AttitudeState,
    opinions: &OpinionState,
    refs: &ReferenceOpinions,
    op: IndicatorOperator,
) -> Result<Influence> {
    let in_degree = graph.in_degree(recipient);
    if in_degree == 0 {
        return Err(Error::Internal(format!(
            "message to node {recipient} which has no incoming edge"
        )));
    }
    let similarity = attitude_similarity(attitudes.row(sender), attitudes.row(recipient), op);
    if similarity == 0.0 {
        return Ok(Influence {
            raw: 0.0,
            clamped: 0.0,
        });
    }
    let own = opinions.effective(recipient, topic, attitudes);
    let interest = interest_probability(own, topic, refs)?;
    Ok(combine_influence(interest, similarity, in_degree))
}

/// `interest * similarity / in_degree`, clamped into a probability.
pub fn combine_influence(interest: f64, similarity: f64, in_degree: usize) -> Influence {
    let raw = interest * similarity / in_degree as f64;
    Influence {
        raw,
        clamped: raw.clamp(0.0, 1.0),
    }
}

/// A received message: the sender's attitude and its influence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub sender_attitude: Attitude,
    pub influence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceEntry {
    pub persistence: f64,
    pub log: Vec<Message>,
}

impl PersistenceEntry {
    pub fn received_count(&self) -> usize {
        self.log.len()
    }
}

/// Persistence scalar and full message history per (node, topic).
#[derive(Debug, Clone, PartialEq)]
pub struct PersistenceState {
    topic_count: usize,
    entries: Vec<PersistenceEntry>,
}

impl PersistenceState {
    pub fn new(node_count: usize, topic_count: usize, initial: f64) -> Self {
        PersistenceState {
            topic_count,
            entries: vec![
                PersistenceEntry {
                    persistence: initial.clamp(0.0, 1.0),
                    log: Vec::new(),
                };
                node_count * topic_count
            ],
        }
    }

    pub fn entry(&self, v: NodeId, t: TopicId) -> &PersistenceEntry {
        &self.entries[v.0 * self.topic_count + t.0]
    }

    pub fn persistence(&self, v: NodeId, t: TopicId) -> f64 {
        self.entry(v, t).persistence
    }

    pub fn set_persistence(&mut self, v: NodeId, t: TopicId, value: f64) {
        self.entries[v.0 * self.topic_count + t.0].persistence = value.clamp(0.0, 1.0);
    }

    /// Appends `message` to the history of `(v, t)` and recomputes persistence
    /// against the whole history, judged from `current`, v's attitude now.
    pub fn update(&mut self, v: NodeId, t: TopicId, current: Attitude, message: Message) -> f64 {
        let entry = &mut self.entries[v.0 * self.topic_count + t.0];
        entry.log.push(message);
        entry.persistence = persistence_update(entry.persistence, &entry.log, current);
        entry.persistence
    }
}

/// New persistence after evaluating `log` from the recipient's attitude `current`.
/// Agreeing messages raise persistence by their influence; disagreeing ones
/// lower it by `|t_u - t_v|` times their influence. An empty log is a no-op.
pub fn persistence_update(previous: f64, log: &[Message], current: Attitude) -> f64 {
    if log.is_empty() {
        return previous;
    }
    let own = current.value();
    let mut sum = 0.0;
    for m in log {
        let theirs = m.sender_attitude.value();
        let agree = 1.0 - xor_indicator(theirs, own);
        sum += (theirs - own).abs() * m.influence - agree * m.influence;
    }
    (previous - sum / log.len() as f64).clamp(0.0, 1.0)
}
