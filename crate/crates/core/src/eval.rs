//! Activation curves and rank-based ROC-AUC scoring against ground truth.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::config::{EdgeGate, Model, SimulationConfig};
use crate::error::{Error, Result};
use crate::graph::{AttitudeState, NodeId, TopicId};
use crate::runner::{run_model, run_monte_carlo, ActivationFrequencies, Scenario};
use crate::text::records;
use crate::trace::{AttitudeCounts, CascadeTrace, TraceEvent};

pub const CURVE_HEADER: &str = "round,topic,positive,neutral,negative,unknown";

/// Attitude populations of one topic at the end of one round (round 0 is the
/// initial state).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurvePoint {
    pub round: usize,
    pub topic: TopicId,
    pub counts: AttitudeCounts,
}

/// Replays `trace` into cumulative per-(round, topic) populations for rounds
/// `0..=rounds`, ordered by round then topic.
pub fn activation_curve(trace: &CascadeTrace, rounds: usize) -> Result<Vec<CurvePoint>> {
    let z = trace.topic_count;
    let mut by_topic: Vec<Vec<&TraceEvent>> = vec![Vec::new(); z];
    for e in &trace.events {
        if e.round > rounds {
            return Err(Error::Config(format!(
                "trace event in round {} exceeds {rounds} rounds",
                e.round
            )));
        }
        if e.topic.0 >= z {
            return Err(Error::Config(format!(
                "trace event on unknown topic {}",
                e.topic
            )));
        }
        by_topic[e.topic.0].push(e);
    }
    let mut columns: Vec<Vec<AttitudeCounts>> = Vec::with_capacity(z);
    for (t, events) in by_topic.iter().enumerate() {
        let mut counts = trace.initial_counts[t];
        let mut column = vec![counts];
        let mut cursor = events.iter().peekable();
        for round in 1..=rounds {
            while let Some(e) = cursor.next_if(|e| e.round == round) {
                counts.remove(e.old);
                counts.add(e.new);
            }
            column.push(counts);
        }
        if cursor.peek().is_some() {
            return Err(Error::Config(format!(
                "trace events of topic {t} out of round order"
            )));
        }
        columns.push(column);
    }
    let mut out = Vec::with_capacity((rounds + 1) * z);
    for round in 0..=rounds {
        for (t, column) in columns.iter().enumerate() {
            out.push(CurvePoint {
                round,
                topic: TopicId(t),
                counts: column[round],
            });
        }
    }
    Ok(out)
}

pub fn write_curve<W: Write>(curve: &[CurvePoint], mut out: W) -> Result<()> {
    writeln!(out, "{CURVE_HEADER}")?;
    for p in curve {
        let c = p.counts;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            p.round, p.topic, c.positive, c.neutral, c.negative, c.unknown
        )?;
    }
    Ok(())
}

/// Applies trace events to the initial attitudes, checking each event's
/// recorded prior attitude.
pub fn replay_final(initial: &AttitudeState, events: &[TraceEvent]) -> Result<AttitudeState> {
    let mut state = initial.clone();
    for e in events {
        if e.node.0 >= state.node_count() || e.topic.0 >= state.topic_count() {
            return Err(Error::Config(format!(
                "trace event for node {} topic {} outside the attitude table",
                e.node, e.topic
            )));
        }
        let current = state.get(e.node, e.topic);
        if current != e.old {
            return Err(Error::Config(format!(
                "trace event in round {} expects node {} at {} but it holds {}",
                e.round, e.node, e.old, current
            )));
        }
        state.set(e.node, e.topic, e.new);
    }
    Ok(state)
}

/// Probability that a random positive outranks a random negative, ties 1/2.
/// Computed from average ranks (Mann-Whitney U).
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Config(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Config("score is NaN".into()));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 {
        return Err(Error::DegenerateLabels("negatives"));
    }
    if negatives == 0 {
        return Err(Error::DegenerateLabels("positives"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut positive_rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        // 1-based ranks i+1 ..= j share their mean.
        let rank = (i + 1 + j) as f64 / 2.0;
        positive_rank_sum += rank * order[i..j].iter().filter(|&&k| labels[k]).count() as f64;
        i = j;
    }
    let p = positives as f64;
    let u = positive_rank_sum - p * (p + 1.0) / 2.0;
    Ok(u / (p * negatives as f64))
}

/// Final activation labels per (node, topic), plus optional per-round
/// aware-node counts.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    node_count: usize,
    topic_count: usize,
    labels: Vec<Option<bool>>,
    /// `(round, topic) -> aware nodes`, when a truth curve is available.
    pub round_known: HashMap<(usize, TopicId), usize>,
}

impl GroundTruth {
    /// Parses `node,topic,label` lines (label 0 or 1) against a label index.
    pub fn load<R: BufRead>(
        reader: R,
        index: &HashMap<&str, NodeId>,
        node_count: usize,
    ) -> Result<Self> {
        let mut rows = Vec::new();
        let mut topic_count = 0;
        for rec in records(reader)? {
            let line = rec.line;
            let [node, topic, label] = rec.fields.as_slice() else {
                return Err(Error::parse(line, "expected `node,topic,label`"));
            };
            let v = index
                .get(node.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownNode {
                    line,
                    label: node.clone(),
                })?;
            let t: usize = topic
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid topic `{topic}`")))?;
            let l = match label.as_str() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::parse(
                        line,
                        format!("label must be 0 or 1, got `{other}`"),
                    ))
                }
            };
            topic_count = topic_count.max(t + 1);
            rows.push((v, t, l));
        }
        let mut truth = GroundTruth {
            node_count,
            topic_count,
            labels: vec![None; node_count * topic_count],
            round_known: HashMap::new(),
        };
        for (v, t, l) in rows {
            truth.labels[v.0 * topic_count + t] = Some(l);
        }
        Ok(truth)
    }

    /// Truth equal to the final aware set of `attitudes`.
    pub fn from_final(attitudes: &AttitudeState) -> Self {
        let z = attitudes.topic_count();
        let mut labels = Vec::with_capacity(attitudes.node_count() * z);
        for v in 0..attitudes.node_count() {
            labels.extend(attitudes.row(NodeId(v)).iter().map(|a| Some(a.is_known())));
        }
        GroundTruth {
            node_count: attitudes.node_count(),
            topic_count: z,
            labels,
            round_known: HashMap::new(),
        }
    }

    /// Records per-round aware counts from a truth curve.
    pub fn with_curve(mut self, curve: &[CurvePoint]) -> Self {
        for p in curve {
            self.round_known
                .insert((p.round, p.topic), p.counts.known());
        }
        self
    }

    pub fn topic_count(&self) -> usize {
        self.topic_count
    }

    pub fn label(&self, v: NodeId, t: TopicId) -> Option<bool> {
        if t.0 >= self.topic_count {
            return None;
        }
        self.labels[v.0 * self.topic_count + t.0]
    }

    /// True if at least one node carries a label on `t`.
    pub fn covers_topic(&self, t: TopicId) -> bool {
        (0..self.node_count).any(|v| self.label(NodeId(v), t).is_some())
    }

    /// Labels of every node on `t`; fails on the first node without one.
    pub fn topic_labels(&self, t: TopicId, node_labels: &[String]) -> Result<Vec<bool>> {
        (0..self.node_count)
            .map(|v| {
                self.label(NodeId(v), t).ok_or_else(|| Error::MissingTruth {
                    label: node_labels[v].clone(),
                    topic: t.0,
                })
            })
            .collect()
    }

    pub fn write<W: Write>(&self, node_labels: &[String], mut out: W) -> Result<()> {
        writeln!(out, "# node,topic,label")?;
        for t in 0..self.topic_count {
            for (v, name) in node_labels.iter().enumerate().take(self.node_count) {
                if let Some(l) = self.label(NodeId(v), TopicId(t)) {
                    writeln!(out, "{},{},{}", name, t, u8::from(l))?;
                }
            }
        }
        Ok(())
    }
}

/// Scores read from a `node,topic,score` file. Node ids follow first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub labels: Vec<String>,
    pub topic_count: usize,
    values: HashMap<(usize, usize), f64>,
}

impl ScoreTable {
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut values = HashMap::new();
        let mut topic_count = 0;
        for rec in records(reader)? {
            let line = rec.line;
            let [node, topic, score] = rec.fields.as_slice() else {
                return Err(Error::parse(line, "expected `node,topic,score`"));
            };
            let t: usize = topic
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid topic `{topic}`")))?;
            let s: f64 = score
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid score `{score}`")))?;
            let v = *ids.entry(node.clone()).or_insert_with(|| {
                labels.push(node.clone());
                labels.len() - 1
            });
            if values.insert((v, t), s).is_some() {
                return Err(Error::parse(
                    line,
                    format!("duplicate score for `{node}` topic {t}"),
                ));
            }
            topic_count = topic_count.max(t + 1);
        }
        Ok(ScoreTable {
            labels,
            topic_count,
            values,
        })
    }

    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), NodeId(i)))
            .collect()
    }

    pub fn topic_scores(&self, t: TopicId) -> Result<Vec<f64>> {
        (0..self.labels.len())
            .map(|v| {
                self.values.get(&(v, t.0)).copied().ok_or_else(|| {
                    Error::Config(format!("no score for `{}` on topic {t}", self.labels[v]))
                })
            })
            .collect()
    }
}

/// Aware-node counts of the prediction, next to the truth when known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundComparison {
    pub round: usize,
    pub topic: TopicId,
    pub predicted_known: usize,
    pub truth_known: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub model: String,
    pub config_digest: Option<String>,
    pub auc: Vec<(TopicId, f64)>,
    pub rounds: Vec<RoundComparison>,
    pub metadata: Vec<(String, String)>,
}

impl EvaluationReport {
    pub fn new(model: impl Into<String>) -> Self {
        EvaluationReport {
            model: model.into(),
            config_digest: None,
            auc: Vec::new(),
            rounds: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn auc_for(&self, t: TopicId) -> Option<f64> {
        self.auc.iter().find(|(x, _)| *x == t).map(|&(_, a)| a)
    }

    /// Fills the per-round comparison from a predicted curve.
    pub fn add_curve(&mut self, curve: &[CurvePoint], truth: &GroundTruth) {
        for p in curve {
            self.rounds.push(RoundComparison {
                round: p.round,
                topic: p.topic,
                predicted_known: p.counts.known(),
                truth_known: truth.round_known.get(&(p.round, p.topic)).copied(),
            });
        }
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "model = {}", self.model)?;
        if let Some(d) = &self.config_digest {
            writeln!(out, "config_digest = {d}")?;
        }
        for (k, v) in &self.metadata {
            writeln!(out, "{k} = {v}")?;
        }
        for (t, auc) in &self.auc {
            writeln!(out, "auc.{t} = {auc}")?;
        }
        for r in &self.rounds {
            writeln!(
                out,
                "round.{}.{}.predicted_known = {}",
                r.round, r.topic, r.predicted_known
            )?;
            if let Some(k) = r.truth_known {
                writeln!(out, "round.{}.{}.truth_known = {}", r.round, r.topic, k)?;
            }
        }
        Ok(())
    }
}

/// AUC of `scores_for(topic)` against the truth, for every listed topic.
pub fn score_topics<F>(
    topics: &[TopicId],
    truth: &GroundTruth,
    node_labels: &[String],
    mut scores_for: F,
) -> Result<Vec<(TopicId, f64)>>
where
    F: FnMut(TopicId) -> Result<Vec<f64>>,
{
    topics
        .iter()
        .map(|&t| {
            let labels = truth.topic_labels(t, node_labels)?;
            let scores = scores_for(t)?;
            Ok((t, roc_auc(&scores, &labels)?))
        })
        .collect()
}

/// Runs each model on the scenario and scores it against the truth.
///
/// Stochastic runs (edge gate on, or the IC baseline) are scored by Monte
/// Carlo activation frequency over `config.monte_carlo_runs` replicas; the
/// deterministic engine is scored by its binary final activation.
pub fn evaluate_run(
    scenario: &Scenario,
    config: &SimulationConfig,
    truth: &GroundTruth,
    models: &[Model],
    jobs: usize,
) -> Result<Vec<EvaluationReport>> {
    let topics = config.topic.resolve(scenario.topic_count())?;
    let mut reports = Vec::with_capacity(models.len());
    for &model in models {
        let cfg = SimulationConfig {
            model,
            ..config.clone()
        };
        let outcome = run_model(scenario, &cfg)?;
        let stochastic = cfg.edge_gate == EdgeGate::Bernoulli || model == Model::Ic;
        let freq = if stochastic {
            run_monte_carlo(scenario, &cfg, cfg.monte_carlo_runs, jobs)?
        } else {
            ActivationFrequencies::from_final(&outcome.attitudes)
        };
        let mut report = EvaluationReport::new(model.to_string());
        report.config_digest = Some(cfg.digest());
        report.metadata.push((
            "scoring".into(),
            if stochastic {
                "monte_carlo"
            } else {
                "final_activation"
            }
            .into(),
        ));
        report.metadata.push(("runs".into(), freq.runs.to_string()));
        report.auc = score_topics(&topics, truth, scenario.graph.labels(), |t| {
            Ok(freq.topic_scores(t))
        })?;
        let curve = activation_curve(&outcome.trace, cfg.rounds)?;
        report.add_curve(&curve, truth);
        reports.push(report);
    }
    Ok(reports)
}
