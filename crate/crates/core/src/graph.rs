//! Directed social graphs, the four-valued attitude lattice, file ingestion,
//! and synthetic dataset generation.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::text::records;

/// Dense node index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index into the topic set of size `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TopicId(pub usize);

impl TopicId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for TopicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A node's stance toward a topic. The numeric encoding is fixed:
/// unknown = -1, positive = 0, neutral = 0.5, negative = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Attitude {
    #[default]
    Unknown,
    Positive,
    Neutral,
    Negative,
}

impl Attitude {
    pub const KNOWN: [Attitude; 3] = [Attitude::Positive, Attitude::Neutral, Attitude::Negative];

    pub fn value(self) -> f64 {
        match self {
            Attitude::Unknown => -1.0,
            Attitude::Positive => 0.0,
            Attitude::Neutral => 0.5,
            Attitude::Negative => 1.0,
        }
    }

    /// Exact lattice lookup; any other value is rejected.
    pub fn from_value(value: f64) -> Option<Self> {
        if value == -1.0 {
            Some(Attitude::Unknown)
        } else if value == 0.0 {
            Some(Attitude::Positive)
        } else if value == 0.5 {
            Some(Attitude::Neutral)
        } else if value == 1.0 {
            Some(Attitude::Negative)
        } else {
            None
        }
    }

    pub fn is_known(self) -> bool {
        self != Attitude::Unknown
    }

    /// Slot among the three known classes (positive, neutral, negative).
    pub fn class_index(self) -> Option<usize> {
        match self {
            Attitude::Unknown => None,
            Attitude::Positive => Some(0),
            Attitude::Neutral => Some(1),
            Attitude::Negative => Some(2),
        }
    }
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attitude::Unknown => "-1",
            Attitude::Positive => "0",
            Attitude::Neutral => "0.5",
            Attitude::Negative => "1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
}

/// Simple directed graph with per-edge dissemination probabilities.
///
/// An edge `(a, b)` means `b` receives content published by `a`. Out-adjacency
/// is stored in compressed rows sorted by target id.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    out_weights: Vec<f64>,
    in_degree: Vec<usize>,
}

impl DirectedGraph {
    /// Builds a graph over `0..node_count` with labels equal to the decimal ids.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        for (i, &(s, t, w)) in edges.iter().enumerate() {
            let line = i + 1;
            for v in [s, t] {
                if v >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node: v,
                        node_count,
                    });
                }
            }
            if s == t {
                return Err(Error::SelfLoop {
                    line,
                    label: s.to_string(),
                });
            }
            if !(0.0..=1.0).contains(&w) {
                return Err(Error::WeightOutOfRange { line, weight: w });
            }
            if !seen.insert((s, t)) {
                return Err(Error::DuplicateEdge {
                    line,
                    source_label: s.to_string(),
                    target_label: t.to_string(),
                });
            }
            out.push(Edge {
                source: NodeId(s),
                target: NodeId(t),
                weight: w,
            });
        }
        Ok(Self::assemble(labels, out))
    }

    fn assemble(labels: Vec<String>, edges: Vec<Edge>) -> Self {
        let n = labels.len();
        let mut out_degree = vec![0usize; n];
        let mut in_degree = vec![0usize; n];
        for e in &edges {
            out_degree[e.source.0] += 1;
            in_degree[e.target.0] += 1;
        }
        let mut out_offsets = Vec::with_capacity(n + 1);
        out_offsets.push(0);
        for d in &out_degree {
            out_offsets.push(out_offsets.last().unwrap() + d);
        }
        let mut rows: Vec<Vec<(NodeId, f64)>> =
            out_degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for e in &edges {
            rows[e.source.0].push((e.target, e.weight));
        }
        let mut out_targets = Vec::with_capacity(edges.len());
        let mut out_weights = Vec::with_capacity(edges.len());
        for mut row in rows {
            row.sort_by_key(|&(t, _)| t);
            for (t, w) in row {
                out_targets.push(t);
                out_weights.push(w);
            }
        }
        DirectedGraph {
            labels,
            edges,
            out_offsets,
            out_targets,
            out_weights,
            in_degree,
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ingestion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_degree[v.0]
    }

    pub fn in_degrees(&self) -> &[usize] {
        &self.in_degree
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_offsets[v.0 + 1] - self.out_offsets[v.0]
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count()).map(NodeId)
    }

    /// Builds the label → id lookup table.
    pub fn label_index(&self) -> HashMap<&str, NodeId> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), NodeId(i)))
            .collect()
    }

    /// Followers of `v` (targets of edges leaving `v`) in ascending id order.
    pub fn out_neighbors(&self, v: NodeId) -> Result<Vec<(NodeId, f64)>> {
        if v.0 >= self.node_count() {
            return Err(Error::NodeOutOfRange {
                node: v.0,
                node_count: self.node_count(),
            });
        }
        Ok(self.out_iter(v).collect())
    }

    /// Unchecked borrowing variant of [`out_neighbors`](Self::out_neighbors).
    #[inline]
    pub fn out_iter(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        let range = self.out_offsets[v.0]..self.out_offsets[v.0 + 1];
        self.out_targets[range.clone()]
            .iter()
            .copied()
            .zip(self.out_weights[range].iter().copied())
    }

    /// Writes node declarations in id order followed by `source,target,weight` lines.
    /// Reloading the output reproduces ids, edges, and weights.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "# nodes: {}, edges: {}",
            self.node_count(),
            self.edge_count()
        )?;
        for label in &self.labels {
            writeln!(out, "{label}")?;
        }
        writeln!(out, "# source,target,weight")?;
        for e in &self.edges {
            writeln!(
                out,
                "{},{},{}",
                self.labels[e.source.0], self.labels[e.target.0], e.weight
            )?;
        }
        Ok(())
    }
}

fn parse_weight(line: usize, text: &str) -> Result<f64> {
    let w: f64 = text
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid weight `{text}`")))?;
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::WeightOutOfRange { line, weight: w });
    }
    Ok(w)
}

/// Parses an edge list. Each data line is `source<sep>target[<sep>weight]`;
/// a line holding a single label declares a node without adding an edge.
/// Labels are mapped to dense ids in order of first appearance.
pub fn load_edge_list<R: BufRead>(reader: R, default_weight: f64) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&default_weight) {
        return Err(Error::Config(format!(
            "default edge weight {default_weight} outside [0, 1]"
        )));
    }
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = labels.len();
        labels.push(label.to_owned());
        ids.insert(label.to_owned(), id);
        id
    };
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for rec in records(reader)? {
        let line = rec.line;
        let f = &rec.fields;
        if f.iter().any(|s| s.is_empty()) {
            return Err(Error::parse(line, "empty field"));
        }
        match f.len() {
            1 => {
                intern(&f[0]);
            }
            2 | 3 => {
                if f[0] == f[1] {
                    return Err(Error::SelfLoop {
                        line,
                        label: f[0].clone(),
                    });
                }
                let weight = match f.get(2) {
                    Some(w) => parse_weight(line, w)?,
                    None => default_weight,
                };
                let s = intern(&f[0]);
                let t = intern(&f[1]);
                if !seen.insert((s, t)) {
                    return Err(Error::DuplicateEdge {
                        line,
                        source_label: f[0].clone(),
                        target_label: f[1].clone(),
                    });
                }
                edges.push(Edge {
                    source: NodeId(s),
                    target: NodeId(t),
                    weight,
                });
            }
            k => {
                return Err(Error::parse(
                    line,
                    format!("expected `source,target[,weight]`, found {k} fields"),
                ))
            }
        }
    }
    Ok(DirectedGraph::assemble(labels, edges))
}

/// Per-(node, topic) attitudes; every pair defaults to unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttitudeState {
    node_count: usize,
    topic_count: usize,
    table: Vec<Attitude>,
}

impl AttitudeState {
    pub fn new(node_count: usize, topic_count: usize) -> Self {
        AttitudeState {
            node_count,
            topic_count,
            table: vec![Attitude::Unknown; node_count * topic_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn topic_count(&self) -> usize {
        self.topic_count
    }

    #[inline]
    pub fn get(&self, v: NodeId, t: TopicId) -> Attitude {
        self.table[v.0 * self.topic_count + t.0]
    }

    #[inline]
    pub fn set(&mut self, v: NodeId, t: TopicId, a: Attitude) {
        self.table[v.0 * self.topic_count + t.0] = a;
    }

    /// Attitudes of `v` across all topics.
    pub fn row(&self, v: NodeId) -> &[Attitude] {
        let start = v.0 * self.topic_count;
        &self.table[start..start + self.topic_count]
    }

    /// Nodes holding a known attitude on `t`, ascending.
    pub fn known_nodes(&self, t: TopicId) -> Vec<NodeId> {
        (0..self.node_count)
            .map(NodeId)
            .filter(|&v| self.get(v, t).is_known())
            .collect()
    }

    /// Writes known entries as `node,topic,attitude` lines.
    pub fn write_table<W: Write>(&self, graph: &DirectedGraph, mut out: W) -> Result<()> {
        writeln!(out, "# node,topic,attitude")?;
        for v in 0..self.node_count {
            for t in 0..self.topic_count {
                let a = self.get(NodeId(v), TopicId(t));
                if a.is_known() {
                    writeln!(out, "{},{},{}", graph.label(NodeId(v)), t, a)?;
                }
            }
        }
        Ok(())
    }
}

fn parse_topic(line: usize, text: &str, topic_count: usize) -> Result<TopicId> {
    let topic: usize = text
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid topic `{text}`")))?;
    if topic >= topic_count {
        return Err(Error::TopicOutOfRange {
            line,
            topic,
            topic_count,
        });
    }
    Ok(TopicId(topic))
}

fn lookup(index: &HashMap<&str, NodeId>, line: usize, label: &str) -> Result<NodeId> {
    index.get(label).copied().ok_or_else(|| Error::UnknownNode {
        line,
        label: label.to_owned(),
    })
}

/// Parses `node,topic,attitude` lines; unlisted pairs stay unknown.
pub fn load_attitude_table<R: BufRead>(
    reader: R,
    graph: &DirectedGraph,
    topic_count: usize,
) -> Result<AttitudeState> {
    let index = graph.label_index();
    let mut state = AttitudeState::new(graph.node_count(), topic_count);
    for rec in records(reader)? {
        let line = rec.line;
        let [node, topic, value] = rec.fields.as_slice() else {
            return Err(Error::parse(line, "expected `node,topic,attitude`"));
        };
        let v = lookup(&index, line, node)?;
        let t = parse_topic(line, topic, topic_count)?;
        let attitude = value
            .parse::<f64>()
            .ok()
            .and_then(Attitude::from_value)
            .ok_or_else(|| Error::OffLattice {
                line,
                value: value.clone(),
            })?;
        state.set(v, t, attitude);
    }
    Ok(state)
}

/// Topic count implied by an attitude-style table: one past the largest
/// topic index in its second column, at least 1.
pub fn infer_topic_count<R: BufRead>(reader: R) -> Result<usize> {
    let mut count = 1;
    for rec in records(reader)? {
        if let Some(t) = rec.fields.get(1) {
            let t: usize = t
                .parse()
                .map_err(|_| Error::parse(rec.line, format!("invalid topic `{t}`")))?;
            count = count.max(t + 1);
        }
    }
    Ok(count)
}

/// One row of a seed file: `node[,topic[,persistence]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedEntry {
    pub node: NodeId,
    /// `None` applies the entry to every topic.
    pub topic: Option<TopicId>,
    /// Initial persistence override for this seed.
    pub persistence: Option<f64>,
}

pub fn load_seed_file<R: BufRead>(
    reader: R,
    graph: &DirectedGraph,
    topic_count: usize,
) -> Result<Vec<SeedEntry>> {
    let index = graph.label_index();
    let mut out = Vec::new();
    for rec in records(reader)? {
        let line = rec.line;
        let f = &rec.fields;
        if f.is_empty() || f.len() > 3 {
            return Err(Error::parse(line, "expected `node[,topic[,persistence]]`"));
        }
        let node = lookup(&index, line, &f[0])?;
        let topic = match f.get(1).map(String::as_str) {
            None | Some("") | Some("*") => None,
            Some(t) => Some(parse_topic(line, t, topic_count)?),
        };
        let persistence = match f.get(2) {
            None => None,
            Some(p) => {
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::parse(line, format!("invalid persistence `{p}`")))?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::parse(
                        line,
                        format!("persistence {p} outside [0, 1]"),
                    ));
                }
                Some(p)
            }
        };
        out.push(SeedEntry {
            node,
            topic,
            persistence,
        });
    }
    Ok(out)
}

/// Synthetic corpus: graph, seed attitudes, and the seed set of each topic.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub graph: DirectedGraph,
    pub attitudes: AttitudeState,
    pub seeds: Vec<Vec<NodeId>>,
}

impl SyntheticDataset {
    pub fn write_seed_file<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# node,topic")?;
        for (t, seeds) in self.seeds.iter().enumerate() {
            for &v in seeds {
                writeln!(out, "{},{}", self.graph.label(v), t)?;
            }
        }
        Ok(())
    }
}

/// Draws a simple directed graph with exactly `edge_count` distinct edges chosen
/// uniformly among all `n(n-1)` ordered pairs, then per topic picks
/// `seed_count` distinct seeds with uniformly random known attitudes.
pub fn generate_synthetic(
    node_count: usize,
    edge_count: usize,
    topic_count: usize,
    seed_count: usize,
    rng_seed: u64,
) -> Result<SyntheticDataset> {
    let pairs = node_count
        .checked_mul(node_count.saturating_sub(1))
        .ok_or_else(|| Error::InfeasibleShape("node count too large".into()))?;
    if edge_count > pairs {
        return Err(Error::InfeasibleShape(format!(
            "{edge_count} edges exceed the {pairs} ordered pairs of {node_count} nodes"
        )));
    }
    if seed_count > node_count {
        return Err(Error::InfeasibleShape(format!(
            "{seed_count} seeds exceed {node_count} nodes"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut picks = index::sample(&mut rng, pairs, edge_count).into_vec();
    picks.sort_unstable();
    let edges: Vec<(usize, usize, f64)> = picks
        .into_iter()
        .map(|k| {
            let s = k / (node_count - 1);
            let r = k % (node_count - 1);
            let t = if r < s { r } else { r + 1 };
            (s, t, 1.0)
        })
        .collect();
    let graph = DirectedGraph::from_edges(node_count, &edges)?;
    let mut attitudes = AttitudeState::new(node_count, topic_count);
    let mut seeds = Vec::with_capacity(topic_count);
    for t in 0..topic_count {
        let mut chosen = index::sample(&mut rng, node_count, seed_count).into_vec();
        chosen.sort_unstable();
        let chosen: Vec<NodeId> = chosen.into_iter().map(NodeId).collect();
        for &v in &chosen {
            let a = Attitude::KNOWN[rng.random_range(0..3)];
            attitudes.set(v, TopicId(t), a);
        }
        seeds.push(chosen);
    }
    Ok(SyntheticDataset {
        graph,
        attitudes,
        seeds,
    })
}
