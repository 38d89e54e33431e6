//! Event traces and per-round summaries shared by every cascade model.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Attitude, AttitudeState, DirectedGraph, NodeId, TopicId};
use crate::text::records;

pub const TRACE_HEADER: &str = "round,node,topic,old,new,sender,p,a";
pub const SUMMARY_HEADER: &str = "round,topic,positive,neutral,negative,unknown,adjacent";

/// One attitude change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEvent {
    pub round: usize,
    pub node: NodeId,
    pub topic: TopicId,
    pub old: Attitude,
    pub new: Attitude,
    pub sender: NodeId,
    /// Unclamped influence of the triggering message.
    pub p: f64,
    /// Recipient persistence after processing the message; NaN for models
    /// without persistence.
    pub a: f64,
}

/// Population of each attitude class on one topic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AttitudeCounts {
    pub positive: usize,
    pub neutral: usize,
    pub negative: usize,
    pub unknown: usize,
}

impl AttitudeCounts {
    pub fn of(attitudes: &AttitudeState, t: TopicId) -> Self {
        let mut c = AttitudeCounts::default();
        for v in 0..attitudes.node_count() {
            c.add(attitudes.get(NodeId(v), t));
        }
        c
    }

    pub fn add(&mut self, a: Attitude) {
        *self.slot(a) += 1;
    }

    pub fn remove(&mut self, a: Attitude) {
        *self.slot(a) -= 1;
    }

    fn slot(&mut self, a: Attitude) -> &mut usize {
        match a {
            Attitude::Unknown => &mut self.unknown,
            Attitude::Positive => &mut self.positive,
            Attitude::Neutral => &mut self.neutral,
            Attitude::Negative => &mut self.negative,
        }
    }

    pub fn known(&self) -> usize {
        self.positive + self.neutral + self.negative
    }

    pub fn total(&self) -> usize {
        self.known() + self.unknown
    }
}

/// State at the end of one round of one topic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundSummary {
    pub round: usize,
    pub topic: TopicId,
    pub counts: AttitudeCounts,
    /// Distinct nodes that have received at least one message on the topic.
    pub adjacent: usize,
}

/// Complete record of a run: starting populations, every attitude change in
/// processing order, and one summary per (round, topic).
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeTrace {
    pub node_count: usize,
    pub topic_count: usize,
    pub initial_counts: Vec<AttitudeCounts>,
    pub events: Vec<TraceEvent>,
    pub summaries: Vec<RoundSummary>,
}

impl CascadeTrace {
    pub fn new(initial: &AttitudeState) -> Self {
        CascadeTrace {
            node_count: initial.node_count(),
            topic_count: initial.topic_count(),
            initial_counts: (0..initial.topic_count())
                .map(|t| AttitudeCounts::of(initial, TopicId(t)))
                .collect(),
            events: Vec::new(),
            summaries: Vec::new(),
        }
    }

    pub fn write_events<W: Write>(&self, graph: &DirectedGraph, mut out: W) -> Result<()> {
        writeln!(out, "{TRACE_HEADER}")?;
        for e in &self.events {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                e.round,
                graph.label(e.node),
                e.topic,
                e.old,
                e.new,
                graph.label(e.sender),
                e.p,
                e.a
            )?;
        }
        Ok(())
    }

    pub fn write_summaries<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{SUMMARY_HEADER}")?;
        for s in &self.summaries {
            let c = s.counts;
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.round, s.topic, c.positive, c.neutral, c.negative, c.unknown, s.adjacent
            )?;
        }
        Ok(())
    }
}

fn parse_field<T: std::str::FromStr>(line: usize, name: &str, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} `{text}`")))
}

fn parse_attitude(line: usize, text: &str) -> Result<Attitude> {
    text.parse::<f64>()
        .ok()
        .and_then(Attitude::from_value)
        .ok_or_else(|| Error::OffLattice {
            line,
            value: text.to_owned(),
        })
}

/// Reads events written by [`CascadeTrace::write_events`].
pub fn read_events<R: BufRead>(reader: R, graph: &DirectedGraph) -> Result<Vec<TraceEvent>> {
    let index = graph.label_index();
    let node = |line: usize, label: &str| {
        index.get(label).copied().ok_or_else(|| Error::UnknownNode {
            line,
            label: label.to_owned(),
        })
    };
    let mut out = Vec::new();
    for rec in records(reader)? {
        let f = &rec.fields;
        let line = rec.line;
        if f.first().map(String::as_str) == Some("round") {
            continue;
        }
        if f.len() != 8 {
            return Err(Error::parse(line, format!("expected `{TRACE_HEADER}`")));
        }
        out.push(TraceEvent {
            round: parse_field(line, "round", &f[0])?,
            node: node(line, &f[1])?,
            topic: TopicId(parse_field(line, "topic", &f[2])?),
            old: parse_attitude(line, &f[3])?,
            new: parse_attitude(line, &f[4])?,
            sender: node(line, &f[5])?,
            p: parse_field(line, "p", &f[6])?,
            a: parse_field(line, "a", &f[7])?,
        });
    }
    Ok(out)
}
