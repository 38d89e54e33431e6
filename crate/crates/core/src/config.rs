//! Run configuration and its flat `key = value` text form.
//!
//! Parsing is strict: unknown keys, repeated keys, and malformed values are
//! rejected with the offending line number.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::TopicId;
use crate::opinion::IndicatorOperator;

pub const CONFIG_KEYS: &[&str] = &[
    "rounds",
    "topic",
    "rng_seed",
    "indicator_mode",
    "initial_persistence",
    "epsilon_rule",
    "edge_gate",
    "global_edge_probability",
    "monte_carlo_runs",
    "model",
    "ic_probability",
];

/// Which topic(s) a run cascades.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopicSelection {
    Single(TopicId),
    /// Every topic in ascending order, one after another over shared state.
    All,
}

impl TopicSelection {
    pub fn resolve(self, topic_count: usize) -> Result<Vec<TopicId>> {
        match self {
            TopicSelection::All => Ok((0..topic_count).map(TopicId).collect()),
            TopicSelection::Single(t) if t.0 < topic_count => Ok(vec![t]),
            TopicSelection::Single(t) => Err(Error::Config(format!(
                "topic {t} out of range (topic count {topic_count})"
            ))),
        }
    }
}

impl fmt::Display for TopicSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopicSelection::Single(t) => write!(f, "{t}"),
            TopicSelection::All => f.write_str("all"),
        }
    }
}

impl FromStr for TopicSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TopicSelection::All);
        }
        s.parse()
            .map(|t| TopicSelection::Single(TopicId(t)))
            .map_err(|_| Error::Config(format!("topic must be an index or `all`, got `{s}`")))
    }
}

/// How the ε factor of an attitude shift is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonRule {
    /// ε = 1 when the message influence exceeds the recipient's persistence.
    #[default]
    Threshold,
}

/// Optional Bernoulli filter on message delivery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeGate {
    #[default]
    Off,
    /// Deliver each message with probability equal to the edge weight.
    Bernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Model {
    #[default]
    Uape,
    Ic,
}

macro_rules! keyword_enum {
    ($ty:ty, $key:literal, { $($variant:path => $text:literal),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($text => Ok($variant),)+
                    other => Err(Error::Config(format!(
                        concat!($key, " must be one of {:?}, got `{}`"),
                        [$($text),+],
                        other
                    ))),
                }
            }
        }
    };
}

keyword_enum!(EpsilonRule, "epsilon_rule", { EpsilonRule::Threshold => "threshold" });
keyword_enum!(EdgeGate, "edge_gate", { EdgeGate::Off => "off", EdgeGate::Bernoulli => "bernoulli" });
keyword_enum!(Model, "model", { Model::Uape => "uape", Model::Ic => "ic" });

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub rounds: usize,
    pub topic: TopicSelection,
    pub rng_seed: u64,
    pub indicator_mode: IndicatorOperator,
    pub initial_persistence: f64,
    pub epsilon_rule: EpsilonRule,
    pub edge_gate: EdgeGate,
    /// Weight given to edges listed without one.
    pub global_edge_probability: f64,
    pub monte_carlo_runs: usize,
    pub model: Model,
    /// Global activation probability for the IC baseline; edge weights when absent.
    pub ic_probability: Option<f64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            rounds: 10,
            topic: TopicSelection::Single(TopicId(0)),
            rng_seed: 0,
            indicator_mode: IndicatorOperator::XorIndicator,
            initial_persistence: 0.5,
            epsilon_rule: EpsilonRule::Threshold,
            edge_gate: EdgeGate::Off,
            global_edge_probability: 1.0,
            monte_carlo_runs: 1,
            model: Model::Uape,
            ic_probability: None,
        }
    }
}

fn probability(key: &str, value: &str) -> Result<f64> {
    let p: f64 = value
        .parse()
        .map_err(|_| Error::Config(format!("{key} must be a number, got `{value}`")))?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("{key} = {p} outside [0, 1]")));
    }
    Ok(p)
}

fn positive(key: &str, value: &str) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(Error::Config(format!(
            "{key} must be a positive integer, got `{value}`"
        ))),
    }
}

impl SimulationConfig {
    /// Applies a single `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "rounds" => self.rounds = positive(key, value)?,
            "topic" => self.topic = value.parse()?,
            "rng_seed" => {
                self.rng_seed = value
                    .parse()
                    .map_err(|_| Error::Config(format!("rng_seed must be a u64, got `{value}`")))?
            }
            "indicator_mode" => self.indicator_mode = value.parse()?,
            "initial_persistence" => self.initial_persistence = probability(key, value)?,
            "epsilon_rule" => self.epsilon_rule = value.parse()?,
            "edge_gate" => self.edge_gate = value.parse()?,
            "global_edge_probability" => self.global_edge_probability = probability(key, value)?,
            "monte_carlo_runs" => self.monte_carlo_runs = positive(key, value)?,
            "model" => self.model = value.parse()?,
            "ic_probability" => {
                self.ic_probability = if value.eq_ignore_ascii_case("edge") {
                    None
                } else {
                    Some(probability(key, value)?)
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown key `{other}` (expected one of {CONFIG_KEYS:?})"
                )))
            }
        }
        Ok(())
    }

    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = SimulationConfig::default();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(idx + 1, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_owned()) {
                return Err(Error::parse(idx + 1, format!("key `{key}` repeated")));
            }
            config
                .set(key, value)
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
        }
        Ok(config)
    }

    /// Every key with its resolved value, in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("rounds", self.rounds.to_string()),
            ("topic", self.topic.to_string()),
            ("rng_seed", self.rng_seed.to_string()),
            ("indicator_mode", self.indicator_mode.to_string()),
            ("initial_persistence", self.initial_persistence.to_string()),
            ("epsilon_rule", self.epsilon_rule.to_string()),
            ("edge_gate", self.edge_gate.to_string()),
            (
                "global_edge_probability",
                self.global_edge_probability.to_string(),
            ),
            ("monte_carlo_runs", self.monte_carlo_runs.to_string()),
            ("model", self.model.to_string()),
            (
                "ic_probability",
                self.ic_probability
                    .map_or_else(|| "edge".to_owned(), |p| p.to_string()),
            ),
        ]
    }

    pub fn to_text(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// SHA-256 of the canonical text form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}
