//! Model dispatch and Monte Carlo fan-out over a shared, immutable scenario.

use std::io::Write;

use rayon::prelude::*;

use crate::baseline::{run_ic, IcConfig};
use crate::config::{Model, SimulationConfig};
use crate::engine::{run_uape_from, EngineState};
use crate::error::{Error, Result};
use crate::graph::{AttitudeState, DirectedGraph, NodeId, SeedEntry, TopicId};
use crate::trace::CascadeTrace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistenceOverride {
    pub node: NodeId,
    pub topic: TopicId,
    pub value: f64,
}

/// Graph plus initial conditions. Read-only once built.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub graph: DirectedGraph,
    pub attitudes: AttitudeState,
    pub persistence_overrides: Vec<PersistenceOverride>,
}

impl Scenario {
    pub fn new(graph: DirectedGraph, attitudes: AttitudeState) -> Result<Self> {
        if graph.node_count() != attitudes.node_count() {
            return Err(Error::Config(format!(
                "attitude table covers {} nodes but the graph has {}",
                attitudes.node_count(),
                graph.node_count()
            )));
        }
        Ok(Scenario {
            graph,
            attitudes,
            persistence_overrides: Vec::new(),
        })
    }

    /// Checks that every listed seed holds an attitude on its topic(s) and
    /// records any per-seed persistence.
    pub fn apply_seeds(&mut self, entries: &[SeedEntry]) -> Result<()> {
        for entry in entries {
            let topics: Vec<TopicId> = match entry.topic {
                Some(t) => vec![t],
                None => (0..self.attitudes.topic_count()).map(TopicId).collect(),
            };
            for t in topics {
                if !self.attitudes.get(entry.node, t).is_known() {
                    return Err(Error::Config(format!(
                        "seed `{}` has no attitude on topic {t}",
                        self.graph.label(entry.node)
                    )));
                }
                if let Some(value) = entry.persistence {
                    self.persistence_overrides.push(PersistenceOverride {
                        node: entry.node,
                        topic: t,
                        value,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn topic_count(&self) -> usize {
        self.attitudes.topic_count()
    }

    pub fn initial_state(&self, config: &SimulationConfig) -> EngineState {
        let mut state = EngineState::new(self.attitudes.clone(), config.initial_persistence);
        for o in &self.persistence_overrides {
            state.persistence.set_persistence(o.node, o.topic, o.value);
        }
        state
    }
}

/// Final attitudes and trace of one run of either model.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub attitudes: AttitudeState,
    pub trace: CascadeTrace,
}

pub fn run_model(scenario: &Scenario, config: &SimulationConfig) -> Result<RunOutcome> {
    match config.model {
        Model::Uape => {
            let out = run_uape_from(&scenario.graph, scenario.initial_state(config), config)?;
            Ok(RunOutcome {
                attitudes: out.state.attitudes,
                trace: out.trace,
            })
        }
        Model::Ic => {
            let out = run_ic(
                &scenario.graph,
                &scenario.attitudes,
                config.topic,
                &IcConfig::from_simulation(config),
            )?;
            Ok(RunOutcome {
                attitudes: out.attitudes,
                trace: out.trace,
            })
        }
    }
}

/// How often each (node, topic) ended up aware across Monte Carlo runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationFrequencies {
    pub runs: usize,
    topic_count: usize,
    counts: Vec<usize>,
}

impl ActivationFrequencies {
    /// Indicator frequencies of a single final state.
    pub fn from_final(attitudes: &AttitudeState) -> Self {
        let mut f = ActivationFrequencies {
            runs: 1,
            topic_count: attitudes.topic_count(),
            counts: vec![0; attitudes.node_count() * attitudes.topic_count()],
        };
        f.accumulate(attitudes);
        f
    }

    fn accumulate(&mut self, attitudes: &AttitudeState) {
        for v in 0..attitudes.node_count() {
            for (t, a) in attitudes.row(NodeId(v)).iter().enumerate() {
                if a.is_known() {
                    self.counts[v * self.topic_count + t] += 1;
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.counts.len().checked_div(self.topic_count).unwrap_or(0)
    }

    pub fn topic_count(&self) -> usize {
        self.topic_count
    }

    pub fn frequency(&self, v: NodeId, t: TopicId) -> f64 {
        self.counts[v.0 * self.topic_count + t.0] as f64 / self.runs as f64
    }

    /// Scores of every node on `t`, indexed by node id.
    pub fn topic_scores(&self, t: TopicId) -> Vec<f64> {
        (0..self.node_count())
            .map(|v| self.frequency(NodeId(v), t))
            .collect()
    }

    /// Writes `node,topic,score` rows, topic-major.
    pub fn write<W: Write>(&self, graph: &DirectedGraph, mut out: W) -> Result<()> {
        writeln!(out, "# node,topic,score")?;
        for t in 0..self.topic_count {
            for v in graph.nodes() {
                writeln!(
                    out,
                    "{},{},{}",
                    graph.label(v),
                    t,
                    self.frequency(v, TopicId(t))
                )?;
            }
        }
        Ok(())
    }
}

/// Runs `runs` independent replicas, replica `i` seeded with `rng_seed + i`,
/// on up to `jobs` worker threads. Merging is by replica index, so the result
/// does not depend on scheduling.
pub fn run_monte_carlo(
    scenario: &Scenario,
    config: &SimulationConfig,
    runs: usize,
    jobs: usize,
) -> Result<ActivationFrequencies> {
    if runs == 0 {
        return Err(Error::Config("Monte Carlo needs at least one run".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("worker pool: {e}")))?;
    let finals: Vec<AttitudeState> = pool.install(|| {
        (0..runs)
            .into_par_iter()
            .map(|i| {
                let mut replica = config.clone();
                replica.rng_seed = config.rng_seed.wrapping_add(i as u64);
                run_model(scenario, &replica).map(|o| o.attitudes)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut freq = ActivationFrequencies {
        runs,
        topic_count: scenario.topic_count(),
        counts: vec![0; scenario.node_count() * scenario.topic_count()],
    };
    for f in &finals {
        freq.accumulate(f);
    }
    Ok(freq)
}
