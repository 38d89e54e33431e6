//! Simulation of topic-aware attitude dissemination on directed social graphs.
//!
//! Nodes hold one of four attitudes per topic (unknown, positive, neutral,
//! negative). Aware nodes message their followers each round; a message's
//! influence combines the recipient's topic interest, the attitude similarity
//! of sender and recipient, and the recipient's in-degree. Recipients weigh
//! influence against a per-topic persistence that accumulates over their whole
//! message history. An Independent Cascade baseline and ROC-AUC evaluation
//! share the same graph, trace, and file formats.

pub mod baseline;
pub mod config;
pub mod datasets;
pub mod engine;
pub mod error;
pub mod eval;
pub mod graph;
pub mod manifest;
pub mod opinion;
pub mod runner;
mod text;
pub mod trace;

pub use config::{EdgeGate, EpsilonRule, Model, SimulationConfig, TopicSelection};
pub use engine::{get_att, run_uape, run_uape_from, EngineState, UapeOutcome};
pub use error::{Error, Result};
pub use graph::{
    generate_synthetic, infer_topic_count, load_attitude_table, load_edge_list, load_seed_file,
    Attitude, AttitudeState, DirectedGraph, Edge, NodeId, SeedEntry, SyntheticDataset, TopicId,
};
pub use opinion::IndicatorOperator;
pub use runner::{run_model, run_monte_carlo, ActivationFrequencies, RunOutcome, Scenario};
pub use trace::{AttitudeCounts, CascadeTrace, RoundSummary, TraceEvent};
