//! Small graphs with hand-derived expected traces.

use uape_core::eval::replay_final;
use uape_core::{
    get_att, run_uape, Attitude, AttitudeState, DirectedGraph, NodeId, SimulationConfig, TopicId,
    TopicSelection, TraceEvent,
};

use Attitude::*;

/// (round, node, old, new, sender, p, a)
pub type Row = (usize, usize, Attitude, Attitude, usize, f64, f64);

pub fn rows(trace: &[TraceEvent]) -> Vec<Row> {
    trace
        .iter()
        .map(|e| (e.round, e.node.0, e.old, e.new, e.sender.0, e.p, e.a))
        .collect()
}

/// `s -> q`; `s` negative on both topics, `q` negative on topic 1 only.
pub fn two_node() -> (DirectedGraph, AttitudeState) {
    let g = DirectedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
    let mut a = AttitudeState::new(2, 2);
    a.set(NodeId(0), TopicId(0), Negative);
    a.set(NodeId(0), TopicId(1), Negative);
    a.set(NodeId(1), TopicId(1), Negative);
    (g, a)
}

/// Interest 0.5 over two equally distant topics, similarity 1, in-degree 1.
/// The lone message disagrees with an unaware recipient: A = 0.5 - 2 * 0.5.
pub const TWO_NODE_TRACE: [Row; 1] = [(1, 1, Unknown, Negative, 0, 0.5, 0.0)];

pub fn five_node() -> (DirectedGraph, AttitudeState) {
    let g = DirectedGraph::from_edges(
        5,
        &[
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 3, 1.0),
            (2, 3, 1.0),
            (3, 4, 1.0),
        ],
    )
    .unwrap();
    let mut a = AttitudeState::new(5, 2);
    a.set(NodeId(0), TopicId(0), Negative);
    a.set(NodeId(1), TopicId(0), Positive);
    for v in 0..3 {
        a.set(NodeId(v), TopicId(1), Negative);
    }
    a.set(NodeId(3), TopicId(1), Positive);
    (g, a)
}

/// Topic 0, three rounds, default persistence.
pub const FIVE_NODE_TRACE: [Row; 6] = [
    (1, 1, Positive, Neutral, 0, 0.8463010294516159, 0.0),
    (1, 2, Unknown, Negative, 0, 0.962962962962963, 0.0),
    (1, 3, Unknown, Neutral, 1, 0.4814814814814815, 0.0),
    (2, 1, Neutral, Negative, 0, 0.5, 0.0),
    (2, 3, Neutral, Negative, 1, 0.25, 0.17824074074074076),
    (2, 4, Unknown, Neutral, 3, 0.0, 0.5),
];

pub const FIVE_NODE_FINAL: [Attitude; 5] = [Negative, Negative, Negative, Negative, Neutral];

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

pub fn check_get_att_branches() -> Result<(), String> {
    let cases = [
        (Unknown, Negative, 0.6, 0.5, Negative),
        (Unknown, Negative, 0.3, 0.5, Neutral),
        (Positive, Positive, 0.9, 0.1, Positive),
        (Negative, Positive, 0.9, 0.1, Neutral),
    ];
    for (current, sender, p, a, want) in cases {
        let got = get_att(current, sender, p, a).map_err(|e| e.to_string())?;
        expect(
            &format!("get_att({current}, {sender}, {p}, {a})"),
            got,
            want,
        )?;
    }
    Ok(())
}

pub fn check_two_node() -> Result<(), String> {
    let (g, a) = two_node();
    let cfg = SimulationConfig {
        rounds: 1,
        ..Default::default()
    };
    let out = run_uape(&g, &a, &cfg).map_err(|e| e.to_string())?;
    expect(
        "two-node trace",
        rows(&out.trace.events),
        TWO_NODE_TRACE.to_vec(),
    )?;
    expect(
        "two-node recipient",
        out.state.attitudes.get(NodeId(1), TopicId(0)),
        Negative,
    )
}

pub fn check_five_node() -> Result<(), String> {
    let (g, a) = five_node();
    let cfg = SimulationConfig {
        rounds: 3,
        topic: TopicSelection::Single(TopicId(0)),
        ..Default::default()
    };
    let out = run_uape(&g, &a, &cfg).map_err(|e| e.to_string())?;
    expect(
        "five-node trace",
        rows(&out.trace.events),
        FIVE_NODE_TRACE.to_vec(),
    )?;
    let finals: Vec<Attitude> = (0..5)
        .map(|v| out.state.attitudes.get(NodeId(v), TopicId(0)))
        .collect();
    expect(
        "five-node final attitudes",
        finals,
        FIVE_NODE_FINAL.to_vec(),
    )?;
    let replayed = replay_final(&a, &out.trace.events).map_err(|e| e.to_string())?;
    expect("five-node replay", replayed, out.state.attitudes)
}
