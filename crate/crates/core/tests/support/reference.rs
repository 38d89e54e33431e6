//! Naive reference implementation of the round engine, written directly from
//! the model equations with flat maps and no incremental bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const UNKNOWN: f64 = -1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RefEvent {
    pub round: usize,
    pub node: usize,
    pub topic: usize,
    pub old: f64,
    pub new: f64,
    pub sender: usize,
    pub p: f64,
    pub a: f64,
}

#[derive(Debug, Clone)]
pub struct RefInput {
    pub n: usize,
    pub z: usize,
    /// (source, target, weight)
    pub edges: Vec<(usize, usize, f64)>,
    /// attitude per (node, topic), -1 for unknown
    pub attitudes: BTreeMap<(usize, usize), f64>,
    pub rounds: usize,
    /// `None` runs every topic in order.
    pub topic: Option<usize>,
    pub initial_persistence: f64,
    pub abs_diff: bool,
    pub bernoulli: bool,
    pub rng_seed: u64,
}

pub struct RefOutput {
    pub events: Vec<RefEvent>,
    pub attitudes: BTreeMap<(usize, usize), f64>,
}

pub fn run_reference(input: &RefInput) -> RefOutput {
    let n = input.n;
    let z = input.z;
    let att_of = |att: &BTreeMap<(usize, usize), f64>, v: usize, t: usize| -> f64 {
        *att.get(&(v, t)).unwrap_or(&UNKNOWN)
    };
    let mut att: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for v in 0..n {
        for t in 0..z {
            att.insert((v, t), *input.attitudes.get(&(v, t)).unwrap_or(&UNKNOWN));
        }
    }
    // opinions: defined only for known attitudes at start
    let mut opinion: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (&(v, t), &a) in &att {
        if a != UNKNOWN {
            opinion.insert((v, t), a);
        }
    }
    let mut persistence: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut log: BTreeMap<(usize, usize), Vec<(f64, f64)>> = BTreeMap::new();
    let in_degree = |v: usize| input.edges.iter().filter(|e| e.1 == v).count();
    let followers = |v: usize| {
        let mut out: Vec<(usize, f64)> = input
            .edges
            .iter()
            .filter(|e| e.0 == v)
            .map(|e| (e.1, e.2))
            .collect();
        out.sort_by_key(|x| x.0);
        out
    };
    let effective = |opinion: &BTreeMap<(usize, usize), f64>,
                     att: &BTreeMap<(usize, usize), f64>,
                     v: usize,
                     t: usize| {
        if let Some(&o) = opinion.get(&(v, t)) {
            o
        } else {
            let a = att_of(att, v, t);
            if a == UNKNOWN {
                0.5
            } else {
                a
            }
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(input.rng_seed);
    let mut events = Vec::new();
    let topics: Vec<usize> = match input.topic {
        Some(t) => vec![t],
        None => (0..z).collect(),
    };
    if n == 0 {
        return RefOutput {
            events,
            attitudes: att,
        };
    }
    for &j in &topics {
        // V_j
        let mut aware: BTreeSet<usize> =
            (0..n).filter(|&v| att_of(&att, v, j) != UNKNOWN).collect();
        for round in 1..=input.rounds {
            // public opinion of each topic
            let mut refs: Vec<Option<f64>> = Vec::new();
            for t in 0..z {
                let mut sum = 0.0;
                let mut count = 0;
                for v in 0..n {
                    if att_of(&att, v, t) != UNKNOWN {
                        sum += effective(&opinion, &att, v, t);
                        count += 1;
                    }
                }
                refs.push(if count > 0 {
                    Some(sum / count as f64)
                } else {
                    None
                });
            }
            let snapshot: Vec<usize> = aware.iter().copied().collect();
            let mut inbox: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
            for &v in &snapshot {
                for (q, w) in followers(v) {
                    if input.bernoulli {
                        let u: f64 = rng.random();
                        if u >= w {
                            continue;
                        }
                    }
                    let t_v = att_of(&att, v, j);
                    let t_cur = att_of(&att, q, j);
                    // similarity over topics both hold
                    let mut s = 0.0;
                    for t in 0..z {
                        let (a, b) = (att_of(&att, v, t), att_of(&att, q, t));
                        if a != UNKNOWN && b != UNKNOWN {
                            let d = a - b;
                            s += if input.abs_diff {
                                (1.0 - d.abs()).powi(2)
                            } else if d == 0.5 {
                                0.0
                            } else {
                                1.0
                            };
                        }
                    }
                    let sim = s.sqrt();
                    let p = if sim == 0.0 {
                        0.0
                    } else {
                        let own = effective(&opinion, &att, q, j);
                        let mut total = 0.0;
                        let mut mine = 0.0;
                        for (t, r) in refs.iter().enumerate() {
                            if let Some(r) = r {
                                let w = 1.0 / ((own - r).abs() + 0.01);
                                total += w;
                                if t == j {
                                    mine = w;
                                }
                            }
                        }
                        (mine / total) * sim / in_degree(q) as f64
                    };
                    let p_used = p.clamp(0.0, 1.0);
                    let history = log.entry((q, j)).or_default();
                    history.push((t_v, p_used));
                    let mut sum = 0.0;
                    for &(t_u, pu) in history.iter() {
                        let same = if t_u == t_cur { 1.0 } else { 0.0 };
                        sum += (t_u - t_cur).abs() * pu - same * pu;
                    }
                    let prev = *persistence
                        .get(&(q, j))
                        .unwrap_or(&input.initial_persistence);
                    let a = (prev - sum / history.len() as f64).clamp(0.0, 1.0);
                    persistence.insert((q, j), a);
                    // attitude transition
                    let new = if t_cur == 0.5 || t_cur == UNKNOWN {
                        if p_used > a {
                            t_v
                        } else {
                            0.5
                        }
                    } else if t_cur == t_v {
                        t_cur
                    } else {
                        let eps = if p_used > a { 1.0 } else { 0.0 };
                        let sign = if t_v > t_cur { 1.0 } else { -1.0 };
                        t_cur + sign * eps * 0.5
                    };
                    if new != t_cur {
                        att.insert((q, j), new);
                        events.push(RefEvent {
                            round,
                            node: q,
                            topic: j,
                            old: t_cur,
                            new,
                            sender: v,
                            p,
                            a,
                        });
                    }
                    if t_cur == UNKNOWN && new != UNKNOWN {
                        aware.insert(q);
                    }
                    inbox.entry(q).or_default().push(t_v);
                }
            }
            for (q, msgs) in inbox {
                let mut total = effective(&opinion, &att, q, j);
                for m in &msgs {
                    total += m;
                }
                opinion.insert((q, j), total / (msgs.len() + 1) as f64);
            }
        }
    }
    RefOutput {
        events,
        attitudes: att,
    }
}
