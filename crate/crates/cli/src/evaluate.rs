use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use uape_core::eval::{
    evaluate_run, replay_final, score_topics, EvaluationReport, GroundTruth, ScoreTable,
};
use uape_core::trace::read_events;
use uape_core::{
    infer_topic_count, load_attitude_table, load_edge_list, ActivationFrequencies, AttitudeState,
    DirectedGraph, Model, Scenario, SimulationConfig, TopicId,
};

use crate::files::open;
use crate::{EvaluateArgs, Failure};

fn truth_topics(truth: &GroundTruth) -> Vec<TopicId> {
    (0..truth.topic_count())
        .map(TopicId)
        .filter(|&t| truth.covers_topic(t))
        .collect()
}

fn load_truth_curve(truth: GroundTruth, path: Option<&Path>) -> Result<GroundTruth, Failure> {
    let Some(path) = path else { return Ok(truth) };
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("round") {
            continue;
        }
        let f: Vec<usize> = line
            .split(',')
            .map(|x| x.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| uape_core::Error::Parse {
                line: idx + 1,
                message: "expected six integers".into(),
            })?;
        let [round, topic, positive, neutral, negative, unknown] = f[..] else {
            return Err(uape_core::Error::Parse {
                line: idx + 1,
                message: "expected six integers".into(),
            }
            .into());
        };
        points.push(uape_core::eval::CurvePoint {
            round,
            topic: TopicId(topic),
            counts: uape_core::AttitudeCounts {
                positive,
                neutral,
                negative,
                unknown,
            },
        });
    }
    Ok(truth.with_curve(&points))
}

fn load_graph_inputs(
    args: &EvaluateArgs,
    default_weight: f64,
) -> Result<(DirectedGraph, AttitudeState), Failure> {
    let (Some(graph), Some(attitudes)) = (&args.graph, &args.attitudes) else {
        return Err(Failure::Usage(
            "--graph and --attitudes are required".into(),
        ));
    };
    let graph = load_edge_list(open(graph)?, default_weight)?;
    let z = match args.topics {
        Some(z) => z,
        None => infer_topic_count(open(attitudes)?)?,
    };
    let attitudes = load_attitude_table(open(attitudes)?, &graph, z)?;
    Ok((graph, attitudes))
}

fn emit(reports: &[EvaluationReport], out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            for r in reports {
                r.write(&mut lock)?;
            }
        }
        Some(path) if reports.len() == 1 => reports[0].write(File::create(path)?)?,
        Some(path) => {
            for r in reports {
                let mut name = path.clone().into_os_string();
                name.push(format!(".{}", r.model));
                let mut f = File::create(PathBuf::from(name))?;
                r.write(&mut f)?;
                f.flush()?;
            }
        }
    }
    Ok(())
}

pub fn run(args: EvaluateArgs) -> Result<(), Failure> {
    let reports = if let Some(scores_path) = &args.scores {
        let scores = ScoreTable::load(open(scores_path)?)?;
        let index = scores.label_index();
        let truth = GroundTruth::load(open(&args.truth)?, &index, scores.labels.len())?;
        let truth = load_truth_curve(truth, args.truth_curve.as_deref())?;
        let mut report = EvaluationReport::new("scores");
        report
            .metadata
            .push(("source".into(), scores_path.display().to_string()));
        report.auc = score_topics(&truth_topics(&truth), &truth, &scores.labels, |t| {
            scores.topic_scores(t)
        })?;
        vec![report]
    } else if let Some(trace_path) = &args.trace {
        let (graph, attitudes) = load_graph_inputs(&args, 1.0)?;
        let events = read_events(open(trace_path)?, &graph)?;
        let finals = replay_final(&attitudes, &events)?;
        let freq = ActivationFrequencies::from_final(&finals);
        let truth =
            GroundTruth::load(open(&args.truth)?, &graph.label_index(), graph.node_count())?;
        let truth = load_truth_curve(truth, args.truth_curve.as_deref())?;
        let topics: Vec<TopicId> = truth_topics(&truth)
            .into_iter()
            .filter(|t| t.0 < attitudes.topic_count())
            .collect();
        let mut report = EvaluationReport::new("trace");
        report
            .metadata
            .push(("source".into(), trace_path.display().to_string()));
        report.auc = score_topics(
            &topics,
            &truth,
            graph.labels(),
            |t| Ok(freq.topic_scores(t)),
        )?;
        vec![report]
    } else if let Some(config_path) = &args.config {
        let config = SimulationConfig::parse(&fs::read_to_string(config_path)?)?;
        let models: Vec<Model> = args
            .models
            .split(',')
            .map(|m| {
                m.trim()
                    .parse()
                    .map_err(|e: uape_core::Error| Failure::Usage(e.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let (graph, attitudes) = load_graph_inputs(&args, config.global_edge_probability)?;
        let truth =
            GroundTruth::load(open(&args.truth)?, &graph.label_index(), graph.node_count())?;
        let truth = load_truth_curve(truth, args.truth_curve.as_deref())?;
        let scenario = Scenario::new(graph, attitudes)?;
        evaluate_run(&scenario, &config, &truth, &models, args.jobs.max(1))?
    } else {
        return Err(Failure::Usage(
            "one of --scores, --trace, or --config is required".into(),
        ));
    };
    emit(&reports, args.out.as_ref())
}
