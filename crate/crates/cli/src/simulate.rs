use std::fs;
use std::path::{Path, PathBuf};

use uape_core::eval::{activation_curve, write_curve, GroundTruth};
use uape_core::manifest::RunManifest;
use uape_core::{
    infer_topic_count, load_attitude_table, load_edge_list, load_seed_file, run_model,
    run_monte_carlo, ActivationFrequencies, Error, Scenario, SimulationConfig,
};

use crate::files::{absolute, open, OutputSet};
use crate::{Failure, SimulateArgs};

struct Plan {
    graph: PathBuf,
    attitudes: PathBuf,
    seeds: Option<PathBuf>,
    topics: Option<usize>,
    config: SimulationConfig,
    jobs: usize,
}

fn from_manifest(path: &Path, jobs: Option<usize>) -> Result<Plan, Failure> {
    let manifest = RunManifest::parse(&fs::read_to_string(path)?)?;
    if manifest.command != "simulate" {
        return Err(Error::Manifest(format!(
            "manifest records `{}`, not `simulate`",
            manifest.command
        ))
        .into());
    }
    manifest.verify_inputs()?;
    let input = |role: &str| manifest.input(role).map(|i| PathBuf::from(&i.path));
    let param = |key: &str| -> Result<Option<usize>, Failure> {
        manifest
            .param(key)
            .map(|v| {
                v.parse().map_err(|_| {
                    Error::Manifest(format!("param.{key} = `{v}` is not an integer")).into()
                })
            })
            .transpose()
    };
    Ok(Plan {
        graph: input("graph").ok_or_else(|| Error::Manifest("no graph input".into()))?,
        attitudes: input("attitudes")
            .ok_or_else(|| Error::Manifest("no attitudes input".into()))?,
        seeds: input("seeds"),
        topics: param("topics")?,
        config: manifest
            .config
            .clone()
            .ok_or_else(|| Error::Manifest("no config recorded".into()))?,
        jobs: jobs.or(param("jobs")?).unwrap_or(1),
    })
}

fn from_flags(args: &SimulateArgs) -> Result<Plan, Failure> {
    let mut config = match &args.config {
        Some(path) => SimulationConfig::parse(&fs::read_to_string(path)?)?,
        None => SimulationConfig::default(),
    };
    let overrides = [
        ("model", args.model.clone()),
        ("ic_probability", args.probability.map(|p| p.to_string())),
        ("rounds", args.rounds.map(|r| r.to_string())),
        ("topic", args.topic.clone()),
        ("rng_seed", args.rng_seed.map(|s| s.to_string())),
        ("monte_carlo_runs", args.monte_carlo.map(|m| m.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(value) = value {
            config
                .set(key, &value)
                .map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    if args.topics == Some(0) {
        return Err(Failure::Usage("--topics must be at least 1".into()));
    }
    let required = |p: &Option<PathBuf>, flag: &str| {
        p.clone()
            .ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
    };
    Ok(Plan {
        graph: absolute(&required(&args.graph, "graph")?)?,
        attitudes: absolute(&required(&args.attitudes, "attitudes")?)?,
        seeds: args.seeds.as_deref().map(absolute).transpose()?,
        topics: args.topics,
        config,
        jobs: args.jobs.unwrap_or(1),
    })
}

pub fn run(args: SimulateArgs) -> Result<(), Failure> {
    let plan = match &args.manifest {
        Some(path) => from_manifest(path, args.jobs)?,
        None => from_flags(&args)?,
    };
    if plan.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let config = &plan.config;

    let graph = load_edge_list(open(&plan.graph)?, config.global_edge_probability)?;
    let topics = match plan.topics {
        Some(z) => z,
        None => infer_topic_count(open(&plan.attitudes)?)?,
    };
    let attitudes = load_attitude_table(open(&plan.attitudes)?, &graph, topics)?;
    let mut scenario = Scenario::new(graph, attitudes)?;
    if let Some(path) = &plan.seeds {
        let entries = load_seed_file(open(path)?, &scenario.graph, topics)?;
        scenario.apply_seeds(&entries)?;
    }

    let outcome = run_model(&scenario, config)?;
    let scores = if config.monte_carlo_runs > 1 {
        run_monte_carlo(&scenario, config, config.monte_carlo_runs, plan.jobs)?
    } else {
        ActivationFrequencies::from_final(&outcome.attitudes)
    };
    let curve = activation_curve(&outcome.trace, config.rounds)?;
    let graph = &scenario.graph;

    let mut out = OutputSet::create(&args.out_dir)?;
    out.write("trace.csv", |w| outcome.trace.write_events(graph, w))?;
    out.write("curve.csv", |w| write_curve(&curve, w))?;
    out.write("summary.csv", |w| outcome.trace.write_summaries(w))?;
    out.write("scores.csv", |w| scores.write(graph, w))?;
    out.write("activation.csv", |w| {
        GroundTruth::from_final(&outcome.attitudes).write(graph.labels(), w)
    })?;

    let mut manifest = RunManifest::new("simulate");
    manifest.params.push(("topics".into(), topics.to_string()));
    manifest.params.push(("jobs".into(), plan.jobs.to_string()));
    manifest.add_input("graph", &plan.graph)?;
    manifest.add_input("attitudes", &plan.attitudes)?;
    if let Some(seeds) = &plan.seeds {
        manifest.add_input("seeds", seeds)?;
    }
    manifest.config = Some(config.clone());
    manifest.outputs = out.digests();
    let text = manifest.to_text();
    out.write("manifest.txt", |w| {
        w.extend_from_slice(text.as_bytes());
        Ok::<(), Error>(())
    })?;
    eprintln!(
        "{} events over {} round(s); outputs in {}",
        outcome.trace.events.len(),
        config.rounds,
        out.path("").display()
    );
    Ok(())
}
