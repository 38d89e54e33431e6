use uape_core::datasets::dataset_shape;
use uape_core::manifest::RunManifest;
use uape_core::{generate_synthetic, DirectedGraph, Error};

use crate::files::OutputSet;
use crate::{Failure, GenerateArgs};

pub fn run(args: GenerateArgs) -> Result<(), Failure> {
    let preset = match &args.preset {
        Some(name) => Some(
            dataset_shape(name)
                .ok_or_else(|| Failure::Usage(format!("unknown preset `{name}`")))?,
        ),
        None => None,
    };
    let pick = |flag: Option<usize>, from_preset: Option<usize>, name: &str| {
        flag.or(from_preset)
            .ok_or_else(|| Failure::Usage(format!("missing --{name}")))
    };
    let nodes = pick(args.nodes, preset.map(|p| p.nodes), "nodes")?;
    let edges = pick(args.edges, preset.map(|p| p.edges), "edges")?;
    let topics = pick(args.topics, preset.map(|p| p.topics), "topics")?;
    let seeds = pick(args.seeds, preset.map(|p| p.seeds), "seeds")?;
    if topics == 0 {
        return Err(Failure::Usage("--topics must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&args.edge_probability) {
        return Err(Failure::Usage(
            "--edge-probability must lie in [0, 1]".into(),
        ));
    }

    let mut data = generate_synthetic(nodes, edges, topics, seeds, args.rng_seed)?;
    if args.edge_probability != 1.0 {
        let reweighted: Vec<_> = data
            .graph
            .edges()
            .iter()
            .map(|e| (e.source.0, e.target.0, args.edge_probability))
            .collect();
        data.graph = DirectedGraph::from_edges(nodes, &reweighted)?;
    }

    let mut out = OutputSet::create(&args.out_dir)?;
    out.write("edges.csv", |w| data.graph.write_edge_list(w))?;
    out.write("attitudes.csv", |w| {
        data.attitudes.write_table(&data.graph, w)
    })?;
    out.write("seeds.csv", |w| data.write_seed_file(w))?;

    let mut manifest = RunManifest::new("generate");
    for (k, v) in [
        ("nodes", nodes.to_string()),
        ("edges", edges.to_string()),
        ("topics", topics.to_string()),
        ("seeds", seeds.to_string()),
        ("edge_probability", args.edge_probability.to_string()),
        ("rng_seed", args.rng_seed.to_string()),
    ] {
        manifest.params.push((k.to_owned(), v));
    }
    manifest.outputs = out.digests();
    let text = manifest.to_text();
    out.write("manifest.txt", |w| {
        w.extend_from_slice(text.as_bytes());
        Ok::<(), Error>(())
    })?;
    eprintln!(
        "generated {} nodes, {} edges, {} topic(s), {} seed(s) per topic in {}",
        nodes,
        edges,
        topics,
        seeds,
        args.out_dir.display()
    );
    Ok(())
}
