//! Shared fixtures for the criterion benches.

use uape_core::datasets::DatasetShape;
use uape_core::{generate_synthetic, Scenario};

/// Synthetic scenario with the given corpus shape.
pub fn scenario(shape: DatasetShape, rng_seed: u64) -> Scenario {
    let d = generate_synthetic(
        shape.nodes,
        shape.edges,
        shape.topics,
        shape.seeds,
        rng_seed,
    )
    .expect("dataset shapes are feasible");
    Scenario::new(d.graph, d.attitudes).expect("generator output is consistent")
}
