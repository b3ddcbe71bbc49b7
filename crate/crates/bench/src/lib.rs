//! Shared fixtures for the benchmark targets.

use radarsim_core::config::ExperimentConfig;
use radarsim_core::topology::{generate_random_graph, Graph};

/// A medium substrate: 1000 nodes at average degree 6, the density used by
/// the desk-scale experiments.
pub fn medium_graph() -> Graph {
    generate_random_graph(1000, 3000, 7).unwrap()
}

/// A short but complete experiment covering every pipeline stage.
pub fn small_experiment() -> ExperimentConfig {
    ExperimentConfig {
        n: 500,
        m: 1500,
        lb_fraction: 0.25,
        rewires_per_round: 1,
        rounds: 20,
        num_destinations: 40,
        round_period_s: 900,
        seed: 11,
    }
}
