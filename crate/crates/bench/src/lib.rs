//! Shared fixtures for the benchmarks.

use ruinlab_core::{PerturbationSpec, RegularDistribution, RetentionProblem, RiskScenario};

/// Linear(1, 3) gaps, Lognormal(2, 1) claims, premium rate 26.
pub fn example_scenario(u: f64, k_cap: u64) -> RiskScenario {
    RiskScenario::new(
        u,
        26.0,
        RegularDistribution::linear(1.0, 3.0).expect("valid"),
        RegularDistribution::lognormal(2.0, 1.0).expect("valid"),
        k_cap,
    )
    .expect("valid")
}

pub fn example_retention(u: f64, k_cap: u64, epsilon: f64) -> RetentionProblem {
    RetentionProblem::new(
        example_scenario(u, k_cap),
        0.9,
        0.8,
        epsilon,
        PerturbationSpec::disabled(),
    )
    .expect("valid")
}
