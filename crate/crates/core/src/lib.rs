//! Uncertain ruin measures for insurance surplus processes and optimal
//! proportional-reinsurance retention.

pub mod clip;
pub mod distribution;
pub mod error;
pub mod expectation;
pub mod monotone;
pub mod quad;
pub mod renewal;
pub mod retention;
pub mod roots;
pub mod ruin;
pub mod sweep;

pub use clip::{AlphaClip, DEFAULT_ALPHA_CLIP};
pub use distribution::{DistributionKind, RegularDistribution};
pub use error::{Error, InvalidParameter, Result};
pub use expectation::{expected_ratio, expected_value, variance};
pub use monotone::{crisp_measure_nonpositive, monotone_inverse, Direction, MonotoneFunctionSpec};
pub use renewal::{
    long_run_renewal_rate, renewal_count_cdf, renewal_reward_cdf, reward_rate_inverse,
    LiuIncrement, RenewalSpec,
};
pub use retention::{
    grid_scan, optimal_retention, retained_umr, wealth_rate, RetentionProblem, RetentionResult,
    SolveMethod, WealthObjective,
};
pub use ruin::{
    maximal_partial_sum, maximal_perturbed_sum, partial_sum_inverse, premium_feasibility,
    ruin_index_reference, umr, umr_perturbed, PerturbationMode, PerturbationSpec, PremiumCheck,
    ReinsuranceTerms, RiskScenario, UmrReport,
};
pub use sweep::{sweep, SweepAxis, SweepBase, SweepRow};
