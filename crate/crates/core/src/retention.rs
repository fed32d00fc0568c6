//! Optimal quota-share retention under a ceiling on the ruin measure.
//!
//! The long-run wealth rate is linear in the retention `x`:
//! `[x(1+ρ) - (ρ-θ)]c - x E[η/ξ]`. With a positive slope and a ruin measure
//! nondecreasing in `x` the optimum is the largest feasible retention.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, InvalidParameter, Result};
use crate::expectation::expected_ratio;
use crate::ruin::{solve_umr, PerturbationSpec, ReinsuranceTerms, RiskScenario};

/// Slack allowed on `UMR(x*) <= ε`.
pub const CONSTRAINT_TOL: f64 = 1e-6;
/// Bisection on the retention stops once the bracket is this narrow.
pub const RETENTION_TOL: f64 = 1e-6;
/// Boundary bisection and grid scan must agree this closely in `x`.
pub const CROSS_CHECK_TOL: f64 = 2e-3;
pub const MONOTONE_POINTS: usize = 21;
pub const SCAN_POINTS: usize = 1000;
/// Smallest retention tried when every monotonicity grid point is infeasible.
const SMALLEST_RETENTION: f64 = 1e-6;
const MONOTONE_SLACK: f64 = 1e-9;

/// `x ↦ slope·x + intercept`, with `slope = (1+ρ)c - E[η/ξ]` and
/// `intercept = -(ρ-θ)c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WealthObjective {
    slope: f64,
    intercept: f64,
    ratio: f64,
}

impl WealthObjective {
    pub fn new(rho: f64, theta: f64, c: f64, ratio: f64) -> Self {
        Self {
            slope: (1.0 + rho) * c - ratio,
            intercept: -(rho - theta) * c,
            ratio,
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// `E[η/ξ]` as computed by [`expected_ratio`].
    pub fn ratio(&self) -> f64 {
        self.ratio
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetentionProblem {
    scenario: RiskScenario,
    rho: f64,
    theta: f64,
    epsilon: f64,
    perturbation: PerturbationSpec,
    objective: WealthObjective,
}

impl RetentionProblem {
    /// Validates the loads and `ε`, then computes and caches `E[η/ξ]`.
    pub fn new(
        scenario: RiskScenario,
        rho: f64,
        theta: f64,
        epsilon: f64,
        perturbation: PerturbationSpec,
    ) -> Result<Self> {
        ReinsuranceTerms::new(rho, theta, 1.0)?;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(
                InvalidParameter::new("epsilon", format!("{epsilon} outside (0, 1)")).into(),
            );
        }
        let ratio = expected_ratio(
            scenario.severity(),
            scenario.interarrival(),
            scenario.clip(),
        )?;
        let objective = WealthObjective::new(rho, theta, scenario.c(), ratio);
        Ok(Self {
            scenario,
            rho,
            theta,
            epsilon,
            perturbation,
            objective,
        })
    }

    pub fn with_u(&self, u: f64) -> Result<Self, InvalidParameter> {
        Ok(Self {
            scenario: self.scenario.with_u(u)?,
            ..self.clone()
        })
    }

    pub fn with_k_cap(&self, k_cap: u64) -> Result<Self, InvalidParameter> {
        Ok(Self {
            scenario: self.scenario.with_k_cap(k_cap)?,
            ..self.clone()
        })
    }

    pub fn scenario(&self) -> &RiskScenario {
        &self.scenario
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn perturbation(&self) -> PerturbationSpec {
        self.perturbation
    }

    pub fn objective(&self) -> &WealthObjective {
        &self.objective
    }

    pub fn terms(&self, x: f64) -> Result<ReinsuranceTerms, InvalidParameter> {
        ReinsuranceTerms::new(self.rho, self.theta, x)
    }

    /// Ruin measure at retention `x`.
    pub fn constraint_umr(&self, x: f64) -> Result<f64> {
        retained_umr(&self.scenario, &self.terms(x)?, self.perturbation)
    }
}

/// Long-run wealth rate at retention `x`.
pub fn wealth_rate(problem: &RetentionProblem, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(InvalidParameter::new("x", format!("retention {x} outside [0, 1]")).into());
    }
    Ok(problem.objective.at(x))
}

/// UMR at the retention held in `terms`, without the `k_cap` doubling check.
///
/// Ceding everything at a positive net load leaves the surplus drifting down
/// at rate `(ρ-θ)c`, so ruin is certain at `x = 0`.
pub fn retained_umr(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    pert: PerturbationSpec,
) -> Result<f64> {
    if terms.x() == 0.0 && terms.is_reinsured() {
        return Ok(1.0);
    }
    Ok(solve_umr(scn, terms, pert, scn.k_cap())?.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    BoundaryBisection,
    GridScan,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::BoundaryBisection => "boundary_bisection",
            SolveMethod::GridScan => "grid_scan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RetentionResult {
    pub x_star: f64,
    pub objective: f64,
    pub umr_at_x: f64,
    /// The UMR ceiling is active: the unconstrained optimum is infeasible.
    pub binding: bool,
    pub method: SolveMethod,
}

/// Retentions used for the monotonicity check: 21 evenly spaced points on
/// `[0.05, 1]`. `x = 0` is left out since its value comes from the drift rule.
fn monotone_grid() -> Vec<f64> {
    (0..MONOTONE_POINTS)
        .map(|i| 0.05 + 0.95 * i as f64 / (MONOTONE_POINTS - 1) as f64)
        .collect()
}

/// Maximizes the objective over feasible points of `x = i/1000`, `i = 1..=1000`.
pub fn grid_scan(problem: &RetentionProblem) -> Result<RetentionResult> {
    let xs: Vec<f64> = (1..=SCAN_POINTS)
        .map(|i| i as f64 / SCAN_POINTS as f64)
        .collect();
    let umrs = xs
        .par_iter()
        .map(|&x| problem.constraint_umr(x))
        .collect::<Result<Vec<_>>>()?;
    let best = xs
        .iter()
        .zip(&umrs)
        .filter(|(_, u)| **u <= problem.epsilon + CONSTRAINT_TOL)
        .max_by(|a, b| {
            problem
                .objective
                .at(*a.0)
                .total_cmp(&problem.objective.at(*b.0))
        });
    match best {
        Some((&x, &umr_at_x)) => Ok(finish(problem, x, umr_at_x, SolveMethod::GridScan)?),
        None => Err(Error::NoFeasibleRetention {
            min_umr: umrs.iter().copied().fold(f64::INFINITY, f64::min),
        }),
    }
}

fn finish(
    problem: &RetentionProblem,
    x: f64,
    umr_at_x: f64,
    method: SolveMethod,
) -> Result<RetentionResult> {
    let slope = problem.objective.slope;
    let unconstrained = if slope > 0.0 { 1.0 } else { 0.0 };
    let binding = problem.constraint_umr(unconstrained)? > problem.epsilon
        || (umr_at_x - problem.epsilon).abs() <= CONSTRAINT_TOL;
    Ok(RetentionResult {
        x_star: x,
        objective: problem.objective.at(x),
        umr_at_x,
        binding,
        method,
    })
}

/// Largest `x` with `UMR(x) <= ε`, assuming `UMR` nondecreasing in `x`.
fn boundary_bisection(
    problem: &RetentionProblem,
    grid: &[f64],
    umrs: &[f64],
) -> Result<RetentionResult> {
    let eps = problem.epsilon;
    let last = umrs.len() - 1;
    if umrs[last] <= eps {
        return finish(problem, 1.0, umrs[last], SolveMethod::BoundaryBisection);
    }
    let (mut lo, mut lo_umr, mut hi) = match umrs.iter().rposition(|&u| u <= eps) {
        Some(i) => (grid[i], umrs[i], grid[i + 1]),
        None => {
            let u = problem.constraint_umr(SMALLEST_RETENTION)?;
            if u > eps {
                return Err(Error::NoFeasibleRetention {
                    min_umr: umrs.iter().copied().fold(u, f64::min),
                });
            }
            (SMALLEST_RETENTION, u, grid[0])
        }
    };
    while hi - lo > RETENTION_TOL {
        let mid = 0.5 * (lo + hi);
        let u = problem.constraint_umr(mid)?;
        if u <= eps {
            lo = mid;
            lo_umr = u;
        } else {
            hi = mid;
        }
    }
    finish(problem, lo, lo_umr, SolveMethod::BoundaryBisection)
}

/// Maximizes the wealth rate subject to `UMR(x) <= ε`.
///
/// Uses bisection on the feasibility boundary when the objective slope is
/// positive and the ruin measure is numerically nondecreasing in `x`, and
/// falls back to [`grid_scan`] otherwise or when the two disagree.
pub fn optimal_retention(problem: &RetentionProblem) -> Result<RetentionResult> {
    let grid = monotone_grid();
    let umrs = grid
        .iter()
        .map(|&x| problem.constraint_umr(x))
        .collect::<Result<Vec<_>>>()?;
    let monotone = umrs.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    let scan = grid_scan(problem);
    if !(monotone && problem.objective.slope > 0.0) {
        return scan;
    }
    let bisected = boundary_bisection(problem, &grid, &umrs)?;
    match scan {
        Ok(s) if (s.x_star - bisected.x_star).abs() > CROSS_CHECK_TOL => Ok(s),
        _ => Ok(bisected),
    }
}
