//! One-parameter sweeps over capital, claim horizon or retention.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{InvalidParameter, Result};
use crate::retention::{optimal_retention, retained_umr, RetentionProblem};
use crate::ruin::{umr_perturbed, PerturbationSpec, ReinsuranceTerms, RiskScenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    U,
    KCap,
    X,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::U => "u",
            SweepAxis::KCap => "k",
            SweepAxis::X => "x",
        }
    }
}

/// Fixed inputs of a sweep. With `retention` set, rows on the `u` and `k`
/// axes also carry the optimal retention.
#[derive(Debug, Clone)]
pub struct SweepBase {
    pub scenario: RiskScenario,
    pub terms: ReinsuranceTerms,
    pub perturbation: PerturbationSpec,
    pub retention: Option<RetentionProblem>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub umr: Option<f64>,
    pub converged_in_k: Option<bool>,
    pub x_star: Option<f64>,
    pub objective: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn failed(axis_value: f64, msg: String) -> Self {
        Self {
            axis_value,
            umr: None,
            converged_in_k: None,
            x_star: None,
            objective: None,
            error: Some(msg),
        }
    }

    pub fn is_failed(&self) -> bool {
        self.umr.is_none()
    }
}

pub fn validate_grid(grid: &[f64]) -> Result<(), InvalidParameter> {
    if grid.is_empty() {
        return Err(InvalidParameter::new("grid", "empty"));
    }
    if let Some(v) = grid.iter().find(|v| !v.is_finite()) {
        return Err(InvalidParameter::new(
            "grid",
            format!("non-finite value {v}"),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(InvalidParameter::new(
            "grid",
            "values must be strictly increasing",
        ));
    }
    Ok(())
}

/// Evaluates one row per grid value, in parallel, returned in grid order.
/// Failures become row-level error markers. `k` values are rounded to the
/// nearest integer.
pub fn sweep(
    base: &SweepBase,
    axis: SweepAxis,
    grid: &[f64],
) -> Result<Vec<SweepRow>, InvalidParameter> {
    validate_grid(grid)?;
    Ok(grid
        .par_iter()
        .map(|&v| row(base, axis, v).unwrap_or_else(|e| SweepRow::failed(v, e.to_string())))
        .collect())
}

fn row(base: &SweepBase, axis: SweepAxis, v: f64) -> Result<SweepRow> {
    match axis {
        SweepAxis::U | SweepAxis::KCap => {
            let (scn, problem) = match axis {
                SweepAxis::U => (
                    base.scenario.with_u(v)?,
                    base.retention.as_ref().map(|p| p.with_u(v)).transpose()?,
                ),
                _ => {
                    let k = v.round().max(0.0) as u64;
                    (
                        base.scenario.with_k_cap(k)?,
                        base.retention
                            .as_ref()
                            .map(|p| p.with_k_cap(k))
                            .transpose()?,
                    )
                }
            };
            let report = umr_perturbed(&scn, &base.terms, base.perturbation)?;
            let mut out = SweepRow {
                axis_value: v,
                umr: Some(report.alpha),
                converged_in_k: Some(report.converged_in_k),
                x_star: None,
                objective: None,
                error: None,
            };
            if let Some(p) = problem {
                match optimal_retention(&p) {
                    Ok(r) => {
                        out.x_star = Some(r.x_star);
                        out.objective = Some(r.objective);
                    }
                    Err(e) => out.error = Some(e.to_string()),
                }
            }
            Ok(out)
        }
        SweepAxis::X => {
            let terms = base.terms.with_x(v)?;
            let umr = retained_umr(&base.scenario, &terms, base.perturbation)?;
            let objective = base.retention.as_ref().map(|p| p.objective().at(v));
            Ok(SweepRow {
                axis_value: v,
                umr: Some(umr),
                converged_in_k: None,
                x_star: None,
                objective,
                error: None,
            })
        }
    }
}
