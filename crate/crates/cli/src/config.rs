//! Scenario config files: parsing, overrides and validation.

use std::path::Path;

use ruinlab_core::{
    AlphaClip, DistributionKind, InvalidParameter, PerturbationSpec, RegularDistribution,
    ReinsuranceTerms, RetentionProblem, RiskScenario,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const CLIP_ENV: &str = "RUINLAB_ALPHA_CLIP";

fn default_k_cap() -> u64 {
    ruinlab_core::ruin::DEFAULT_K_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub u: f64,
    pub c: f64,
    #[serde(default = "default_k_cap")]
    pub k_cap: u64,
    pub interarrival: DistributionKind,
    pub severity: DistributionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retention_x: Option<f64>,
    #[serde(default)]
    pub perturbation: PerturbationSpec,
}

/// Command-line values that shadow the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub u: Option<f64>,
    pub epsilon: Option<f64>,
    pub k_cap: Option<u64>,
    pub x: Option<f64>,
}

/// A validated config.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub scenario: RiskScenario,
    pub terms: ReinsuranceTerms,
    pub perturbation: PerturbationSpec,
    pub epsilon: Option<f64>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        if let Some(u) = o.u {
            self.u = u;
        }
        if let Some(e) = o.epsilon {
            self.epsilon = Some(e);
        }
        if let Some(k) = o.k_cap {
            self.k_cap = k;
        }
        if let Some(x) = o.x {
            self.retention_x = Some(x);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self, clip: AlphaClip) -> Result<Model, InvalidParameter> {
        let interarrival = RegularDistribution::new(self.interarrival.clone())
            .map_err(|e| e.within("interarrival"))?;
        let severity =
            RegularDistribution::new(self.severity.clone()).map_err(|e| e.within("severity"))?;
        let scenario =
            RiskScenario::new(self.u, self.c, interarrival, severity, self.k_cap)?.with_clip(clip);
        let terms = match (self.rho, self.theta) {
            (Some(rho), Some(theta)) => {
                ReinsuranceTerms::new(rho, theta, self.retention_x.unwrap_or(1.0)).map_err(|e| {
                    match e.field.as_str() {
                        "x" => InvalidParameter::new("retention_x", e.reason),
                        _ => e,
                    }
                })?
            }
            (None, None) => {
                if self.retention_x.is_some() {
                    return Err(InvalidParameter::new(
                        "retention_x",
                        "requires rho and theta",
                    ));
                }
                ReinsuranceTerms::none()
            }
            (Some(_), None) => {
                return Err(InvalidParameter::new(
                    "theta",
                    "rho and theta must be given together",
                ))
            }
            (None, Some(_)) => {
                return Err(InvalidParameter::new(
                    "rho",
                    "rho and theta must be given together",
                ))
            }
        };
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(InvalidParameter::new(
                    "epsilon",
                    format!("{eps} outside (0, 1)"),
                ));
            }
        }
        Ok(Model {
            scenario,
            terms,
            perturbation: self.perturbation,
            epsilon: self.epsilon,
        })
    }
}

impl Model {
    /// The retention program, when the config carries loads and a ceiling.
    pub fn retention_problem(&self) -> Result<Option<RetentionProblem>, CliError> {
        match self.epsilon {
            Some(eps) if self.terms.is_reinsured() => Ok(Some(RetentionProblem::new(
                self.scenario.clone(),
                self.terms.rho(),
                self.terms.theta(),
                eps,
                self.perturbation,
            )?)),
            _ => Ok(None),
        }
    }

    pub fn require_retention(&self) -> Result<RetentionProblem, CliError> {
        if !self.terms.is_reinsured() {
            return Err(CliError::Validation(
                "rho, theta: required for retention".into(),
            ));
        }
        if self.epsilon.is_none() {
            return Err(CliError::Validation(
                "epsilon: required for retention".into(),
            ));
        }
        Ok(self
            .retention_problem()?
            .expect("loads and epsilon present"))
    }
}

/// Quantile clip from the environment, or the default.
pub fn alpha_clip_from_env() -> Result<AlphaClip, CliError> {
    match std::env::var(CLIP_ENV) {
        Err(_) => Ok(AlphaClip::default()),
        Ok(raw) => {
            let delta: f64 = raw.trim().parse().map_err(|_| {
                CliError::Validation(format!("{CLIP_ENV}: cannot parse {raw:?} as a number"))
            })?;
            AlphaClip::new(delta)
                .map_err(|e| CliError::Validation(format!("{CLIP_ENV}: {}", e.reason)))
        }
    }
}
