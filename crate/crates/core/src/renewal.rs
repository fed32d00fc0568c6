//! Uncertain renewal and renewal-reward processes: exact finite-`t`
//! distributions and their long-run limit objects.

use crate::clip::AlphaClip;
use crate::distribution::{DistributionKind, RegularDistribution, LOGISTIC_SCALE};
use crate::error::{Error, InvalidParameter, Result};
use crate::expectation::check_positive_support;
use crate::quad::integrate_unit;

/// Count term at which the renewal-reward maximum is considered saturated.
const SATURATION: f64 = 1.0 - 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RenewalSpec {
    interarrival: RegularDistribution,
    severity: RegularDistribution,
    k_cap: u64,
}

impl RenewalSpec {
    pub fn new(
        interarrival: RegularDistribution,
        severity: RegularDistribution,
        k_cap: u64,
    ) -> Result<Self, InvalidParameter> {
        if !interarrival.has_positive_support() {
            return Err(InvalidParameter::new(
                "interarrival",
                "support must be strictly positive",
            ));
        }
        if !has_nonnegative_support(&severity) {
            return Err(InvalidParameter::new(
                "severity",
                "support must be nonnegative",
            ));
        }
        if k_cap == 0 {
            return Err(InvalidParameter::new("k_cap", "must be at least 1"));
        }
        Ok(Self {
            interarrival,
            severity,
            k_cap,
        })
    }

    pub fn interarrival(&self) -> &RegularDistribution {
        &self.interarrival
    }

    pub fn severity(&self) -> &RegularDistribution {
        &self.severity
    }

    pub fn k_cap(&self) -> u64 {
        self.k_cap
    }
}

pub(crate) fn has_nonnegative_support(dist: &RegularDistribution) -> bool {
    match dist.kind() {
        DistributionKind::Linear { a, .. } => *a >= 0.0,
        DistributionKind::Normal { .. } => false,
        DistributionKind::Lognormal { .. } => true,
        DistributionKind::PiecewiseQuantile { q, .. } => q[0] >= 0.0,
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(InvalidParameter::new("t", format!("time {t} must be positive")).into())
    }
}

/// `Υₜ(x) = 1 - Φ(t / (⌊x⌋ + 1))`, the distribution of the renewal count `Nₜ`.
pub fn renewal_count_cdf(spec: &RenewalSpec, t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 - spec.interarrival.cdf(t / (x.floor() + 1.0)))
}

/// `Υₜ(x) = max_k (1 - Φ(t/(k+1))) ∧ Ψ(x/k)`, the distribution of the total
/// reward `Rₜ`, with `Ψ(x/0) = 1` for the empty sum.
pub fn renewal_reward_cdf(spec: &RenewalSpec, t: f64, x: f64) -> Result<f64> {
    check_time(t)?;
    if x < 0.0 {
        return Err(
            InvalidParameter::new("x", format!("reward level {x} must be nonnegative")).into(),
        );
    }
    let count = |k: f64| 1.0 - spec.interarrival.cdf(t / (k + 1.0));
    let mut best = count(0.0);
    if best >= SATURATION {
        return Ok(best.min(1.0));
    }
    for k in 1..=spec.k_cap {
        let k = k as f64;
        let reward = spec.severity.cdf(x / k);
        // later terms are bounded by this (decreasing) reward term
        if reward <= best {
            break;
        }
        let c = count(k);
        best = best.max(c.min(reward));
        if c >= SATURATION {
            break;
        }
    }
    Ok(best)
}

/// `lim E[Nₜ]/t = ∫₀¹ dα / Φ⁻¹(α)`.
pub fn long_run_renewal_rate(spec: &RenewalSpec, clip: AlphaClip) -> Result<f64> {
    check_positive_support(&spec.interarrival, clip)?;
    integrate_unit(|a, c| 1.0 / spec.interarrival.quantile_split(a, c), clip)
}

/// Inverse distribution of the limiting reward rate `η₁/ξ₁`: `Ψ⁻¹(α) / Φ⁻¹(1-α)`.
pub fn reward_rate_inverse(spec: &RenewalSpec, alpha: f64, clip: AlphaClip) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(alpha));
    }
    check_positive_support(&spec.interarrival, clip)?;
    let complement = 1.0 - alpha;
    Ok(spec.severity.quantile_split(alpha, complement)
        / spec.interarrival.quantile_split(complement, alpha))
}

/// Increment of a Liu process over a span `t`: normal with mean 0 and standard deviation `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiuIncrement {
    t: f64,
}

impl LiuIncrement {
    pub fn new(t: f64) -> Result<Self, InvalidParameter> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(InvalidParameter::new(
                "t",
                format!("scale {t} must be positive"),
            ));
        }
        Ok(Self { t })
    }

    pub fn unit() -> Self {
        Self { t: 1.0 }
    }

    pub fn scale(self) -> f64 {
        self.t
    }

    /// `t (√3/π) ln(α / (1-α))`; odd about `α = 1/2`.
    pub fn inverse(self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(alpha));
        }
        Ok(self.t * LOGISTIC_SCALE * symmetric_logit(alpha))
    }
}

/// `ln(α / (1-α))` computed from the smaller of the two levels so that
/// exact complements give exact negatives.
#[inline]
pub(crate) fn symmetric_logit(alpha: f64) -> f64 {
    if alpha <= 0.5 {
        let small = alpha;
        small.ln() - (1.0 - small).ln()
    } else {
        let small = 1.0 - alpha;
        (1.0 - small).ln() - small.ln()
    }
}
