//! Expected values as integrals of inverse distributions over (0, 1).

use crate::clip::AlphaClip;
use crate::distribution::{DistributionKind, RegularDistribution, LOGISTIC_SCALE};
use crate::error::{Error, Result};
use crate::quad::integrate_unit;

fn check_finite_mean(dist: &RegularDistribution) -> Result<()> {
    if let DistributionKind::Lognormal { sigma, .. } = dist.kind() {
        // the upper quantile grows like (1-α)^(-σ√3/π)
        if sigma * LOGISTIC_SCALE >= 1.0 {
            return Err(Error::InfiniteMean { sigma: *sigma });
        }
    }
    Ok(())
}

/// `E[ξ] = ∫₀¹ Φ⁻¹(α) dα`.
pub fn expected_value(dist: &RegularDistribution, clip: AlphaClip) -> Result<f64> {
    check_finite_mean(dist)?;
    integrate_unit(|a, c| dist.quantile_split(a, c), clip)
}

/// `∫₀¹ (Φ⁻¹(α) - E[ξ])² dα`, the quantile form of the variance.
pub fn variance(dist: &RegularDistribution, clip: AlphaClip) -> Result<f64> {
    let mean = expected_value(dist, clip)?;
    integrate_unit(
        |a, c| {
            let d = dist.quantile_split(a, c) - mean;
            d * d
        },
        clip,
    )
}

/// `∫₀¹ Ψ⁻¹(α) / Φ⁻¹(1-α) dα`: the expected limiting ratio of a variable
/// increasing in `num` and decreasing in a positive `den`.
pub fn expected_ratio(
    num: &RegularDistribution,
    den: &RegularDistribution,
    clip: AlphaClip,
) -> Result<f64> {
    check_positive_support(den, clip)?;
    check_finite_mean(num)?;
    integrate_unit(
        |a, c| num.quantile_split(a, c) / den.quantile_split(c, a),
        clip,
    )
}

pub(crate) fn check_positive_support(dist: &RegularDistribution, clip: AlphaClip) -> Result<()> {
    let floor = dist.support_floor(clip);
    if dist.has_positive_support() && floor > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveSupport {
            alpha: clip.lo(),
            value: floor,
        })
    }
}
