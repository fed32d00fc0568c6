//! Regular uncertainty distributions with closed-form CDFs and inverses.

use serde::{Deserialize, Serialize};

use crate::clip::AlphaClip;
use crate::error::{Error, InvalidParameter, Result};

/// `√3/π`, the logistic scale that gives a normal uncertain variable variance σ².
pub const LOGISTIC_SCALE: f64 = 1.732_050_807_568_877_2 / std::f64::consts::PI;

/// Raw, unvalidated distribution literal as it appears in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DistributionKind {
    Linear {
        a: f64,
        b: f64,
    },
    Normal {
        e: f64,
        sigma: f64,
    },
    Lognormal {
        e: f64,
        sigma: f64,
    },
    /// Elicited quantiles, interpolated linearly and held constant beyond the grid.
    #[serde(rename = "quantiles")]
    PiecewiseQuantile {
        alpha: Vec<f64>,
        q: Vec<f64>,
    },
}

/// A validated regular uncertainty distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionKind", into = "DistributionKind")]
pub struct RegularDistribution {
    kind: DistributionKind,
}

impl RegularDistribution {
    pub fn new(kind: DistributionKind) -> Result<Self, InvalidParameter> {
        validate(&kind)?;
        Ok(Self { kind })
    }

    pub fn linear(a: f64, b: f64) -> Result<Self, InvalidParameter> {
        Self::new(DistributionKind::Linear { a, b })
    }

    pub fn normal(e: f64, sigma: f64) -> Result<Self, InvalidParameter> {
        Self::new(DistributionKind::Normal { e, sigma })
    }

    pub fn lognormal(e: f64, sigma: f64) -> Result<Self, InvalidParameter> {
        Self::new(DistributionKind::Lognormal { e, sigma })
    }

    pub fn quantiles(alpha: Vec<f64>, q: Vec<f64>) -> Result<Self, InvalidParameter> {
        Self::new(DistributionKind::PiecewiseQuantile { alpha, q })
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn is_lognormal(&self) -> bool {
        matches!(self.kind, DistributionKind::Lognormal { .. })
    }

    /// `Φ(x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        match &self.kind {
            DistributionKind::Linear { a, b } => {
                if x <= *a {
                    0.0
                } else if x >= *b {
                    1.0
                } else {
                    (x - a) / (b - a)
                }
            }
            DistributionKind::Normal { e, sigma } => logistic_cdf(x, *e, *sigma),
            DistributionKind::Lognormal { e, sigma } => {
                if x <= 0.0 {
                    0.0
                } else {
                    logistic_cdf(x.ln(), *e, *sigma)
                }
            }
            DistributionKind::PiecewiseQuantile { alpha, q } => {
                let n = q.len();
                if x < q[0] {
                    return 0.0;
                }
                if x >= q[n - 1] {
                    return 1.0;
                }
                let i = q.partition_point(|&v| v <= x) - 1;
                alpha[i] + (alpha[i + 1] - alpha[i]) * (x - q[i]) / (q[i + 1] - q[i])
            }
        }
    }

    /// `Φ⁻¹(α)` with a domain check.
    pub fn inverse_cdf(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(alpha));
        }
        Ok(self.quantile(alpha))
    }

    /// Unchecked inverse for hot loops; `alpha` must lie in `[0, 1]`.
    #[inline]
    pub(crate) fn quantile(&self, alpha: f64) -> f64 {
        self.quantile_split(alpha, 1.0 - alpha)
    }

    /// `Φ⁻¹(1 - β)` evaluated from `β` without forming `1 - β` first.
    #[inline]
    pub(crate) fn upper_quantile(&self, beta: f64) -> f64 {
        self.quantile_split(1.0 - beta, beta)
    }

    /// Inverse at `alpha` given its complement `1 - alpha` separately, so the
    /// logistic variants keep full precision in both tails.
    #[inline]
    pub(crate) fn quantile_split(&self, alpha: f64, complement: f64) -> f64 {
        match &self.kind {
            DistributionKind::Linear { a, b } => {
                if alpha <= 0.5 {
                    a + (b - a) * alpha
                } else {
                    b - (b - a) * complement
                }
            }
            DistributionKind::Normal { e, sigma } => {
                e + sigma * LOGISTIC_SCALE * (alpha.ln() - complement.ln())
            }
            DistributionKind::Lognormal { e, sigma } => {
                (e + sigma * LOGISTIC_SCALE * (alpha.ln() - complement.ln())).exp()
            }
            DistributionKind::PiecewiseQuantile { alpha: grid, q } => {
                let n = grid.len();
                if alpha <= grid[0] {
                    return q[0];
                }
                if alpha >= grid[n - 1] {
                    return q[n - 1];
                }
                let i = grid.partition_point(|&g| g <= alpha) - 1;
                q[i] + (q[i + 1] - q[i]) * (alpha - grid[i]) / (grid[i + 1] - grid[i])
            }
        }
    }

    /// True when every value of the variable is strictly positive.
    pub fn has_positive_support(&self) -> bool {
        match &self.kind {
            DistributionKind::Linear { a, .. } => *a > 0.0,
            DistributionKind::Normal { .. } => false,
            DistributionKind::Lognormal { .. } => true,
            DistributionKind::PiecewiseQuantile { q, .. } => q[0] > 0.0,
        }
    }

    /// Smallest quantile the numerics will ever evaluate.
    pub fn support_floor(&self, clip: AlphaClip) -> f64 {
        self.quantile(clip.lo())
    }
}

impl TryFrom<DistributionKind> for RegularDistribution {
    type Error = InvalidParameter;

    fn try_from(kind: DistributionKind) -> Result<Self, InvalidParameter> {
        Self::new(kind)
    }
}

impl From<RegularDistribution> for DistributionKind {
    fn from(d: RegularDistribution) -> Self {
        d.kind
    }
}

fn logistic_cdf(x: f64, e: f64, sigma: f64) -> f64 {
    1.0 / (1.0 + ((e - x) / (sigma * LOGISTIC_SCALE)).exp())
}

fn validate(kind: &DistributionKind) -> Result<(), InvalidParameter> {
    let finite = |name: &str, v: f64| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(InvalidParameter::new(name, format!("{v} is not finite")))
        }
    };
    match kind {
        DistributionKind::Linear { a, b } => {
            finite("a", *a)?;
            finite("b", *b)?;
            if b <= a {
                return Err(InvalidParameter::new(
                    "b",
                    format!("b = {b} must exceed a = {a}"),
                ));
            }
        }
        DistributionKind::Normal { e, sigma } | DistributionKind::Lognormal { e, sigma } => {
            finite("e", *e)?;
            finite("sigma", *sigma)?;
            if *sigma <= 0.0 {
                return Err(InvalidParameter::new(
                    "sigma",
                    format!("sigma = {sigma} must be positive"),
                ));
            }
        }
        DistributionKind::PiecewiseQuantile { alpha, q } => {
            if alpha.len() != q.len() {
                return Err(InvalidParameter::new(
                    "q",
                    format!("{} quantiles for {} levels", q.len(), alpha.len()),
                ));
            }
            if alpha.len() < 2 {
                return Err(InvalidParameter::new(
                    "alpha",
                    "need at least two grid points",
                ));
            }
            for (i, (&a, &v)) in alpha.iter().zip(q).enumerate() {
                if !(a > 0.0 && a < 1.0) {
                    return Err(InvalidParameter::new(
                        format!("alpha[{i}]"),
                        format!("{a} outside (0, 1)"),
                    ));
                }
                finite(&format!("q[{i}]"), v)?;
            }
            if let Some(i) = (1..alpha.len()).find(|&i| alpha[i] <= alpha[i - 1]) {
                return Err(InvalidParameter::new(
                    format!("alpha[{i}]"),
                    "levels must be strictly increasing",
                ));
            }
            if let Some(i) = (1..q.len()).find(|&i| q[i] <= q[i - 1]) {
                return Err(InvalidParameter::new(
                    format!("q[{i}]"),
                    "quantiles must be strictly increasing",
                ));
            }
        }
    }
    Ok(())
}
