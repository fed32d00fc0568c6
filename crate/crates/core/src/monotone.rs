//! Strictly monotone functions of independent regular uncertain variables.
//!
//! A function increasing in its first `m` arguments and decreasing in the rest
//! has inverse distribution `f(Φ₁⁻¹(α), …, Φₘ⁻¹(α), Φₘ₊₁⁻¹(1-α), …)`, and the
//! measure of `{f ≤ 0}` is the root of that expression in `α`.

use std::fmt;
use std::sync::Arc;

use crate::clip::AlphaClip;
use crate::distribution::RegularDistribution;
use crate::error::{Error, Result};
use crate::roots::{bisect_increasing, Bracket, BISECTION_MAX_ITER, BISECTION_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct MonotoneFunctionSpec {
    increasing: usize,
    decreasing: usize,
    evaluator: Evaluator,
}

impl fmt::Debug for MonotoneFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneFunctionSpec")
            .field("increasing", &self.increasing)
            .field("decreasing", &self.decreasing)
            .finish_non_exhaustive()
    }
}

impl MonotoneFunctionSpec {
    /// `f` must be strictly increasing in its first `increasing` arguments and
    /// strictly decreasing in the following `decreasing` ones.
    pub fn new<F>(increasing: usize, decreasing: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            increasing,
            decreasing,
            evaluator: Arc::new(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.increasing + self.decreasing
    }

    pub fn direction(&self, index: usize) -> Direction {
        if index < self.increasing {
            Direction::Increasing
        } else {
            Direction::Decreasing
        }
    }

    pub fn eval(&self, args: &[f64]) -> f64 {
        (self.evaluator)(args)
    }

    fn check_arity(&self, dists: &[RegularDistribution]) -> Result<()> {
        if dists.len() != self.arity() {
            return Err(Error::Arity {
                expected: self.arity(),
                got: dists.len(),
            });
        }
        Ok(())
    }

    fn composed(&self, dists: &[RegularDistribution], alpha: f64, buf: &mut Vec<f64>) -> f64 {
        buf.clear();
        let complement = 1.0 - alpha;
        buf.extend(
            dists
                .iter()
                .enumerate()
                .map(|(i, d)| match self.direction(i) {
                    Direction::Increasing => d.quantile_split(alpha, complement),
                    Direction::Decreasing => d.quantile_split(complement, alpha),
                }),
        );
        self.eval(buf)
    }
}

/// Inverse distribution of `f(ξ₁, …, ξₙ)` at level `alpha`.
pub fn monotone_inverse(
    spec: &MonotoneFunctionSpec,
    dists: &[RegularDistribution],
    alpha: f64,
) -> Result<f64> {
    spec.check_arity(dists)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(alpha));
    }
    Ok(spec.composed(dists, alpha, &mut Vec::with_capacity(dists.len())))
}

/// Measure of `{f(ξ₁, …, ξₙ) ≤ 0}`: the root of the composed inverse in `α`,
/// with 1 when it is negative throughout and 0 when positive throughout.
pub fn crisp_measure_nonpositive(
    spec: &MonotoneFunctionSpec,
    dists: &[RegularDistribution],
    clip: AlphaClip,
) -> Result<f64> {
    spec.check_arity(dists)?;
    let mut buf = Vec::with_capacity(dists.len());
    let bracket = bisect_increasing(
        |a| spec.composed(dists, a, &mut buf),
        clip.lo(),
        clip.hi(),
        BISECTION_TOL,
        BISECTION_MAX_ITER,
    )?;
    Ok(match bracket {
        Bracket::Negative => 1.0,
        Bracket::Positive => 0.0,
        Bracket::Root { at, .. } => at,
    })
}
