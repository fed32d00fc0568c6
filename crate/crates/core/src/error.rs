use thiserror::Error;

/// Rejected construction parameters. `field` names the offending input.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {reason}")]
pub struct InvalidParameter {
    pub field: String,
    pub reason: String,
}

impl InvalidParameter {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Prefixes the field path, e.g. `b` becomes `interarrival.b`.
    pub fn within(mut self, parent: &str) -> Self {
        self.field = format!("{parent}.{}", self.field);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Invalid(#[from] InvalidParameter),

    #[error("probability level {0} outside [0, 1]")]
    Domain(f64),

    #[error("non-finite value {value} at alpha = {alpha}")]
    NonFinite { alpha: f64, value: f64 },

    #[error("infinite mean: lognormal sigma {sigma} >= pi/sqrt(3)")]
    InfiniteMean { sigma: f64 },

    #[error("integral diverges near alpha = {alpha}")]
    Divergent { alpha: f64 },

    #[error("quantile support touches or crosses zero (inverse cdf {value} at alpha = {alpha})")]
    NonPositiveSupport { alpha: f64, value: f64 },

    #[error("arity mismatch: function takes {expected} arguments, got {got} distributions")]
    Arity { expected: usize, got: usize },

    #[error("retention x = 0 is not defined for this formula (division by x)")]
    ZeroRetention,

    #[error("no feasible retention: smallest ruin measure on the grid is {min_umr}")]
    NoFeasibleRetention { min_umr: f64 },
}

impl Error {
    /// True for errors produced by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::Invalid(_) | Error::Arity { .. } | Error::NoFeasibleRetention { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
