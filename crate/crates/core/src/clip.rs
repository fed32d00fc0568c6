use serde::{Deserialize, Serialize};

use crate::error::InvalidParameter;

pub const DEFAULT_ALPHA_CLIP: f64 = 1e-9;

/// Quantile arguments are evaluated on `[delta, 1 - delta]`; anything closer to
/// the endpoints is handled by tail corrections or root conventions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaClip {
    delta: f64,
}

impl AlphaClip {
    pub fn new(delta: f64) -> Result<Self, InvalidParameter> {
        if !(delta > 0.0 && delta < 1e-3) {
            return Err(InvalidParameter::new(
                "alpha_clip",
                format!("clip {delta} must lie in (0, 1e-3)"),
            ));
        }
        Ok(Self { delta })
    }

    #[inline]
    pub fn delta(self) -> f64 {
        self.delta
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.delta
    }

    #[inline]
    pub fn hi(self) -> f64 {
        1.0 - self.delta
    }

    pub fn clamp(self, alpha: f64) -> f64 {
        alpha.clamp(self.lo(), self.hi())
    }
}

impl Default for AlphaClip {
    fn default() -> Self {
        Self {
            delta: DEFAULT_ALPHA_CLIP,
        }
    }
}
