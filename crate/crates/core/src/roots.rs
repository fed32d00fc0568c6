//! Bracketing bisection for monotone scalar functions.

use crate::error::{Error, Result};

pub const BISECTION_TOL: f64 = 1e-10;
pub const BISECTION_MAX_ITER: usize = 200;

/// Outcome of bracketing a monotone function on a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    /// Negative on the whole interval.
    Negative,
    /// Positive on the whole interval.
    Positive,
    Root {
        at: f64,
        iterations: usize,
    },
}

/// Finds the sign change of a nondecreasing `g` on `[lo, hi]`.
///
/// Endpoint values must be finite; the root is located to `|hi - lo| <= tol`
/// and reported as the midpoint of the final bracket.
pub fn bisect_increasing<G>(
    mut g: G,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Bracket>
where
    G: FnMut(f64) -> f64,
{
    let g_lo = finite(lo, g(lo))?;
    if g_lo > 0.0 {
        return Ok(Bracket::Positive);
    }
    let g_hi = finite(hi, g(hi))?;
    if g_hi < 0.0 {
        return Ok(Bracket::Negative);
    }

    let (mut lo, mut hi) = (lo, hi);
    let mut iterations = 0;
    while hi - lo > tol && iterations < max_iter {
        let mid = 0.5 * (lo + hi);
        let v = finite(mid, g(mid))?;
        iterations += 1;
        if v == 0.0 {
            return Ok(Bracket::Root {
                at: mid,
                iterations,
            });
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket::Root {
        at: 0.5 * (lo + hi),
        iterations,
    })
}

fn finite(alpha: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { alpha, value })
    }
}
