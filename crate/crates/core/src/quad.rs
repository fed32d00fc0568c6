//! Integration of quantile-type integrands over the unit interval.
//!
//! The integrand is mapped through `alpha = 1 / (1 + exp(-t))`, which turns the
//! power and logarithmic endpoint singularities of heavy-tailed quantiles into
//! exponentially decaying tails in `t`. The clipped range `[delta, 1 - delta]`
//! becomes `[-L, L]` with `L = ln((1 - delta) / delta)` and is integrated with
//! adaptive Gauss-Kronrod (7/15). The mass beyond the clip is added back by
//! fitting a local log-quadratic decay in the coordinate `ln(distance to
//! endpoint)` on each side.

use crate::clip::AlphaClip;
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-13;
const MAX_PANELS: usize = 4000;
const INITIAL_PANELS: usize = 16;
const TAIL_STEP: f64 = 0.25;
// below this decay rate in t the tail mass exceeds 1000x the edge value
const MIN_TAIL_DECAY: f64 = 1e-3;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Logistic map: returns `(alpha, 1 - alpha, dalpha/dt)` with both levels
/// computed without cancellation.
#[inline]
fn logistic(t: f64) -> (f64, f64, f64) {
    let e = (-t.abs()).exp();
    let w = e / ((1.0 + e) * (1.0 + e));
    let (small, large) = (e / (1.0 + e), 1.0 / (1.0 + e));
    if t >= 0.0 {
        (large, small, w)
    } else {
        (small, large, w)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<H: Fn(f64) -> f64>(h: &H, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = h(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = h(center - dx) + h(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

fn adaptive<H: Fn(f64) -> f64>(h: &H, a: f64, b: f64) -> Result<f64> {
    let step = (b - a) / INITIAL_PANELS as f64;
    let mut panels: Vec<Panel> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + step * i as f64;
            let hi = if i + 1 == INITIAL_PANELS {
                b
            } else {
                lo + step
            };
            gauss_kronrod(h, lo, hi)
        })
        .collect();

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() || !error.is_finite() {
            let worst = panels
                .iter()
                .find(|p| !p.value.is_finite())
                .map(|p| logistic(0.5 * (p.a + p.b)).0)
                .unwrap_or(0.5);
            return Err(Error::NonFinite {
                alpha: worst,
                value,
            });
        }
        let scale: f64 = panels.iter().map(|p| p.value.abs()).sum();
        if error <= REL_TOL * scale.max(f64::MIN_POSITIVE) || panels.len() >= MAX_PANELS {
            return Ok(value);
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("panels are never empty");
        let worst = panels.swap_remove(idx);
        let mid = 0.5 * (worst.a + worst.b);
        panels.push(gauss_kronrod(h, worst.a, mid));
        panels.push(gauss_kronrod(h, mid, worst.b));
    }
}

/// Mass beyond the clip, extrapolated from the integrand in the tail
/// coordinate sampled at the edge and `TAIL_STEP`, `2 * TAIL_STEP` inward.
///
/// Fits the log of the integrand locally by a quadratic and integrates its
/// exponential to infinity (one integration-by-parts step beyond `g / λ`).
fn tail_mass(edge: f64, inner: f64, inner2: f64, alpha: f64) -> Result<f64> {
    if edge == 0.0 {
        return Ok(0.0);
    }
    let same_sign = edge.signum() == inner.signum() && inner.signum() == inner2.signum();
    if inner == 0.0 || inner2 == 0.0 || !same_sign {
        return Ok(edge);
    }
    let (l0, l1, l2) = (edge.abs().ln(), inner.abs().ln(), inner2.abs().ln());
    let curvature = (l0 - 2.0 * l1 + l2) / (TAIL_STEP * TAIL_STEP);
    let decay = (l1 - l0) / TAIL_STEP - 0.5 * curvature * TAIL_STEP;
    if decay < MIN_TAIL_DECAY {
        return Err(Error::Divergent { alpha });
    }
    Ok(edge / decay * (1.0 + curvature / (decay * decay)))
}

/// `∫₀¹ f(α, 1-α) dα` where `f` is only evaluated on the clipped interval.
///
/// The integrand receives the level and its complement, each accurate to full
/// relative precision, so upper quantiles can be formed without cancellation.
pub fn integrate_unit<F: Fn(f64, f64) -> f64>(f: F, clip: AlphaClip) -> Result<f64> {
    let span = ((1.0 - clip.delta()) / clip.delta()).ln();
    let h = |t: f64| {
        let (alpha, complement, w) = logistic(t);
        f(alpha, complement) * w
    };

    // Tails in the log-distance coordinate s, where the distance to the
    // endpoint is delta * exp(s): power laws become pure exponentials.
    let delta = clip.delta();
    let right = |k: f64| {
        let c = delta * (k * TAIL_STEP).exp();
        f(1.0 - c, c) * c
    };
    let left = |k: f64| {
        let a = delta * (k * TAIL_STEP).exp();
        f(a, 1.0 - a) * a
    };
    let (r0, l0) = (right(0.0), left(0.0));
    for (alpha, v) in [(clip.lo(), l0), (clip.hi(), r0)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { alpha, value: v });
        }
    }

    let body = adaptive(&h, -span, span)?;
    let upper = tail_mass(r0, right(1.0), right(2.0), clip.hi())?;
    let lower = tail_mass(l0, left(1.0), left(2.0), clip.lo())?;
    Ok(body + upper + lower)
}
