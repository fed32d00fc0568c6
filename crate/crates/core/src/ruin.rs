//! Uncertain measure of ruin (UMR) of a surplus process with renewal claims,
//! with and without proportional reinsurance and Liu-process perturbation.
//!
//! Per claim the retained loss is `Θ = xη - βξ` with `β = [x(1+ρ) - (ρ-θ)]c`,
//! so the `j`-th partial sum has inverse distribution `j (xΨ⁻¹(α) - βΦ⁻¹(1-α))`.
//! Ruin is the event that some partial sum reaches the initial capital `u`;
//! its measure is the root in `α` of
//! `max_j L_j⁻¹(1-α) - u = 0`, which is decreasing in `α`.

use serde::{Deserialize, Serialize};

use crate::clip::AlphaClip;
use crate::distribution::RegularDistribution;
use crate::error::{Error, InvalidParameter, Result};
use crate::expectation::expected_value;
use crate::renewal::{has_nonnegative_support, symmetric_logit, LiuIncrement};
use crate::roots::{bisect_increasing, Bracket, BISECTION_MAX_ITER, BISECTION_TOL};

pub const DEFAULT_K_CAP: u64 = 10_000;

/// Doubling `k_cap` must move the UMR by less than this to count as converged.
pub const K_CONVERGENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct RiskScenario {
    u: f64,
    c: f64,
    interarrival: RegularDistribution,
    severity: RegularDistribution,
    k_cap: u64,
    clip: AlphaClip,
}

impl RiskScenario {
    pub fn new(
        u: f64,
        c: f64,
        interarrival: RegularDistribution,
        severity: RegularDistribution,
        k_cap: u64,
    ) -> Result<Self, InvalidParameter> {
        check_capital(u)?;
        if !(c > 0.0 && c.is_finite()) {
            return Err(InvalidParameter::new(
                "c",
                format!("premium rate {c} must be positive"),
            ));
        }
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
        check_k_cap(k_cap)?;
        Ok(Self {
            u,
            c,
            interarrival,
            severity,
            k_cap,
            clip: AlphaClip::default(),
        })
    }

    pub fn with_clip(mut self, clip: AlphaClip) -> Self {
        self.clip = clip;
        self
    }

    pub fn with_u(&self, u: f64) -> Result<Self, InvalidParameter> {
        check_capital(u)?;
        Ok(Self { u, ..self.clone() })
    }

    pub fn with_k_cap(&self, k_cap: u64) -> Result<Self, InvalidParameter> {
        check_k_cap(k_cap)?;
        Ok(Self {
            k_cap,
            ..self.clone()
        })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn c(&self) -> f64 {
        self.c
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

    pub fn clip(&self) -> AlphaClip {
        self.clip
    }
}

fn check_capital(u: f64) -> Result<(), InvalidParameter> {
    if u >= 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(InvalidParameter::new(
            "u",
            format!("initial capital {u} must be nonnegative"),
        ))
    }
}

fn check_k_cap(k_cap: u64) -> Result<(), InvalidParameter> {
    if k_cap >= 1 {
        Ok(())
    } else {
        Err(InvalidParameter::new("k_cap", "must be at least 1"))
    }
}

/// Quota-share terms: the insurer keeps a fraction `x` of premiums and losses.
///
/// Either `rho > theta >= 0` (a priced reinsurance contract) or
/// `rho = theta = 0` (see [`ReinsuranceTerms::none`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReinsuranceTerms {
    rho: f64,
    theta: f64,
    x: f64,
}

impl ReinsuranceTerms {
    pub fn new(rho: f64, theta: f64, x: f64) -> Result<Self, InvalidParameter> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(InvalidParameter::new(
                "theta",
                format!("safety load {theta} must be nonnegative"),
            ));
        }
        if !(rho > theta && rho.is_finite()) {
            return Err(InvalidParameter::new(
                "rho",
                format!("reinsurance load {rho} must exceed insurance load {theta}"),
            ));
        }
        check_retention(x)?;
        Ok(Self { rho, theta, x })
    }

    /// No reinsurance: full retention with both loads zero, so `β = c`.
    pub fn none() -> Self {
        Self {
            rho: 0.0,
            theta: 0.0,
            x: 1.0,
        }
    }

    pub fn with_x(self, x: f64) -> Result<Self, InvalidParameter> {
        check_retention(x)?;
        Ok(Self { x, ..self })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn is_reinsured(&self) -> bool {
        self.rho > self.theta
    }

    /// Retained premium rate `β = [x(1+ρ) - (ρ-θ)] c`.
    pub fn beta(&self, c: f64) -> f64 {
        (self.x * (1.0 + self.rho) - (self.rho - self.theta)) * c
    }
}

fn check_retention(x: f64) -> Result<(), InvalidParameter> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(InvalidParameter::new(
            "x",
            format!("retention {x} outside [0, 1]"),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationMode {
    /// The `j`-th partial sum carries a span-`j` increment, itself multiplied by `j`.
    #[default]
    AsPrinted,
    /// Each claim carries a unit-span increment.
    PerClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSpec {
    pub enabled: bool,
    #[serde(default)]
    pub mode: PerturbationMode,
}

impl PerturbationSpec {
    pub fn disabled() -> Self {
        Self::default()
    }

    pub fn enabled(mode: PerturbationMode) -> Self {
        Self {
            enabled: true,
            mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UmrReport {
    /// The uncertain measure of ruin.
    pub alpha: f64,
    /// Index of the partial sum attaining the maximum at the root.
    pub k_at_max: u64,
    pub converged_in_k: bool,
    pub iterations: usize,
}

/// `L_j⁻¹(α) = j (xΨ⁻¹(α) - βΦ⁻¹(1-α))`.
pub fn partial_sum_inverse(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    j: u64,
    alpha: f64,
) -> Result<f64> {
    if j == 0 || j > scn.k_cap {
        return Err(
            InvalidParameter::new("j", format!("index {j} outside [1, {}]", scn.k_cap)).into(),
        );
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(alpha));
    }
    let complement = 1.0 - alpha;
    let per_claim = terms.x * scn.severity.quantile_split(alpha, complement)
        - terms.beta(scn.c) * scn.interarrival.quantile_split(complement, alpha);
    Ok(j as f64 * per_claim)
}

/// `q(α) = xΨ⁻¹(1-α) - βΦ⁻¹(α)`, the common factor of every `L_j⁻¹(1-α)`.
#[inline]
fn claim_excess(scn: &RiskScenario, terms: &ReinsuranceTerms, alpha: f64) -> f64 {
    terms.x * scn.severity.upper_quantile(alpha)
        - terms.beta(scn.c) * scn.interarrival.quantile(alpha)
}

/// `max_{1≤j≤k} j q(α)`: attained at `j = k` when `q > 0`, else at `j = 1`.
pub fn maximal_partial_sum(scn: &RiskScenario, terms: &ReinsuranceTerms, alpha: f64) -> (f64, u64) {
    max_multiple(claim_excess(scn, terms, alpha), scn.k_cap)
}

#[inline]
fn max_multiple(q: f64, k_cap: u64) -> (f64, u64) {
    if q > 0.0 {
        (k_cap as f64 * q, k_cap)
    } else {
        (q, 1)
    }
}

/// Largest perturbed partial sum `max_j j (q(α) - s_j ℓ(α))`, where `ℓ` is the
/// inverse distribution of a unit-span Liu increment and the span `s_j` is
/// `j` or 1 depending on `mode`.
pub fn maximal_perturbed_sum(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    mode: PerturbationMode,
    alpha: f64,
) -> (f64, u64) {
    scan_perturbed(scn, terms, mode, alpha, scn.k_cap)
}

/// Scans `j = 1..=k_cap` for the largest perturbed partial sum at level `alpha`.
fn scan_perturbed(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    mode: PerturbationMode,
    alpha: f64,
    k_cap: u64,
) -> (f64, u64) {
    let q = claim_excess(scn, terms, alpha);
    // unit-span Liu increment at level alpha
    let unit =
        LiuIncrement::unit().scale() * crate::distribution::LOGISTIC_SCALE * symmetric_logit(alpha);
    let mut best = (f64::NEG_INFINITY, 1);
    for j in 1..=k_cap {
        let jf = j as f64;
        let span = match mode {
            PerturbationMode::AsPrinted => jf,
            PerturbationMode::PerClaim => 1.0,
        };
        let v = jf * (q - span * unit);
        if v > best.0 {
            best = (v, j);
        }
    }
    best
}

/// Root of the decreasing `g(α) = max_j(α) - u` on the clipped interval,
/// returning `(alpha, iterations)`.
fn decreasing_root<G: FnMut(f64) -> f64>(mut g: G, clip: AlphaClip) -> Result<(f64, usize)> {
    let bracket = bisect_increasing(
        |a| -g(a),
        clip.lo(),
        clip.hi(),
        BISECTION_TOL,
        BISECTION_MAX_ITER,
    )?;
    Ok(match bracket {
        // g > 0 throughout: ruin is certain at every level
        Bracket::Negative => (1.0, 0),
        Bracket::Positive => (0.0, 0),
        Bracket::Root { at, iterations } => (at, iterations),
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Solved {
    pub alpha: f64,
    pub k_at_max: u64,
    pub iterations: usize,
}

pub(crate) fn solve_umr(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    pert: PerturbationSpec,
    k_cap: u64,
) -> Result<Solved> {
    let u = scn.u;
    let (alpha, iterations) = if pert.enabled {
        decreasing_root(
            |a| scan_perturbed(scn, terms, pert.mode, a, k_cap).0 - u,
            scn.clip,
        )?
    } else {
        decreasing_root(
            |a| max_multiple(claim_excess(scn, terms, a), k_cap).0 - u,
            scn.clip,
        )?
    };
    let at = scn.clip.clamp(alpha);
    let k_at_max = if pert.enabled {
        scan_perturbed(scn, terms, pert.mode, at, k_cap).1
    } else {
        max_multiple(claim_excess(scn, terms, at), k_cap).1
    };
    Ok(Solved {
        alpha,
        k_at_max,
        iterations,
    })
}

fn report(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    pert: PerturbationSpec,
) -> Result<UmrReport> {
    let base = solve_umr(scn, terms, pert, scn.k_cap)?;
    let doubled = solve_umr(scn, terms, pert, scn.k_cap.saturating_mul(2))?;
    Ok(UmrReport {
        alpha: base.alpha,
        k_at_max: base.k_at_max,
        converged_in_k: (doubled.alpha - base.alpha).abs() < K_CONVERGENCE_TOL,
        iterations: base.iterations,
    })
}

/// Uncertain measure of ruin: the root `α` of `max_j j q(α) = u`.
///
/// Returns 0 when the maximal partial sum stays below `u` at every clipped
/// level and 1 when it stays above.
pub fn umr(scn: &RiskScenario, terms: &ReinsuranceTerms) -> Result<UmrReport> {
    report(scn, terms, PerturbationSpec::disabled())
}

/// UMR of the surplus perturbed by a Liu process. The maximum over partial
/// sums is found by an explicit scan over `j`.
pub fn umr_perturbed(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    pert: PerturbationSpec,
) -> Result<UmrReport> {
    if !pert.enabled {
        return umr(scn, terms);
    }
    report(scn, terms, pert)
}

/// Discretized ruin index
/// `max_k sup_z Φ(z/(k+1)) ∧ (1 - Ψ((u + βz)/(xk)))` over `k ≤ k_cap` and a
/// uniform grid of `z_grid` points on `[0, z_max]`.
///
/// Cost is `O(k_cap · z_grid)`; intended as a small-scale reference only.
/// `z_max` defaults to `10u/c + 10 k_cap E[ξ]`.
pub fn ruin_index_reference(
    scn: &RiskScenario,
    terms: &ReinsuranceTerms,
    z_grid: usize,
    z_max: Option<f64>,
) -> Result<f64> {
    if terms.x == 0.0 {
        return Err(Error::ZeroRetention);
    }
    if z_grid < 1000 {
        return Err(InvalidParameter::new(
            "z_grid",
            format!("{z_grid} points; at least 1000 required"),
        )
        .into());
    }
    let z_max = match z_max {
        Some(z) if z > 0.0 && z.is_finite() => z,
        Some(z) => {
            return Err(InvalidParameter::new("z_max", format!("{z} must be positive")).into())
        }
        None => {
            let mean_gap = expected_value(&scn.interarrival, scn.clip)?;
            10.0 * scn.u / scn.c + 10.0 * scn.k_cap as f64 * mean_gap
        }
    };
    let beta = terms.beta(scn.c);
    let step = z_max / (z_grid - 1) as f64;
    let mut best: f64 = 0.0;
    for k in 1..=scn.k_cap {
        let kf = k as f64;
        for i in 0..z_grid {
            let z = step * i as f64;
            let arrival = scn.interarrival.cdf(z / (kf + 1.0));
            if arrival <= best {
                continue;
            }
            let survive = 1.0 - scn.severity.cdf((scn.u + beta * z) / (terms.x * kf));
            best = best.max(arrival.min(survive));
        }
    }
    Ok(best)
}

/// Outcome of the two premium-adequacy tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PremiumCheck {
    /// `c > E[η] E[ξ]`.
    pub product_condition: bool,
    pub product_margin: f64,
    /// `c E[ξ] > E[η]`: premium collected over a mean gap covers a mean claim.
    pub rate_condition: bool,
    pub rate_margin: f64,
}

pub fn premium_feasibility(scn: &RiskScenario) -> Result<PremiumCheck> {
    let mean_claim = expected_value(&scn.severity, scn.clip)?;
    let mean_gap = expected_value(&scn.interarrival, scn.clip)?;
    let product_margin = scn.c - mean_claim * mean_gap;
    let rate_margin = scn.c * mean_gap - mean_claim;
    Ok(PremiumCheck {
        product_condition: product_margin > 0.0,
        product_margin,
        rate_condition: rate_margin > 0.0,
        rate_margin,
    })
}
