//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Run with `cargo test --release -p ruinlab-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ruinlab_core::{
    crisp_measure_nonpositive, expected_value, grid_scan, long_run_renewal_rate,
    maximal_partial_sum, maximal_perturbed_sum, optimal_retention, premium_feasibility,
    renewal_count_cdf, renewal_reward_cdf, ruin_index_reference, sweep, umr, umr_perturbed,
    wealth_rate, AlphaClip, LiuIncrement, MonotoneFunctionSpec, PerturbationMode, PerturbationSpec,
    RegularDistribution, ReinsuranceTerms, RenewalSpec, RetentionProblem, RiskScenario,
    SolveMethod, SweepAxis, SweepBase,
};

const KAPPA: f64 = 0.551_328_895_421_792_1; // √3/π

struct Outcome {
    checks: Vec<(bool, String)>,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl Into<String>) {
        self.checks.push((ok, msg.into()));
    }

    fn timed(&mut self, elapsed: Duration, limit_s: f64) {
        let s = elapsed.as_secs_f64();
        self.check(
            s < limit_s,
            format!("runtime {:.1} ms < {limit_s} s", s * 1e3),
        );
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.0)
    }
}

fn example1(u: f64, k_cap: u64) -> RiskScenario {
    RiskScenario::new(
        u,
        26.0,
        RegularDistribution::linear(1.0, 3.0).unwrap(),
        RegularDistribution::lognormal(2.0, 1.0).unwrap(),
        k_cap,
    )
    .unwrap()
}

fn example2(u: f64, k_cap: u64) -> RetentionProblem {
    RetentionProblem::new(
        example1(u, k_cap),
        0.9,
        0.8,
        0.005,
        PerturbationSpec::disabled(),
    )
    .unwrap()
}

/// Trapezoid rule on `∫ Q(α(t)) α'(t) dt` over `t ∈ [-40, 40]`, `α(t) = 1/(1+e^{-t})`,
/// with `Q` taking the logit `t` directly.
fn logit_trapezoid(q_of_logit: impl Fn(f64) -> f64, points: usize) -> f64 {
    let (lo, hi) = (-40.0, 40.0);
    let h = (hi - lo) / (points - 1) as f64;
    let mut sum = 0.0;
    for i in 0..points {
        let t = lo + h * i as f64;
        let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        let density = 0.25 / (0.5 * t).cosh().powi(2);
        sum += w * q_of_logit(t) * density;
    }
    sum * h
}

/// `argmin |g|` over `α_i = (i + 1/2)/n`.
fn grid_argmin(g: impl Fn(f64) -> f64, n: usize) -> f64 {
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..n {
        let a = (i as f64 + 0.5) / n as f64;
        let v = g(a).abs();
        if v < best.0 {
            best = (v, a);
        }
    }
    best.1
}

fn lognormal_inverse(e: f64, sigma: f64, a: f64) -> f64 {
    (e + sigma * KAPPA * (a / (1.0 - a)).ln()).exp()
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let clip = AlphaClip::default();
    let start = Instant::now();
    let ln = expected_value(&RegularDistribution::lognormal(2.0, 1.0).unwrap(), clip).unwrap();
    let lin = expected_value(&RegularDistribution::linear(1.0, 3.0).unwrap(), clip).unwrap();
    let normals: Vec<(f64, f64)> = [(0.0, 1.0), (-3.5, 0.2), (12.0, 4.0)]
        .iter()
        .map(|&(e, s)| {
            (
                e,
                expected_value(&RegularDistribution::normal(e, s).unwrap(), clip).unwrap(),
            )
        })
        .collect();
    let elapsed = start.elapsed();

    let oracle = logit_trapezoid(|t| (2.0 + KAPPA * t).exp(), 10_000_000);
    let rel = (ln - oracle).abs() / oracle;
    out.check(
        rel < 1e-6,
        format!("E[LN(2,1)] = {ln:.10} vs trapezoid {oracle:.10}, rel {rel:.2e} < 1e-6"),
    );
    out.check(
        (ln - 12.96).abs() < 0.01,
        format!("E[LN(2,1)] = {ln:.4} near 12.96"),
    );
    out.check((lin - 2.0).abs() < 1e-9, format!("E[L(1,3)] = {lin:.12}"));
    for (e, v) in normals {
        out.check((v - e).abs() < 1e-9, format!("E[N({e},.)] = {v:.12}"));
    }
    out.timed(elapsed, 1.0);
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let p = example2(1e5, 100);
    let slope = p.objective().slope();
    let intercept = wealth_rate(&p, 0.0).unwrap();
    let elapsed = start.elapsed();
    let rel = (slope - 39.6).abs() / 39.6;
    out.check(
        rel < 0.05,
        format!("slope {slope:.6} within 5% of 39.6 (rel {rel:.2e})"),
    );
    // −(ρ−θ)c rounds to the nearest double of −2.6 up to a few ulps
    out.check(
        (intercept + 2.6).abs() <= 4.0 * f64::EPSILON * 2.6,
        format!("intercept {intercept:.15} = -2.6"),
    );
    out.timed(elapsed, 1.0);
    out
}

fn random_distribution(rng: &mut ChaCha8Rng) -> RegularDistribution {
    match rng.gen_range(0..3) {
        0 => {
            let a = rng.gen_range(-5.0..5.0);
            RegularDistribution::linear(a, a + rng.gen_range(0.1..10.0)).unwrap()
        }
        1 => {
            RegularDistribution::normal(rng.gen_range(-5.0..5.0), rng.gen_range(0.1..3.0)).unwrap()
        }
        _ => RegularDistribution::lognormal(rng.gen_range(-1.0..2.0), rng.gen_range(0.1..1.5))
            .unwrap(),
    }
}

/// Strictly increasing scalar maps used to build random monotone functions.
fn shape(kind: usize, v: f64) -> f64 {
    match kind {
        0 => v,
        1 => v.tanh(),
        2 => v * v * v,
        _ => v.atan(),
    }
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let clip = AlphaClip::default();
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    let mut solve_time = Duration::ZERO;
    for _ in 0..50 {
        let inc = rng.gen_range(1..=3);
        let dec = rng.gen_range(0..=2);
        let dists: Vec<RegularDistribution> = (0..inc + dec)
            .map(|_| random_distribution(&mut rng))
            .collect();
        let weights: Vec<f64> = (0..inc + dec).map(|_| rng.gen_range(0.2..3.0)).collect();
        let shapes: Vec<usize> = (0..inc + dec).map(|_| rng.gen_range(0..4)).collect();
        let target = rng.gen_range(0.03..0.97);

        let raw = {
            let (weights, shapes) = (weights.clone(), shapes.clone());
            move |x: &[f64]| -> f64 {
                x.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let s = weights[i] * shape(shapes[i], v);
                        if i < inc {
                            s
                        } else {
                            -s
                        }
                    })
                    .sum()
            }
        };
        // independent composition from the public inverse distributions
        let composed = |f: &dyn Fn(&[f64]) -> f64, a: f64| -> f64 {
            let args: Vec<f64> = dists
                .iter()
                .enumerate()
                .map(|(i, d)| d.inverse_cdf(if i < inc { a } else { 1.0 - a }).unwrap())
                .collect();
            f(&args)
        };
        let offset = composed(&raw, target);
        let spec = {
            let raw = raw.clone();
            MonotoneFunctionSpec::new(inc, dec, move |x| raw(x) - offset)
        };
        let start = Instant::now();
        let root = crisp_measure_nonpositive(&spec, &dists, clip).unwrap();
        solve_time += start.elapsed();
        let grid = grid_argmin(|a| composed(&raw, a) - offset, 10_000);
        let gap = (root - grid).abs();
        worst = worst.max(gap);
        if gap > 2e-4 {
            failures += 1;
        }
    }
    out.check(
        failures == 0,
        format!("50 random specs, worst |root - grid| = {worst:.2e} <= 2e-4"),
    );
    out.timed(solve_time, 10.0);
    out
}

/// `exp(2 + κ ln((1-α)/α)) = 26(1 + 2α)`, solved by plain bisection.
fn single_claim_root() -> f64 {
    let g = |a: f64| lognormal_inverse(2.0, 1.0, 1.0 - a) - 26.0 * (1.0 + 2.0 * a);
    let (mut lo, mut hi) = (1e-9, 1.0 - 1e-9);
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let oracle = single_claim_root();
    let values: Vec<f64> = [10, 1000, 100_000]
        .iter()
        .map(|&k| {
            umr(&example1(0.0, k), &ReinsuranceTerms::none())
                .unwrap()
                .alpha
        })
        .collect();
    let spread = values
        .iter()
        .fold(0.0f64, |m, v| m.max((v - values[0]).abs()));
    out.check(
        spread <= 1e-9,
        format!(
            "UMR(u=0) over k_cap in {{10, 1e3, 1e5}} = {:.12}, spread {spread:.1e}",
            values[0]
        ),
    );
    out.check(
        (values[0] - oracle).abs() <= 1e-9,
        format!("single-claim oracle root {oracle:.12}"),
    );
    out.check(
        (values[0] - 0.075).abs() <= 0.005,
        format!("UMR {:.6} within 0.075 +- 0.005", values[0]),
    );
    out
}

fn nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

fn umr_base(u: f64, k: u64) -> SweepBase {
    SweepBase {
        scenario: example1(u, k),
        terms: ReinsuranceTerms::none(),
        perturbation: PerturbationSpec::disabled(),
        retention: None,
    }
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();

    let mut k_grid: Vec<f64> = (0..60)
        .map(|i| {
            (10f64.ln() + i as f64 * (20_000f64 / 10.0).ln() / 59.0)
                .exp()
                .round()
        })
        .collect();
    k_grid.extend([10_000.0, 20_000.0]);
    k_grid.sort_by(f64::total_cmp);
    k_grid.dedup();
    let rows = sweep(&umr_base(10_000.0, 10), SweepAxis::KCap, &k_grid).unwrap();
    let by_k: Vec<f64> = rows.iter().map(|r| r.umr.unwrap()).collect();
    out.check(
        nondecreasing(&by_k),
        format!(
            "UMR(k) nondecreasing over {} points in [10, 20000]",
            k_grid.len()
        ),
    );
    let at = |k: f64| by_k[k_grid.iter().position(|&g| g == k).unwrap()];
    let delta = (at(20_000.0) - at(10_000.0)).abs();
    out.check(
        delta < 1e-6,
        format!(
            "|UMR(k=2e4) - UMR(k=1e4)| = {delta:.3e} < 1e-6 (UMR {:.7} -> {:.7})",
            at(10_000.0),
            at(20_000.0)
        ),
    );

    let u_grid: Vec<f64> = (0..50)
        .map(|i| 1000.0 + i as f64 * (200_000.0 - 1000.0) / 49.0)
        .collect();
    let rows = sweep(&umr_base(0.0, 100), SweepAxis::U, &u_grid).unwrap();
    let by_u: Vec<f64> = rows.iter().map(|r| r.umr.unwrap()).collect();
    out.check(
        nonincreasing(&by_u),
        "UMR(u) nonincreasing over 50 points in [1e3, 2e5] at k=100",
    );
    let last = *by_u.last().unwrap();
    out.check(last < 1e-3, format!("UMR(u=2e5) = {last:.3e} < 1e-3"));
    out.timed(start.elapsed(), 30.0);
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();

    let problem = example2(1e4, 100);
    let base = SweepBase {
        scenario: problem.scenario().clone(),
        terms: ReinsuranceTerms::new(0.9, 0.8, 1.0).unwrap(),
        perturbation: PerturbationSpec::disabled(),
        retention: Some(problem),
    };
    let u_grid: Vec<f64> = (0..21).map(|i| 10f64.powf(4.0 + i as f64 * 0.1)).collect();
    let rows = sweep(&base, SweepAxis::U, &u_grid).unwrap();
    let xs: Vec<f64> = rows.iter().map(|r| r.x_star.unwrap()).collect();
    out.check(
        nondecreasing(&xs),
        format!(
            "x*(u) nondecreasing over [1e4, 1e6] at k=100 (from {:.6} to {:.6})",
            xs[0],
            xs[xs.len() - 1]
        ),
    );

    let base = SweepBase {
        scenario: example1(1e5, 100),
        retention: Some(example2(1e5, 100)),
        ..base
    };
    let k_grid = [
        100.0, 200.0, 500.0, 1000.0, 2000.0, 3000.0, 4000.0, 5000.0, 6000.0, 7000.0, 7500.0,
        8000.0, 8500.0, 9000.0, 9500.0, 10_000.0,
    ];
    let rows = sweep(&base, SweepAxis::KCap, &k_grid).unwrap();
    let xs: Vec<f64> = rows.iter().map(|r| r.x_star.unwrap()).collect();
    out.check(
        nonincreasing(&xs),
        "x*(k) nonincreasing over [1e2, 1e4] at u=1e5",
    );
    let tail: Vec<f64> = k_grid
        .iter()
        .zip(&xs)
        .filter(|(k, _)| **k >= 7000.0)
        .map(|(_, x)| *x)
        .collect();
    let drift = tail.iter().fold(0.0f64, |m, x| m.max((x - tail[0]).abs()));
    out.check(
        drift < 1e-4,
        format!(
            "x*(k) stable for k >= 7000: max |x*(k) - x*(7000)| = {drift:.3e} < 1e-4 (x*(7000) = {:.6}, x*(1e4) = {:.6})",
            tail[0],
            tail[tail.len() - 1]
        ),
    );
    out.timed(start.elapsed(), 120.0);
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let cases = [
        (1e4, 100),
        (1e5, 100),
        (1e6, 100),
        (1e5, 5000),
        (1e5, 10_000),
        (1e6, 10_000),
    ];
    for (u, k) in cases {
        let p = example2(u, k);
        let r = optimal_retention(&p).unwrap();
        let s = grid_scan(&p).unwrap();
        let gap = (r.x_star - s.x_star).abs();
        out.check(
            r.method == SolveMethod::BoundaryBisection && gap <= 2e-3,
            format!(
                "u={u:e} k={k}: boundary {:.6} vs grid {:.3}, gap {gap:.1e} <= 2e-3",
                r.x_star, s.x_star
            ),
        );
        let again = p.constraint_umr(r.x_star).unwrap();
        out.check(
            again <= 0.005 + 1e-6 && r.umr_at_x <= 0.005 + 1e-6,
            format!("u={u:e} k={k}: UMR(x*) = {again:.3e} <= eps + 1e-6"),
        );
    }
    out
}

/// `max_j` of the perturbed partial sums, written out from the closed forms.
fn perturbed_g(u: f64, k: u64, mode: PerturbationMode, a: f64) -> f64 {
    let per_claim = lognormal_inverse(2.0, 1.0, 1.0 - a) - 26.0 * (1.0 + 2.0 * a);
    let noise = KAPPA * ((1.0 - a) / a).ln();
    (1..=k)
        .map(|j| {
            let j = j as f64;
            let span = if mode == PerturbationMode::AsPrinted {
                j
            } else {
                1.0
            };
            j * (per_claim + span * noise)
        })
        .fold(f64::NEG_INFINITY, f64::max)
        - u
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let scn = example1(10_000.0, 100);
    let terms = ReinsuranceTerms::none();
    for mode in [PerturbationMode::AsPrinted, PerturbationMode::PerClaim] {
        let off = umr_perturbed(
            &scn,
            &terms,
            PerturbationSpec {
                enabled: false,
                mode,
            },
        )
        .unwrap();
        let plain = umr(&scn, &terms).unwrap();
        out.check(
            off.alpha.to_bits() == plain.alpha.to_bits() && off == plain,
            format!(
                "{mode:?} disabled: {:.12} bit-identical to unperturbed",
                off.alpha
            ),
        );
    }
    let noise = LiuIncrement::unit().inverse(0.5).unwrap();
    let plain_half = maximal_partial_sum(&scn, &terms, 0.5);
    let perturbed_half = maximal_perturbed_sum(&scn, &terms, PerturbationMode::AsPrinted, 0.5);
    out.check(
        noise == 0.0 && perturbed_half.0.to_bits() == plain_half.0.to_bits(),
        format!(
            "as_printed at alpha=0.5: increment {noise}, max partial sum {:.6} equals unperturbed {:.6}",
            perturbed_half.0, plain_half.0
        ),
    );
    for mode in [PerturbationMode::AsPrinted, PerturbationMode::PerClaim] {
        let r = umr_perturbed(&scn, &terms, PerturbationSpec::enabled(mode)).unwrap();
        let grid = grid_argmin(|a| perturbed_g(10_000.0, 100, mode, a), 10_000);
        let gap = (r.alpha - grid).abs();
        out.check(
            gap <= 2e-4,
            format!(
                "{mode:?}: root {:.6} vs grid {grid:.6}, gap {gap:.1e} <= 2e-4",
                r.alpha
            ),
        );
    }
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let clip = AlphaClip::default();
    let severity = RegularDistribution::lognormal(2.0, 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = rng.gen_range(0.05..10.0);
        let b = a + rng.gen_range(0.01..20.0);
        let spec = RenewalSpec::new(
            RegularDistribution::linear(a, b).unwrap(),
            severity.clone(),
            1000,
        )
        .unwrap();
        let rate = long_run_renewal_rate(&spec, clip).unwrap();
        worst = worst.max((rate - (b / a).ln() / (b - a)).abs());
    }
    out.check(
        worst < 1e-8,
        format!("renewal rate vs ln(b/a)/(b-a) on 100 draws, worst {worst:.2e} < 1e-8"),
    );

    let spec = RenewalSpec::new(
        RegularDistribution::linear(1.0, 3.0).unwrap(),
        severity,
        1000,
    )
    .unwrap();
    let mut step_ok = true;
    let mut prev = 0.0;
    for n in 0..40 {
        let at_n = renewal_count_cdf(&spec, 25.0, n as f64).unwrap();
        for f in [0.1, 0.37, 0.5, 0.99, 0.999_999] {
            step_ok &= renewal_count_cdf(&spec, 25.0, n as f64 + f).unwrap() == at_n;
        }
        step_ok &= at_n >= prev && (0.0..=1.0).contains(&at_n);
        prev = at_n;
    }
    out.check(
        step_ok,
        "renewal count cdf constant on [n, n+1), nondecreasing, in [0, 1]",
    );

    let mut reward_ok = true;
    for t in [0.5, 5.0, 50.0] {
        let mut prev = 0.0;
        for i in 0..400 {
            let v = renewal_reward_cdf(&spec, t, i as f64 * 2.5).unwrap();
            reward_ok &= v >= prev && (0.0..=1.0).contains(&v);
            prev = v;
        }
    }
    out.check(
        reward_ok,
        "renewal reward cdf nondecreasing in x with values in [0, 1]",
    );
    out
}

fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let terms = ReinsuranceTerms::none();
    for u in [0.0, 50.0, 200.0] {
        let scn = example1(u, 5);
        let coarse = ruin_index_reference(&scn, &terms, 1000, None).unwrap();
        let fine = ruin_index_reference(&scn, &terms, 10_000, None).unwrap();
        let root = umr(&scn, &terms).unwrap().alpha;
        out.check(
            (coarse - fine).abs() <= 0.02,
            format!(
                "u={u} k_cap=5: index {coarse:.6} (1e3 pts) vs {fine:.6} (1e4 pts); root-alpha UMR {root:.6}, gap {:+.6}",
                fine - root
            ),
        );
    }
    let p = premium_feasibility(&example1(0.0, 5)).unwrap();
    println!(
        "    info: premium margins c - E[eta]E[xi] = {:.4}, c E[xi] - E[eta] = {:.4}",
        p.product_margin, p.rate_margin
    );
    out
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("quantile calculus", criterion_1),
        ("wealth objective slope and intercept", criterion_2),
        ("monotone-function root solver", criterion_3),
        ("UMR structure at u = 0", criterion_4),
        ("UMR curves over k and u", criterion_5),
        ("optimal retention curves over u and k", criterion_6),
        ("retention solver cross-check", criterion_7),
        ("perturbed model", criterion_8),
        ("renewal layer", criterion_9),
        ("reference ruin index", criterion_10),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let ok = outcome.passed();
        all &= ok;
        println!(
            "criterion {:>2}: {} {name}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
        for (pass, msg) in &outcome.checks {
            println!("    [{}] {msg}", if *pass { "ok" } else { "FAIL" });
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
