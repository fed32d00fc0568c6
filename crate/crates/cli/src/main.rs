//! `ruinlab`: uncertain ruin measures, optimal retention and parameter sweeps
//! from JSON scenario files.

mod config;
mod error;
mod plot;
mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ruinlab_core::{
    optimal_retention, retained_umr, sweep, umr_perturbed, SweepAxis, SweepBase, UmrReport,
};

use crate::config::{alpha_clip_from_env, Model, Overrides, ScenarioConfig};
use crate::error::CliError;
use crate::table::fmt_num;

#[derive(Parser)]
#[command(
    name = "ruinlab",
    version,
    about = "Uncertain measure of ruin and optimal reinsurance retention"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Uncertain measure of ruin for a scenario.
    Umr(Common),
    /// Optimal retention under the ruin ceiling `epsilon`.
    Retention(Common),
    /// Sweep one parameter and write a CSV table.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario config (JSON).
    config: PathBuf,
    /// Override the initial capital.
    #[arg(long, allow_negative_numbers = true)]
    u: Option<f64>,
    /// Override the ruin ceiling.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Override the number of claims considered.
    #[arg(long = "k-cap")]
    k_cap: Option<u64>,
    /// Override the retention.
    #[arg(long, allow_negative_numbers = true)]
    x: Option<f64>,
    /// Print the normalized config (after overrides) and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    U,
    K,
    X,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::U => SweepAxis::U,
            AxisArg::K => SweepAxis::KCap,
            AxisArg::X => SweepAxis::X,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    axis: AxisArg,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Space grid points geometrically instead of evenly.
    #[arg(long)]
    log: bool,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG line chart.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Worker threads (default: number of processors).
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            u: self.u,
            epsilon: self.epsilon,
            k_cap: self.k_cap,
            x: self.x,
        }
    }

    /// Loads and validates the config, or prints it when `--dump-config` is set.
    fn model(&self) -> Result<Option<Model>, CliError> {
        let cfg = ScenarioConfig::load(&self.config)?.apply(&self.overrides());
        let model = cfg.validate(alpha_clip_from_env()?)?;
        if self.dump_config {
            println!("{}", cfg.to_json());
            return Ok(None);
        }
        Ok(Some(model))
    }
}

fn cmd_umr(args: &Common) -> Result<(), CliError> {
    let Some(model) = args.model()? else {
        return Ok(());
    };
    let report = if model.terms.x() == 0.0 && model.terms.is_reinsured() {
        // everything ceded at a loss: the surplus drifts down to ruin
        UmrReport {
            alpha: retained_umr(&model.scenario, &model.terms, model.perturbation)?,
            k_at_max: model.scenario.k_cap(),
            converged_in_k: true,
            iterations: 0,
        }
    } else {
        umr_perturbed(&model.scenario, &model.terms, model.perturbation)?
    };
    println!(
        "alpha={} k_at_max={} converged_in_k={} iterations={}",
        fmt_num(report.alpha),
        report.k_at_max,
        report.converged_in_k,
        report.iterations
    );
    Ok(())
}

fn cmd_retention(args: &Common) -> Result<(), CliError> {
    let Some(model) = args.model()? else {
        return Ok(());
    };
    let r = optimal_retention(&model.require_retention()?)?;
    println!(
        "x_star={} objective={} umr_at_x={} binding={} method={}",
        fmt_num(r.x_star),
        fmt_num(r.objective),
        fmt_num(r.umr_at_x),
        r.binding,
        r.method.as_str()
    );
    Ok(())
}

fn grid(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    let invalid = |m: String| Err(CliError::Validation(m));
    if args.points < 2 {
        return invalid(format!(
            "points: {} given; at least 2 required",
            args.points
        ));
    }
    if !(args.from.is_finite() && args.to.is_finite() && args.from < args.to) {
        return invalid(format!(
            "from, to: need from < to, got {} and {}",
            args.from, args.to
        ));
    }
    match args.axis {
        AxisArg::U if args.from < 0.0 => {
            return invalid("from: initial capital must be nonnegative".into())
        }
        AxisArg::K if args.from < 1.0 => {
            return invalid("from: claim count must be at least 1".into())
        }
        AxisArg::X if args.from < 0.0 || args.to > 1.0 => {
            return invalid("from, to: retention must lie in [0, 1]".into())
        }
        _ => {}
    }
    if args.log && args.from <= 0.0 {
        return invalid("from: must be positive for a geometric grid".into());
    }
    let n = args.points - 1;
    let mut values: Vec<f64> = (0..=n)
        .map(|i| {
            let f = i as f64 / n as f64;
            if args.log {
                (args.from.ln() + f * (args.to / args.from).ln()).exp()
            } else {
                args.from + f * (args.to - args.from)
            }
        })
        .collect();
    values[0] = args.from;
    values[n] = args.to;
    if let AxisArg::K = args.axis {
        values.iter_mut().for_each(|v| *v = v.round());
        values.dedup();
    }
    Ok(values)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let Some(model) = args.common.model()? else {
        return Ok(());
    };
    let axis = SweepAxis::from(args.axis);
    if axis == SweepAxis::X && !model.terms.is_reinsured() {
        return Err(CliError::Validation(
            "rho, theta: required for a sweep over x".into(),
        ));
    }
    let grid = grid(args)?;
    let base = SweepBase {
        retention: model.retention_problem()?,
        scenario: model.scenario,
        terms: model.terms,
        perturbation: model.perturbation,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Validation("jobs: must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Numerical(format!("worker pool: {e}")))?;
    let rows = pool.install(|| sweep(&base, axis, &grid))?;

    let csv = table::to_csv(axis, &rows);
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => std::io::stdout()
            .write_all(&csv)
            .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
    }
    if let Some(path) = &args.plot {
        write_file(path, plot::line_chart(axis, &rows).as_bytes())?;
    }
    let failed = rows.iter().filter(|r| r.is_failed()).count();
    if failed == rows.len() {
        let first = rows[0].error.clone().unwrap_or_default();
        return Err(CliError::Numerical(format!(
            "all {failed} rows failed; first: {first}"
        )));
    }
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows failed", rows.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Umr(args) => cmd_umr(args),
        Command::Retention(args) => cmd_retention(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ruinlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
