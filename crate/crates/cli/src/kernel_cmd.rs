//! `kernel`: evaluate ∂_t^M ∂_θ^N H_t(θ,φ) at a point or over the default
//! batch grid, by one or more representations, with a cross-representation
//! disagreement column.

use crate::output::{render, write_output, Format};
use crate::CliError;
use clap::Args;
use jacobi_harmonics::kernel::{kernel_closed_form, kernel_dk, kernel_series, KernelEvaluation};
use jacobi_harmonics::params::ParamPair;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::PathBuf;

/// Series truncation tolerance for batch evaluation.
const SERIES_TOL: f64 = 1e-12;
/// Π-quadrature order for the Dijksma-Koornwinder double integral.
const DK_ORDER: usize = 96;

#[derive(Args)]
pub struct KernelArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Semigroup time; required unless --grid is given.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// t-derivative order M.
    #[arg(long, default_value_t = 0)]
    dt: usize,
    /// θ-derivative order N.
    #[arg(long, default_value_t = 0)]
    dtheta: usize,
    /// Evaluate over the default batch grid (10×10×10, t in [0.05, 5],
    /// |θ-φ| ≥ 0.05) instead of a single point.
    #[arg(long, conflicts_with_all = ["t", "theta", "phi"])]
    grid: bool,
    /// Comma-separated representations: series, dk, closed.
    #[arg(long, default_value = "series", value_delimiter = ',')]
    reps: Vec<String>,
    /// Maximum allowed relative disagreement between representations.
    #[arg(long, default_value_t = jacobi_harmonics::tolerance::REPRESENTATION)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rep {
    Series,
    Dk,
    Closed,
}

impl Rep {
    fn parse(text: &str) -> Result<Rep, CliError> {
        match text {
            "series" => Ok(Rep::Series),
            "dk" | "dk_integral" => Ok(Rep::Dk),
            "closed" | "closed_form" => Ok(Rep::Closed),
            other => Err(CliError::Config(format!(
                "unknown representation {other:?} (expected series, dk, or closed)"
            ))),
        }
    }
}

#[derive(Serialize)]
struct KernelRow {
    t: f64,
    theta: f64,
    phi: f64,
    dt: usize,
    dtheta: usize,
    representation: String,
    value: f64,
    est_error: f64,
    /// Max pairwise relative disagreement among the representations
    /// evaluated at this (t,θ,φ); repeated on each of the point's rows.
    disagreement: f64,
}

fn evaluate(
    params: ParamPair,
    rep: Rep,
    t: f64,
    theta: f64,
    phi: f64,
    dt: usize,
    dtheta: usize,
) -> Result<KernelEvaluation, CliError> {
    match rep {
        Rep::Series => Ok(kernel_series(params, t, theta, phi, dt, dtheta, SERIES_TOL)?),
        Rep::Dk => Ok(kernel_dk(params, t, theta, phi, dt, dtheta, DK_ORDER)?),
        Rep::Closed => {
            if params != ParamPair::new(-0.5, -0.5)? || dt != 0 || dtheta != 0 {
                return Err(CliError::Config(
                    "the closed form exists only for alpha = beta = -1/2 with M = N = 0".into(),
                ));
            }
            Ok(KernelEvaluation {
                value: kernel_closed_form(t, theta, phi)?,
                t,
                dt_order: 0,
                dtheta_order: 0,
                representation: jacobi_harmonics::kernel::Representation::ClosedForm,
                truncation_or_order: 0,
                est_error: 0.0,
            })
        }
    }
}

fn grid_points() -> Vec<(f64, f64, f64)> {
    let n = 10;
    let ts: Vec<f64> = (0..n)
        .map(|i| {
            (0.05f64.ln() + (5.0f64.ln() - 0.05f64.ln()) * i as f64 / (n - 1) as f64).exp()
        })
        .collect();
    let margin = 0.02;
    let axis: Vec<f64> = (0..n)
        .map(|i| margin + (PI - 2.0 * margin) * i as f64 / (n - 1) as f64)
        .collect();
    let mut out = Vec::new();
    for &t in &ts {
        for &theta in &axis {
            for &phi in &axis {
                if (theta - phi).abs() >= 0.05 {
                    out.push((t, theta, phi));
                }
            }
        }
    }
    out
}

pub fn run(args: KernelArgs) -> Result<(), CliError> {
    let params = ParamPair::new(args.alpha, args.beta)?;
    let reps: Vec<Rep> = args
        .reps
        .iter()
        .map(|r| Rep::parse(r))
        .collect::<Result<_, _>>()?;
    if !(args.tol > 0.0) {
        return Err(CliError::Config("--tol must be positive".into()));
    }
    let points = if args.grid {
        grid_points()
    } else {
        match (args.t, args.theta, args.phi) {
            (Some(t), Some(theta), Some(phi)) => vec![(t, theta, phi)],
            _ => {
                return Err(CliError::Config(
                    "point mode needs --t, --theta, and --phi (or use --grid)".into(),
                ))
            }
        }
    };

    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for (t, theta, phi) in points {
        let evals: Vec<(Rep, KernelEvaluation)> = reps
            .iter()
            .map(|&rep| Ok((rep, evaluate(params, rep, t, theta, phi, args.dt, args.dtheta)?)))
            .collect::<Result<_, CliError>>()?;
        let scale = evals
            .iter()
            .map(|(_, e)| e.value.abs())
            .fold(0.0, f64::max)
            .max(1e-300);
        let mut disagreement = 0.0f64;
        for (i, (_, a)) in evals.iter().enumerate() {
            for (_, b) in evals.iter().skip(i + 1) {
                disagreement = disagreement.max((a.value - b.value).abs() / scale);
            }
        }
        worst = worst.max(disagreement);
        for (_, e) in evals {
            rows.push(KernelRow {
                t,
                theta,
                phi,
                dt: e.dt_order,
                dtheta: e.dtheta_order,
                representation: e.representation.to_string(),
                value: e.value,
                est_error: e.est_error,
                disagreement,
            });
        }
    }

    let content = render(&rows, args.format)?;
    write_output(args.output.as_ref(), &content)?;
    if worst > args.tol {
        return Err(CliError::Check(format!(
            "representation disagreement {worst:e} exceeds tolerance {:e}",
            args.tol
        )));
    }
    Ok(())
}
