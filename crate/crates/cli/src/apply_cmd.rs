//! `apply`: read an expansion from JSON, apply one of the five operators,
//! and write the result — a transformed expansion (JSON) for the diagonal
//! operators, a sampled function (CSV/JSON/table) for the rest.

use crate::output::{render, write_output, Format};
use crate::CliError;
use clap::{Args, ValueEnum};
use jacobi_harmonics::ops::{
    apply_imaginary_power, apply_riesz, apply_semigroup, maximal_operator, min_active_frequency,
    square_function, square_function_rule, JacobiExpansion, TGrid,
};
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Read;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Operator {
    ImaginaryPower,
    Riesz,
    Semigroup,
    Maximal,
    Gfunction,
}

#[derive(Args)]
pub struct ApplyArgs {
    #[arg(long, value_enum)]
    operator: Operator,
    /// Expansion JSON path, or "-" for stdin.
    #[arg(long)]
    input: String,
    /// γ for imaginary-power (must be nonzero).
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// N for riesz (must be ≥ 1).
    #[arg(long)]
    order: Option<usize>,
    /// t for semigroup.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// M for gfunction.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// N for gfunction.
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// θ-sample count for function-valued results.
    #[arg(long, default_value_t = 65)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct ComplexSampleRow {
    theta: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SampleRow {
    theta: f64,
    value: f64,
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn theta_samples(count: usize) -> Result<Vec<f64>, CliError> {
    if count < 2 {
        return Err(CliError::Config("--samples must be at least 2".into()));
    }
    let margin = 0.02;
    Ok((0..count)
        .map(|i| margin + (PI - 2.0 * margin) * i as f64 / (count - 1) as f64)
        .collect())
}

/// Operator preconditions (γ = 0, N = 0, t ≤ 0, M+N = 0) are check failures
/// (exit 1), unlike malformed input which is a configuration error (exit 2).
fn check_err(e: jacobi_harmonics::error::Error) -> CliError {
    CliError::Check(e.to_string())
}

pub fn run(args: ApplyArgs) -> Result<(), CliError> {
    let f = JacobiExpansion::from_json(&read_input(&args.input)?)?;
    match args.operator {
        Operator::ImaginaryPower => {
            let gamma = args
                .gamma
                .ok_or_else(|| CliError::Config("imaginary-power needs --gamma".into()))?;
            let (result, projected) = apply_imaginary_power(&f, gamma).map_err(check_err)?;
            if projected {
                eprintln!("note: critical case, degree-0 mode projected out");
            }
            write_output(args.output.as_ref(), &result.to_json())
        }
        Operator::Semigroup => {
            let t = args
                .t
                .ok_or_else(|| CliError::Config("semigroup needs --t".into()))?;
            let result = apply_semigroup(&f, t).map_err(check_err)?;
            write_output(args.output.as_ref(), &result.to_json())
        }
        Operator::Riesz => {
            let order = args
                .order
                .ok_or_else(|| CliError::Config("riesz needs --order".into()))?;
            let transform = apply_riesz(&f, order).map_err(check_err)?;
            let rows: Vec<ComplexSampleRow> = theta_samples(args.samples)?
                .into_iter()
                .map(|theta| {
                    let v = transform.eval(theta)?;
                    Ok(ComplexSampleRow {
                        theta,
                        re: v.re,
                        im: v.im,
                    })
                })
                .collect::<Result<_, jacobi_harmonics::error::Error>>()?;
            write_output(args.output.as_ref(), &render(&rows, args.format)?)
        }
        Operator::Maximal => {
            let grid = TGrid::default_maximal();
            let rows: Vec<SampleRow> = theta_samples(args.samples)?
                .into_iter()
                .map(|theta| {
                    Ok(SampleRow {
                        theta,
                        value: maximal_operator(&f, theta, &grid)?,
                    })
                })
                .collect::<Result<_, jacobi_harmonics::error::Error>>()?;
            write_output(args.output.as_ref(), &render(&rows, args.format)?)
        }
        Operator::Gfunction => {
            if args.m + args.n == 0 {
                return Err(CliError::Check("gfunction needs M + N ≥ 1".into()));
            }
            // Empty spectrum: g_{M,N} f ≡ 0, no quadrature needed.
            let rule = min_active_frequency(&f, args.m, args.n)
                .map(|mu| square_function_rule(args.m, args.n, mu));
            let rows: Vec<SampleRow> = theta_samples(args.samples)?
                .into_iter()
                .map(|theta| {
                    let value = match &rule {
                        Some(rule) => square_function(&f, theta, args.m, args.n, rule)?,
                        None => 0.0,
                    };
                    Ok(SampleRow { theta, value })
                })
                .collect::<Result<_, jacobi_harmonics::error::Error>>()?;
            write_output(args.output.as_ref(), &render(&rows, args.format)?)
        }
    }
}
