//! `poly`: dump a table of normalized Jacobi polynomial values 𝒫_n(θ).

use crate::output::{render, write_output, Format};
use crate::CliError;
use clap::Args;
use jacobi_harmonics::params::ParamPair;
use jacobi_harmonics::special::normalized_sequence;
use serde::Serialize;
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Args)]
pub struct PolyArgs {
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Highest degree to tabulate.
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// θ-sample count.
    #[arg(long, default_value_t = 33)]
    points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct PolyRow {
    n: usize,
    theta: f64,
    value: f64,
}

pub fn run(args: PolyArgs) -> Result<(), CliError> {
    let params = ParamPair::new(args.alpha, args.beta)?;
    if args.points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    let margin = 0.02;
    let mut rows = Vec::with_capacity((args.n_max + 1) * args.points);
    for i in 0..args.points {
        let theta = margin + (PI - 2.0 * margin) * i as f64 / (args.points - 1) as f64;
        for (n, value) in normalized_sequence(params, args.n_max, theta)?
            .into_iter()
            .enumerate()
        {
            rows.push(PolyRow { n, theta, value });
        }
    }
    // Ordered by degree first, θ second, matching how the tables read.
    rows.sort_by(|a, b| a.n.cmp(&b.n).then(a.theta.total_cmp(&b.theta)));
    let content = render(&rows, args.format)?;
    write_output(args.output.as_ref(), &content)
}
