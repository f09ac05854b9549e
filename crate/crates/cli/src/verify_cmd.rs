//! `verify`: run the Calderón-Zygmund estimate suite (or one category of
//! it) and emit the reports. Exit 0 when every check passes, 1 when any
//! fails, 2 on configuration errors.

use crate::output::{to_csv, to_json, write_output, Format};
use crate::CliError;
use clap::Args;
use jacobi_harmonics::params::ParamPair;
use jacobi_harmonics::verify::{
    default_panel, format_table, run_suite_filtered, suite_passed, EstimateReport, VerifyConfig,
};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Args)]
pub struct VerifyArgs {
    /// Parameter pairs "alpha,beta"; defaults to the standard panel.
    #[arg(long = "params", value_name = "ALPHA,BETA")]
    params: Vec<String>,
    /// Run a single check category: growth, smoothness, bridge, phi-bounds,
    /// trig, comp, or lem58.
    #[arg(long)]
    only: Option<String>,
    /// Negative control: multiply kernel norms by |θ-φ|^{-1/4} in the
    /// growth checks. The suite is expected to fail (exit 1).
    #[arg(long, value_name = "CHECK")]
    inject_fault: Option<String>,
    /// JSON file with a full VerifyConfig; takes precedence over the
    /// individual grid flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    theta_points: Option<usize>,
    #[arg(long)]
    sep_min: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    pi_order: Option<usize>,
    #[arg(long)]
    t_points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    stability: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Flat report row for CSV output (ParamPair inlined).
#[derive(Serialize)]
struct ReportRow<'a> {
    estimate_id: &'a str,
    alpha: Option<f64>,
    beta: Option<f64>,
    grid_spec: &'a str,
    empirical_sup: f64,
    refinement_delta: f64,
    passed: bool,
    threshold_used: f64,
}

impl<'a> From<&'a EstimateReport> for ReportRow<'a> {
    fn from(r: &'a EstimateReport) -> Self {
        ReportRow {
            estimate_id: &r.estimate_id,
            alpha: r.params.map(|p| p.alpha),
            beta: r.params.map(|p| p.beta),
            grid_spec: &r.grid_spec,
            empirical_sup: r.empirical_sup,
            refinement_delta: r.refinement_delta,
            passed: r.passed,
            threshold_used: r.threshold_used,
        }
    }
}

fn build_config(args: &VerifyArgs) -> Result<VerifyConfig, CliError> {
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        return serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config file: {e}")));
    }
    let mut config = VerifyConfig::default();
    if let Some(v) = args.theta_points {
        config.theta_points = v;
    }
    if let Some(v) = args.sep_min {
        config.sep_min = v;
    }
    if let Some(v) = args.margin {
        config.margin = v;
    }
    if let Some(v) = args.pi_order {
        config.pi_order = v;
    }
    if let Some(v) = args.t_points {
        config.t_points = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.stability {
        config.stability = v;
    }
    Ok(config)
}

fn validate(config: &VerifyConfig) -> Result<(), CliError> {
    let positive = [
        ("sep_min", config.sep_min),
        ("margin", config.margin),
        ("stability", config.stability),
    ];
    for (name, v) in positive {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Config(format!("{name} must be positive")));
        }
    }
    if config.theta_points < 2 || config.t_points < 2 || config.pi_order < 2 {
        return Err(CliError::Config(
            "theta_points, t_points, and pi_order must be at least 2".into(),
        ));
    }
    Ok(())
}

pub fn run(args: VerifyArgs) -> Result<(), CliError> {
    let mut config = build_config(&args)?;
    validate(&config)?;
    if let Some(target) = &args.inject_fault {
        if target != "growth" {
            return Err(CliError::Config(format!(
                "--inject-fault supports only \"growth\", got {target:?}"
            )));
        }
        config.inject_fault = true;
    }
    let panel: Vec<ParamPair> = if args.params.is_empty() {
        default_panel()
    } else {
        args.params
            .iter()
            .map(|text| {
                let (a, b) = text
                    .split_once(',')
                    .ok_or_else(|| CliError::Config(format!("bad --params {text:?}")))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| CliError::Config(format!("bad --params {text:?}: {e}")))
                };
                Ok(ParamPair::new(parse(a)?, parse(b)?)?)
            })
            .collect::<Result<_, CliError>>()?
    };

    let reports = run_suite_filtered(&panel, &config, args.only.as_deref())?;
    let content = match args.format {
        Format::Table => format_table(&reports),
        Format::Json => to_json(&reports)?,
        Format::Csv => to_csv(&reports.iter().map(ReportRow::from).collect::<Vec<_>>())?,
    };
    write_output(args.output.as_ref(), &content)?;
    if suite_passed(&reports) {
        Ok(())
    } else {
        let failed = reports.iter().filter(|r| !r.passed).count();
        Err(CliError::Check(format!(
            "{failed} of {} checks failed",
            reports.len()
        )))
    }
}
