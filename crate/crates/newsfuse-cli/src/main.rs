//! `newsfuse`: newsvendor order quantities from sales history, sharpened
//! with uncertain external information.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use newsfuse::{
    critical_fractile, median, mmse, mvar, order_quantity, run_scenario, sample_variance, Dataset,
    DemandModel, Error, Method, NewsvendorInstance, Scenario,
};

use config::EstimateConfig;
use output::{
    sig10, ColumnSummary, DescribeReport, EstimateReport, NewsvendorReport, SimulateReport,
};

#[derive(Parser)]
#[command(
    name = "newsfuse",
    version,
    about = "Newsvendor inventory estimation with uncertain additional information",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fuse the empirical estimate with external sources from a config file
    Estimate(EstimateArgs),
    /// Critical fractile and order quantity for a demand column
    Newsvendor(NewsvendorArgs),
    /// Run a Monte Carlo scenario comparing the estimators
    Simulate(SimulateArgs),
    /// Per-column summary statistics and the correlation matrix
    Describe(DescribeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Mvar,
    Mmse,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Mvar => Method::Mvar,
            MethodArg::Mmse => Method::Mmse,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Normal,
    Empirical,
}

#[derive(Args)]
struct EstimateArgs {
    /// CSV file with the historical sales data
    #[arg(long)]
    data: PathBuf,
    /// JSON estimate configuration
    #[arg(long)]
    config: PathBuf,
    /// Estimator to run (overrides the config file)
    #[arg(long)]
    method: Option<MethodArg>,
    /// Bootstrap resample count (overrides the config file)
    #[arg(long)]
    nboots: Option<usize>,
    /// Bootstrap seed (overrides the config file)
    #[arg(long)]
    seed: Option<u64>,
    /// Eigenvalue-proportion cutoff in (0, 1] (overrides the config file)
    #[arg(long)]
    eig_cutoff: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct NewsvendorArgs {
    #[arg(long)]
    data: PathBuf,
    /// Sale price per unit
    #[arg(long)]
    price: f64,
    /// Purchase cost per unit
    #[arg(long)]
    cost: f64,
    /// Demand model for the quantile
    #[arg(long, value_enum, default_value_t = ModelArg::Normal)]
    model: ModelArg,
    /// Demand column (defaults to the first column in the file)
    #[arg(long)]
    column: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON scenario description
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Args)]
struct DescribeArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

/// Run failure with the exit code it maps to: 2 for input/validation
/// problems, 1 for numeric failures.
pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_validation() { 2 } else { 1 };
        Self {
            message: e.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Newsvendor(args) => cmd_newsvendor(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Describe(args) => cmd_describe(args),
    };
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn cmd_estimate(args: EstimateArgs) -> Result<String, CliError> {
    let data = Dataset::load_csv(&args.data)?;
    let run = EstimateConfig::load(&args.config)?.resolve(
        args.method.map(Method::from),
        args.nboots,
        args.seed,
        args.eig_cutoff,
    );
    run.problem.validate(&data)?;
    let result = match run.method {
        Method::Mvar => mvar(&data, &run.problem, &run.settings, run.eig_cutoff)?,
        Method::Mmse => mmse(&data, &run.problem, &run.settings, run.eig_cutoff)?,
    };
    let report = EstimateReport::new(&result, run.settings.seed);
    Ok(match args.output {
        OutputFormat::Json => output::to_json(&report),
        OutputFormat::Text => report.text(),
    })
}

fn cmd_newsvendor(args: NewsvendorArgs) -> Result<String, CliError> {
    if !(args.cost > 0.0 && args.cost < args.price) {
        return Err(CliError::usage(format!(
            "need 0 < cost < price, got cost {} and price {}",
            args.cost, args.price
        )));
    }
    let data = Dataset::load_csv(&args.data)?;
    let column = match args.column {
        Some(c) => c,
        None => data.column_names()[0].clone(),
    };
    let instance = NewsvendorInstance {
        unit_price: args.price,
        unit_cost: args.cost,
        demand_column: column.clone(),
    };
    let model = match args.model {
        ModelArg::Normal => DemandModel::Normal,
        ModelArg::Empirical => DemandModel::Empirical,
    };
    let report = NewsvendorReport {
        column,
        price: args.price,
        cost: args.cost,
        model: match model {
            DemandModel::Normal => "normal".into(),
            DemandModel::Empirical => "empirical".into(),
        },
        critical_fractile: sig10(critical_fractile(args.price, args.cost)?),
        order_quantity: sig10(order_quantity(&data, &instance, model)?),
    };
    Ok(match args.output {
        OutputFormat::Json => output::to_json(&report),
        OutputFormat::Text => report.text(),
    })
}

fn cmd_simulate(args: SimulateArgs) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.scenario.display())))?;
    let scenario: Scenario = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.scenario.display())))?;
    scenario.validate()?;
    let metrics = run_scenario(&scenario)?;
    let report = SimulateReport::new(&metrics);
    Ok(match args.output {
        OutputFormat::Json => output::to_json(&report),
        OutputFormat::Text => report.text(),
    })
}

fn cmd_describe(args: DescribeArgs) -> Result<String, CliError> {
    let data = Dataset::load_csv(&args.data)?;
    let names = data.column_names().to_vec();
    let mut columns = Vec::with_capacity(names.len());
    for name in &names {
        let values = data.column(name)?;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        columns.push(ColumnSummary {
            name: name.clone(),
            n: values.len(),
            mean: sig10(newsfuse::mean(values)),
            variance: sig10(sample_variance(values)?),
            median: sig10(median(values)?),
            min: sig10(min),
            max: sig10(max),
        });
    }
    let correlation = correlation_matrix(&data, &names)?;
    let report = DescribeReport {
        columns,
        correlation,
    };
    Ok(match args.output {
        OutputFormat::Json => output::to_json(&report),
        OutputFormat::Text => report.text(),
    })
}

fn correlation_matrix(data: &Dataset, names: &[String]) -> Result<Vec<Vec<f64>>, CliError> {
    let k = names.len();
    let mut matrix = vec![vec![0.0; k]; k];
    for i in 0..k {
        matrix[i][i] = 1.0;
        for j in (i + 1)..k {
            let x = data.column(&names[i])?;
            let y = data.column(&names[j])?;
            let mx = newsfuse::mean(x);
            let my = newsfuse::mean(y);
            let mut cov = 0.0;
            for (a, b) in x.iter().zip(y) {
                cov += (a - mx) * (b - my);
            }
            cov /= (x.len() - 1) as f64;
            let vx = sample_variance(x)?;
            let vy = sample_variance(y)?;
            let corr = if vx > 0.0 && vy > 0.0 {
                cov / (vx * vy).sqrt()
            } else {
                0.0
            };
            matrix[i][j] = sig10(corr);
            matrix[j][i] = matrix[i][j];
        }
    }
    Ok(matrix)
}
