use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use schwartzkit_cli::commands::{default_grid, execute, resolve};
use schwartzkit_cli::config::{Command, ConfigError, Flavor, Format, GridSpec, RunConfig};
use schwartzkit_cli::report::Report;

#[derive(Parser)]
#[command(
    name = "schwartzkit",
    version,
    about = "Numerical experiments on Hadamard-product Schwartz functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Seminorm certificate and Fourier decay of 1/∏(1 + x²/a_n²).
    VerifyMainTheorem,
    /// Convolution factorization of battery targets.
    Factorize,
    /// δ-approximating operators and their pairing traces.
    Delta,
    /// Transform of 1/(x² + a²) against the Poisson kernel.
    Poisson,
    /// Growth orders of Σ zⁿ/(n!)^p.
    Growth,
    /// The full acceptance battery.
    Suite,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Schwartz,
    Compact,
}

#[derive(Args)]
struct Common {
    /// Grid half-width L.
    #[arg(long = "grid-L", global = true)]
    grid_l: Option<f64>,
    /// Number of grid samples (a power of two).
    #[arg(long = "grid-N", global = true)]
    grid_n: Option<usize>,
    /// Zero sequence: linear:S[:COUNT], odd:S[:COUNT], explicit:a,b,… or @FILE.
    #[arg(long, global = true)]
    zeros: Option<String>,
    /// Number of operator terms J.
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Number of product factors N.
    #[arg(long = "product-terms", global = true)]
    product_terms: Option<usize>,
    /// Half-width σ of the support for the compact flavor.
    #[arg(long, global = true)]
    sigma: Option<f64>,
    #[arg(long, value_enum, global = true)]
    flavor: Option<FlavorArg>,
    /// Battery target label; repeat for several.
    #[arg(long = "target", global = true)]
    targets: Vec<String>,
    /// Bounds B_0, B_1, … as a comma-separated list.
    #[arg(long, value_delimiter = ',', global = true)]
    bounds: Option<Vec<f64>>,
    /// Seminorm orders m,n for the certificate.
    #[arg(long, value_delimiter = ',', global = true)]
    orders: Option<Vec<u64>>,
    /// Tolerance of the command's main metric.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, value_enum, global = true)]
    format: Option<FormatArg>,
    /// Directory for the report and plot data.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

fn command_of(c: Cmd) -> Command {
    match c {
        Cmd::VerifyMainTheorem => Command::VerifyMainTheorem,
        Cmd::Factorize => Command::Factorize,
        Cmd::Delta => Command::Delta,
        Cmd::Poisson => Command::Poisson,
        Cmd::Growth => Command::Growth,
        Cmd::Suite => Command::Suite,
    }
}

fn build_config(cli: Cli) -> Result<RunConfig, ConfigError> {
    let a = cli.common;
    let file = match &a.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let orders = match a.orders.as_deref() {
        Some([m, n]) => Some((*m as u32, *n as usize)),
        Some(_) => return Err(ConfigError::new("orders", "expected m,n")),
        None => None,
    };
    let flags = RunConfig {
        command: Some(command_of(cli.command)),
        grid: None,
        zeros: a.zeros,
        terms: a.terms,
        factors: a.product_terms,
        sigma: a.sigma,
        flavor: a.flavor.map(|f| match f {
            FlavorArg::Schwartz => Flavor::Schwartz,
            FlavorArg::Compact => Flavor::Compact,
        }),
        battery: (!a.targets.is_empty()).then_some(a.targets),
        bounds: a.bounds,
        orders,
        tolerance: a.tolerance,
        out: a.out,
        format: a.format.map(|f| match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }),
        seed: a.seed,
    };
    let mut c = file.overridden_by(flags);
    if a.grid_l.is_some() || a.grid_n.is_some() {
        let command = c.command.expect("set from the subcommand");
        let base = c
            .grid
            .or_else(|| default_grid(command, c.flavor.unwrap_or_default()))
            .unwrap_or(GridSpec::new(16.0, 1024));
        c.grid = Some(GridSpec::new(
            a.grid_l.unwrap_or(base.half_width),
            a.grid_n.unwrap_or(base.len),
        ));
    }
    resolve(c)
}

fn print_report(r: &mut Report, format: Format) -> std::io::Result<()> {
    if let Some(dir) = r.config.out.clone() {
        r.write_to(&dir, format == Format::Csv)?;
    }
    match format {
        Format::Json => println!("{}", r.to_json()),
        Format::Csv => {
            let rows: Vec<_> = r.metrics.iter().collect();
            Report::write_metrics_csv(&rows, std::io::stdout().lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(cli) {
        Ok(c) => c,
        Err(e) => {
            let doc = serde_json::json!({ "error": e });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("errors serialize")
            );
            return ExitCode::from(2);
        }
    };
    let format = config.format.unwrap_or_default();
    let mut report = execute(config);
    if let Err(e) = print_report(&mut report, format) {
        eprintln!("cannot write the report: {e}");
        return ExitCode::from(3);
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
