mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{read_config_file, Layer, RunConfig, Usage, UsageError};

#[derive(Parser)]
#[command(name = "pbosons", version, about = "Numerical verification of pseudo-bosonic ladder structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on one single-mode family.
    Verify(Flags),
    /// Classify the vacuum norm series over a parameter grid.
    Sweep(Flags),
    /// Solve the kernel recurrence of a power-deformed lowering operator.
    Nogo(Flags),
    /// Two-mode checks: quadratures, Hamiltonians, two-index family, counterexample.
    Landau(Flags),
}

#[derive(Args)]
struct Flags {
    /// Family name (gauss-lowering, gauss-raising, power-raising, dual-power-lowering).
    #[arg(long)]
    family: Option<String>,
    /// Deformation parameter `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Deformation parameter `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Per-mode truncation dimension.
    #[arg(long)]
    dim: Option<usize>,
    /// Highest ladder index checked.
    #[arg(long)]
    nmax: Option<usize>,
    /// Boundary rows excluded from operator identities.
    #[arg(long)]
    margin: Option<usize>,
    /// Exponent of the power deformation (nogo).
    #[arg(long)]
    power: Option<usize>,
    /// Number of kernel terms (nogo).
    #[arg(long)]
    kmax: Option<usize>,
    /// Parameter grid `a,b,c` or `start:stop:step` (sweep).
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Tolerance override `NAME=VALUE`; repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Output format: json, csv or text.
    #[arg(long)]
    format: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` config file; flags win over it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn layer(&self) -> Usage<Layer> {
        Ok(Layer {
            family: self.family.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            dim: self.dim,
            nmax: self.nmax,
            margin: self.margin,
            format: self.format.clone(),
            out: self.out.clone(),
            power: self.power,
            kmax: self.kmax,
            grid: self.grid.clone(),
            tolerances: self
                .tol
                .iter()
                .map(|t| config::parse_tolerance(t))
                .collect::<Usage<_>>()?,
        })
    }
}

fn run(cli: Cli) -> Usage<bool> {
    let (name, flags, defaults, action): (_, _, _, fn(&RunConfig) -> Usage<report::Report>) = match &cli.command {
        Command::Verify(f) => ("verify", f, &commands::VERIFY_DEFAULTS, commands::verify),
        Command::Sweep(f) => ("sweep", f, &commands::SWEEP_DEFAULTS, commands::sweep),
        Command::Nogo(f) => ("nogo", f, &commands::NOGO_DEFAULTS, commands::nogo),
        Command::Landau(f) => ("landau", f, &commands::LANDAU_DEFAULTS, commands::landau),
    };
    let mut layer = flags.layer()?;
    if let Some(path) = &flags.config {
        layer = layer.over(read_config_file(path)?);
    }
    let cfg = RunConfig::resolve(name, layer, defaults, flags.config.clone())?;
    let report = action(&cfg)?;
    let text = report.render(cfg.format);
    match &cfg.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
        }
    }
    Ok(report.any_failed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
