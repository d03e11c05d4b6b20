//! Command line front end for `esu-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;
pub use error::{CliError, Result};
pub use output::{Format, Report};

#[derive(Debug, Parser)]
#[command(name = "esu", version, about = "Symmetric semi-classical solutions on the Einstein static universe")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Targets Y1, Y2 and the constants they are built from.
    Targets(Common),
    /// Structure of the solution set.
    Classify(Common),
    /// An explicit solution supported on modes 0 and n_high.
    Solve(Common),
    /// The entropy-minimising solution and the KMS temperature if one exists.
    Minimize(Common),
    /// Observables of a state: two-point function, energy and pressure.
    Evaluate(Common),
    /// Targets and classification over a parameter grid.
    Sweep(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Upper mode for `solve`, overriding the configuration.
    #[arg(long)]
    pub n_high: Option<u64>,
    /// Residual tolerance for `solve` and `minimize`, relative to max(1, |Y1|, |Y2|).
    #[arg(long)]
    pub tol: Option<f64>,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Targets(c)
            | Command::Classify(c)
            | Command::Solve(c)
            | Command::Minimize(c)
            | Command::Evaluate(c)
            | Command::Sweep(c) => c,
        }
    }
}

/// Run one command and return its report.
pub fn run(command: &Command) -> Result<Report> {
    let opts = command.common();
    let cfg = RunConfig::load(&opts.config)?;
    match command {
        Command::Targets(_) => commands::cmd_targets(&cfg),
        Command::Classify(_) => commands::cmd_classify(&cfg),
        Command::Solve(_) => commands::cmd_solve(&cfg, opts.n_high, opts.tol),
        Command::Minimize(_) => commands::cmd_minimize(&cfg, opts.tol),
        Command::Evaluate(_) => commands::cmd_evaluate(&cfg),
        Command::Sweep(_) => sweep::cmd_sweep(&cfg),
    }
}

/// Run and write the rendered report to `--out` or standard output.
pub fn execute(cli: &Cli) -> Result<()> {
    let report = run(&cli.command)?;
    let opts = cli.command.common();
    let text = report.render(opts.format);
    match &opts.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
