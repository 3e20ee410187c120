use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nvosc::cli::{self, CliError};
use nvosc::config::{GridSpec, Scenario, ScenarioConfig};

/// Exponentially damped oscillators with a prescribed motion history.
#[derive(Parser)]
#[command(name = "osc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Roots, residues and decay rates as JSON.
    Eigen(ScenarioArgs),
    /// Closed-form response as CSV `t,x,xdot,psi`.
    Respond(ScenarioArgs),
    /// Runge-Kutta reference response, same CSV schema.
    Oracle(ScenarioArgs),
    /// Column-wise maximum differences between two trajectory CSVs.
    Compare { a: PathBuf, b: PathBuf },
    /// Decay-bound table as CSV (with --out) and a JSON summary on stdout.
    Bounds(ScenarioArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides grid.dt from the config.
    #[arg(long)]
    dt: Option<f64>,
    /// Overrides grid.t_end from the config.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario, CliError> {
        let mut scenario = ScenarioConfig::load(&self.config)?;
        if self.dt.is_some() || self.t_end.is_some() {
            let base = scenario.grid.clone();
            let t_end = self.t_end.or(base.as_ref().map(|g| g.t_end));
            let dt = self.dt.or(base.as_ref().map(|g| g.dt));
            match (t_end, dt) {
                (Some(t_end), Some(dt)) => {
                    nvosc::response::grid_steps(t_end, dt)?;
                    scenario.grid = Some(GridSpec { t_end, dt });
                }
                _ => {
                    return Err(CliError::Input(
                        "grid: both t_end and dt are needed".into(),
                    ))
                }
            }
        }
        Ok(scenario)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Eigen(args) => println!("{}", cli::cmd_eigen(&args.load()?)?),
        Command::Respond(args) => cli::cmd_respond(&args.load()?, args.out.as_deref())?,
        Command::Oracle(args) => cli::cmd_oracle(&args.load()?, args.out.as_deref())?,
        Command::Compare { a, b } => println!("{}", cli::cmd_compare(&a, &b)?),
        Command::Bounds(args) => println!("{}", cli::cmd_bounds(&args.load()?, args.out.as_deref())?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("osc: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
