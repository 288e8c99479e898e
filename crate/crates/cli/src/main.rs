use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cqed_core::scenario::{
    parse_values, run_scenario, sweep, write_outputs, write_sweep, ScenarioConfig, ScenarioError, ScenarioKind,
};

#[derive(Parser)]
#[command(name = "cqed", version, about = "Circuit-QED scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config and write its CSV, optional SVG and manifest.
    Run {
        config: PathBuf,
        /// Relative integrator tolerance (absolute tolerance is tol / 100).
        #[arg(long)]
        tol: Option<f64>,
        /// Reserved; recorded in the manifest.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a config once per value of one scalar parameter.
    Sweep {
        config: PathBuf,
        /// Parameter path such as scenario.L_J_nH.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        values: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// List the scenario kinds.
    ListScenarios,
}

fn load(path: &Path, tol: Option<f64>) -> Result<ScenarioConfig, ScenarioError> {
    let mut config = ScenarioConfig::from_path(path)?;
    if let Some(tol) = tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(ScenarioError::Validation { path: "--tol".into(), message: format!("must lie in (0, 1), got {tol}") });
        }
        if !config.params.set_tolerance(tol, tol * 1e-2) {
            eprintln!("note: --tol ignored, {} does not integrate", config.kind().name());
        }
    }
    Ok(config)
}

fn execute(command: Command) -> Result<(), ScenarioError> {
    match command {
        Command::Run { config, tol, seed } => {
            let config = load(&config, tol)?;
            let out = run_scenario(&config)?;
            let files = write_outputs(&out, seed)?;
            println!("{}: {} rows -> {}", config.kind().name(), out.table.rows.len(), files.csv.display());
            if let Some(svg) = files.svg {
                println!("plot -> {}", svg.display());
            }
            println!("manifest -> {}", files.manifest.display());
        }
        Command::Sweep { config, axis, values, jobs, tol } => {
            let config = load(&config, tol)?;
            let values = parse_values(&values)?;
            let result = sweep(&config, &axis, &values, jobs)?;
            let manifest = write_sweep(&config, &result)?;
            println!(
                "{} over {}: {} points, {} failed -> {}",
                config.kind().name(),
                axis,
                values.len(),
                result.failures,
                config.output.csv_path.display()
            );
            println!("manifest -> {}", manifest.display());
        }
        Command::ListScenarios => {
            for kind in ScenarioKind::ALL {
                println!("{:<20} {}", kind.name(), kind.description());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
