use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tribloch::harness::{list_presets, parse_config, run_preset, run_scenario, Overrides};
use tribloch::Error;

#[derive(Parser)]
#[command(name = "tribloch", version, about = "Three-qubit generalized Bloch equation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Run a preset or a scenario file and write CSV plus manifest.
    Run {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Cross-check against the direct density-matrix propagator.
        #[arg(long)]
        oracle: Option<Switch>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "tau-max")]
        tau_max: Option<f64>,
    },
    /// List the built-in presets.
    ListPresets,
    /// Parse a scenario file and report errors without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_config(path: &PathBuf) -> tribloch::Result<tribloch::harness::ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn execute(cli: Cli) -> tribloch::Result<()> {
    match cli.command {
        Command::ListPresets => {
            for p in list_presets() {
                println!("{:<12} {}", p.name, p.description);
            }
        }
        Command::Validate { config } => {
            let cfg = read_config(&config)?;
            println!("{}: ok ({} channels, tau_max {})", config.display(), cfg.measures.len(), cfg.tau_max);
        }
        Command::Run { preset, config, out, oracle, dt, tau_max } => {
            let overrides = Overrides { oracle: oracle.map(|s| matches!(s, Switch::On)), dt, tau_max };
            let paths = match (preset, config) {
                (Some(name), _) => run_preset(&name, &out, &overrides)?,
                (None, Some(path)) => {
                    let mut cfg = read_config(&path)?;
                    overrides.apply(&mut cfg)?;
                    vec![run_scenario(&cfg, &out)?.1]
                }
                (None, None) => return Err(Error::Domain("either --preset or --config is required".into())),
            };
            for p in paths {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
