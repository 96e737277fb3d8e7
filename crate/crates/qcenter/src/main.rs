use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qcenter::{load_scenario, presets, read_scenario_source, run_scenario, Overrides, QcError};

#[derive(Parser)]
#[command(name = "qcenter", version, about = "Quantum centers of Hamiltonian actions on symplectic vector spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a scenario and write a report.
    Run {
        /// Scenario file, or `preset:<name>`.
        scenario: String,
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        report: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario without running it.
    Validate { scenario: String },
    /// List the embedded scenarios.
    ListPresets,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn run(cli: Cli) -> Result<bool, QcError> {
    match cli.command {
        Command::Run { scenario, truncation, max_degree, report, out } => {
            let text = read_scenario_source(&scenario)?;
            let sc = load_scenario(&text, Overrides { truncation, max_degree })?;
            let result = run_scenario(&sc);
            let rendered = match report {
                Format::Text => result.to_text(),
                Format::Json => result.to_json(),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, rendered).map_err(|e| QcError::Io(format!("{}: {e}", path.display())))?
                }
                None => print!("{rendered}"),
            }
            if !result.passed {
                eprintln!("scenario {}: assertion failures", sc.name);
            }
            Ok(result.passed)
        }
        Command::Validate { scenario } => {
            let text = read_scenario_source(&scenario)?;
            let sc = load_scenario(&text, Overrides::default())?;
            println!(
                "{}: ok (n = {}, dim g = {}, {} lifts, tasks: {})",
                sc.name,
                sc.space().n(),
                sc.action.lie().dim(),
                sc.lifts.len(),
                sc.tasks.iter().map(|t| t.name()).collect::<Vec<_>>().join(", ")
            );
            Ok(true)
        }
        Command::ListPresets => {
            for name in presets::names() {
                println!("{name}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qcenter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
