use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use recurrence::config::{catalog, AnalysisConfig, Format};
use recurrence::{oracle, report, Error};

#[derive(Parser)]
#[command(name = "recurrence", version, about = "Certified recurrence analysis of group actions on Cantor spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analyzer on a configured system and print the report.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the seed in the configuration.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the format in the configuration.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Brute-force reference computations: ball-count, kset, cone, factor-scan, return-scan.
    Oracle {
        subcommand: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Built-in systems.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

fn analyze(path: &PathBuf, seed: Option<u64>, format: Option<FormatArg>) -> Result<bool, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut config = AnalysisConfig::from_toml(&text)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    match format {
        Some(FormatArg::Json) => config.format = Format::Json,
        Some(FormatArg::Text) => config.format = Format::Text,
        None => {}
    }
    let report = report::run(&config)?;
    match config.format {
        Format::Json => emit(&format!("{}\n", report.to_json())),
        Format::Text => emit(&report.to_text()),
    }
    Ok(report.consistency.consistent)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { config, seed, format } => analyze(&config, seed, format).map(|consistent| {
            if consistent {
                0
            } else {
                eprintln!("error: the equivalence cross-check found a violation");
                4
            }
        }),
        Command::Oracle { subcommand, args } => oracle::run(&subcommand, &args).map(|out| {
            emit(&format!("{out}\n"));
            0
        }),
        Command::Catalog { action: CatalogAction::List } => {
            let list: String = catalog().iter().map(|e| format!("{:<20} {}\n", e.name, e.description)).collect();
            emit(&list);
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
