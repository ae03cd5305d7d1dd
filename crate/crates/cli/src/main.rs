//! Command-line front end: `verify`, `audit`, and `catalog list`.
//!
//! Exit codes: 0 = all checks passed, 1 = at least one violated inequality,
//! 2 = configuration or runtime error.

mod config;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "chenricci", version, about = "Curvature engine and Chen-Ricci inequality verifier for Riemannian submersions and maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured inequality checks and write a report.
    Verify {
        /// Path to the JSON run configuration.
        config: PathBuf,
        /// Override the sampler seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the sampler point count.
        #[arg(long)]
        samples: Option<usize>,
        /// Report format: json or md.
        #[arg(long)]
        format: Option<String>,
        /// Report path (overrides config output.path).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Omit the timestamp so reports are byte-reproducible.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Run only the space-form conformance check and the sign audit.
    Audit {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Catalog inspection.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// One line per entry: id with parameter signature and description.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Catalog { action: CatalogAction::List } => {
            for (sig, descr) in chenricci_core::catalog::list() {
                println!("{sig:<24} {descr}");
            }
            ExitCode::SUCCESS
        }
        Command::Verify { config, seed, samples, format, out, no_timestamp } => {
            execute(config, seed, samples, format, out, no_timestamp, false)
        }
        Command::Audit { config, seed, samples, format, out, no_timestamp } => {
            execute(config, seed, samples, format, out, no_timestamp, true)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn execute(
    config_path: PathBuf,
    seed: Option<u64>,
    samples: Option<usize>,
    format: Option<String>,
    out: Option<PathBuf>,
    no_timestamp: bool,
    audit_only: bool,
) -> ExitCode {
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match RunConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out_path = out.or_else(|| {
        cfg.output.as_ref().and_then(|o| o.path.as_ref()).map(PathBuf::from)
    });
    let fmt = format
        .or_else(|| cfg.output.as_ref().map(|o| o.format.clone()))
        .unwrap_or_else(|| "json".into());
    match run::run(cfg, seed, samples, !no_timestamp, audit_only) {
        Ok(outcome) => {
            if let Some(path) = out_path {
                if let Err(e) = outcome.report.write_atomic(&path, &fmt) {
                    eprintln!("error: cannot write report to {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                let body = match fmt.as_str() {
                    "md" | "markdown" => outcome.report.to_markdown(),
                    _ => outcome.report.to_json(),
                };
                print!("{body}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
