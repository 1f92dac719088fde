//! `tgf`: runs the tempered-algebra experiments from the command line and
//! writes self-describing CSV or JSON artifacts that `tgf replay` can
//! reproduce byte for byte.

pub mod artifact;
pub mod commands;
pub mod config;
pub mod error;
pub mod expr;

use std::fs;
use std::io::Write;

pub use artifact::Artifact;
pub use commands::{execute, render};
pub use config::{Cli, Command, Common, Format, RunConfig};
pub use error::{CliError, CliResult};

fn emit(text: &str, out: Option<&str>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Replay { input } => {
            // The embedded config is reused verbatim; only the destination
            // may change.
            let (config, _) = Artifact::parse(&fs::read_to_string(&input)?)?;
            emit(&render(&config)?, cli.common.out.as_deref())
        }
        command => {
            let config = RunConfig::new(cli.common, command);
            emit(&render(&config)?, config.common.out.as_deref())
        }
    }
}
