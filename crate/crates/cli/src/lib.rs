//! Command-line front end: flag parsing, the sweep configuration grammar and
//! dataset serialisation.

pub mod commands;
pub mod config;
pub mod error;
pub mod number;
pub mod output;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> CliResult<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}
