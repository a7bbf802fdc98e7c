//! Command-line front end: instance files, bound tables, certification
//! sweeps and condition-number scans.

pub mod args;
pub mod commands;
pub mod format;
pub mod instance;

use std::io::Write;

use anyhow::Result;

pub use args::Cli;
pub use commands::Outcome;

/// Runs a parsed command line, writing the report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    if let Some(n) = cli.threads {
        // Fails only if the pool was already built, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match &cli.command {
        args::Command::Eig(a) => commands::eig(a, out),
        args::Command::Bounds(a) => commands::bounds(a, out),
        args::Command::Verify(a) => commands::verify(a, out),
        args::Command::Scan(a) => commands::scan_cmd(a, out),
    }
}
