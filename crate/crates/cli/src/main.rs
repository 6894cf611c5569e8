mod cli;
mod commands;
mod error;
mod output;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use blockade::hash::content_hash;
use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::{dispatch, Ctx};
use crate::error::{CliError, Result};
use crate::output::{hashed_artifacts, print_run, write_tree, RunManifest};

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Exit::Clean) => ExitCode::SUCCESS,
        Err(Exit::Usage) => ExitCode::from(1),
        Err(Exit::Fail(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

enum Exit {
    /// Help or version was printed.
    Clean,
    /// clap already printed the usage error.
    Usage,
    Fail(CliError),
}

impl From<CliError> for Exit {
    fn from(e: CliError) -> Self {
        Exit::Fail(e)
    }
}

fn run(argv: Vec<OsString>) -> std::result::Result<(), Exit> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return Err(Exit::Clean);
        }
        Err(e) => {
            let _ = e.print();
            return Err(Exit::Usage);
        }
    };
    if let Command::Replay { manifest } = &cli.command {
        let argv = replay_argv(manifest)?;
        let mut full = vec![OsString::from("blockade")];
        full.extend(argv.into_iter().map(OsString::from));
        if let Ok(c) = Cli::try_parse_from(&full) {
            if matches!(c.command, Command::Replay { .. }) {
                return Err(CliError::Usage("a manifest cannot replay another replay".into()).into());
            }
        }
        return run(full);
    }
    let args: Vec<String> = argv[1..].iter().map(|a| a.to_string_lossy().into_owned()).collect();
    execute(cli, args).map_err(Exit::Fail)
}

fn execute(cli: Cli, args: Vec<String>) -> Result<()> {
    let start = Instant::now();
    let global = &cli.global;
    #[cfg(feature = "parallel")]
    if global.threads > 1 {
        // a second build attempt in the same process (replay) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(global.threads).build_global();
    }
    let ctx = Ctx::new(global)?;
    let (subcommand, outcome) = dispatch(&cli.command, &ctx)?;
    let config = outcome.config.clone();
    let artifacts = outcome.artifacts(global.format, global.emit_plot_data);
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand,
        argv: args,
        seed: global.seed,
        threads: global.threads,
        inputs: ctx.inputs.into_files(),
        config,
        artifacts: hashed_artifacts(&artifacts),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    match &global.out {
        Some(dir) => write_tree(dir, &artifacts, &manifest),
        None => print_run(&artifacts, &manifest),
    }
}

/// Argument list recorded in a manifest, after checking that every input
/// still has the recorded content.
fn replay_argv(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let m: RunManifest = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    for input in &m.inputs {
        let bytes = std::fs::read(&input.path).map_err(|source| CliError::Io {
            path: input.path.clone().into(),
            source,
        })?;
        if content_hash(&bytes) != input.hash {
            return Err(CliError::Parse {
                path: input.path.clone().into(),
                message: "content differs from the hash recorded in the manifest".into(),
            });
        }
    }
    Ok(m.argv)
}
