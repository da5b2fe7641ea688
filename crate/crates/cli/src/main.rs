mod args;
mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context as _, Result};
use clap::Parser;
use serde_json::json;

use crate::args::{Cli, Format};
use crate::output::{meta_path, plot_script, write_file};

/// A bad request that clap could not catch.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_IO: u8 = 4;

fn main() -> ExitCode {
    let args: Vec<String> = match std::env::args_os().map(|a| a.into_string()).collect() {
        Ok(a) => a,
        Err(_) => return fail(&anyhow::Error::new(UsageError("non-UTF-8 argument".into()))),
    };
    let args = match config::merge(args) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    if let Some(n) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| UsageError(format!("thread pool: {e}")))?;
    }
    if g.plot.is_some() && (g.out.is_none() || g.format != Format::Csv) {
        return Err(UsageError("--plot needs --out and --format csv".into()).into());
    }
    let ctx = commands::Context {
        seed: g.seed,
        timing: g.timing,
    };
    let start = Instant::now();
    let report = commands::run(&cli.command, &ctx)?;
    let mut meta = json!({
        "tool": "expsum",
        "version": env!("CARGO_PKG_VERSION"),
        "command": report.command,
        "seed": g.seed,
    });
    if g.timing {
        meta["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    let text = report.render(g.format, &meta)?;
    match &g.out {
        Some(path) => {
            write_file(path, &text)?;
            if g.format != Format::Json {
                write_file(
                    &meta_path(path),
                    &(serde_json::to_string_pretty(&meta)? + "\n"),
                )?;
            }
            if let Some(plot) = &g.plot {
                write_file(plot, &plot_script(&report, path)?)?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .context("writing stdout")?;
            stdout.flush().context("writing stdout")?;
        }
    }
    Ok(())
}

/// Prints a one-line `error: kind=… [guard=…] message=…` and picks the exit code.
fn fail(err: &anyhow::Error) -> ExitCode {
    let message = format!("{err:#}").replace('\n', " ");
    let (kind, code, guard) = classify(err);
    let guard = guard.map(|g| format!(" guard={g}")).unwrap_or_default();
    eprintln!("error: kind={kind}{guard} message={message}");
    ExitCode::from(code)
}

fn classify(err: &anyhow::Error) -> (&'static str, u8, Option<&'static str>) {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<expsum_core::Error>() {
            return match e.guard_name() {
                Some(g) => ("guard", EXIT_GUARD, Some(g)),
                None => ("invalid", EXIT_USAGE, None),
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return ("io", EXIT_IO, None);
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            if e.is_io_error() {
                return ("io", EXIT_IO, None);
            }
        }
        if cause.downcast_ref::<UsageError>().is_some() {
            return ("usage", EXIT_USAGE, None);
        }
    }
    ("usage", EXIT_USAGE, None)
}
