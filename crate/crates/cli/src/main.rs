//! `steiner` command-line driver.
//!
//! Exit codes: 0 verified, 1 refuted or failed consistency check, 2 usage
//! error, 3 inconclusive or size-limited.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;
use steiner_core::cache::Cache;
use steiner_core::{Context, Error, Status};

use args::Cli;
use output::{CacheStats, RunManifest, Timings};

fn exit_for_status(status: Status) -> u8 {
    match status {
        Status::Verified => 0,
        Status::Refuted => 1,
        Status::Inconclusive => 3,
    }
}

fn exit_for_error(err: &Error) -> u8 {
    match err {
        Error::SizeLimit(_) => 3,
        Error::Internal(_) => 1,
        Error::InvalidArgument(_) | Error::InvalidTree(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = match (&cli.global.cache_dir, cli.global.no_cache) {
        (_, true) => None,
        (Some(dir), false) => Some(Cache::new(dir)),
        (None, false) => Some(Cache::from_env()),
    };
    let ctx = Context { seed: cli.global.seed, normalization: cli.global.normalization.into(), cache, ..Context::default() };
    let ctx = match &cli.command {
        args::Command::Resultant { early_termination, .. } => Context { early_termination: *early_termination, ..ctx },
        _ => ctx,
    };
    let mut timings = Timings::start();
    let outcome = match commands::run(&cli.command, &ctx, &mut timings) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("steiner: {e}");
            return ExitCode::from(exit_for_error(&e));
        }
    };
    let cache = ctx.cache.as_ref().map(|c| CacheStats { hits: c.hits(), misses: c.misses() });
    let params = json!({
        "normalization": cli.global.normalization, "csv": cli.global.csv, "no_cache": cli.global.no_cache,
    });
    let command = serde_json::to_value(&cli.command).expect("arguments serialize");
    let manifest = RunManifest::new(command, params, cli.global.seed, cache, timings);
    if let Err(e) = output::emit(&outcome, &manifest, cli.global.csv) {
        eprintln!("steiner: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(exit_for_status(outcome.status))
}
