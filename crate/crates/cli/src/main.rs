//! `soergel`: command-line front end for the exact Soergel-bimodule engine.

mod cache;
mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::basis::BasisKind;
use commands::verify::{Fault, Suite};
use commands::Ctx;
use config::{Config, Format};
use report::Provenance;

#[derive(Parser)]
#[command(name = "soergel", version, about = "Exact Soergel-bimodule idempotents and Hecke algebra bases")]
struct Cli {
    /// JSON configuration file. Flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Degree budget for truncated checks (default 2·length + 8).
    #[arg(long, global = true)]
    truncation: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory of the result cache.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache for this run.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coxeter system checks.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Reduced expressions of an element and the braid moves between them.
    Rex { word: String },
    /// Cores, gcores and move tuples of a reduced word.
    Cores { word: String },
    /// Build and check a named morphism.
    Morphism {
        #[command(subcommand)]
        which: MorphismKind,
    },
    /// Table of basis elements up to a length.
    Basis {
        #[arg(value_enum)]
        kind: BasisKind,
        #[arg(long, default_value_t = 4)]
        up_to: usize,
    },
    /// e, d and KL bases side by side.
    Compare {
        #[arg(long, default_value_t = 4)]
        up_to: usize,
    },
    /// Run check suites; exits nonzero if any check fails.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        up_to: usize,
        /// Corrupt a morphism before checking (for testing the verifier).
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Subcommand)]
enum GroupAction {
    /// Build the system and print its field constants.
    Validate,
}

#[derive(Subcommand)]
enum MorphismKind {
    /// `f_sr : θ_sθ_r⋯ → θ_rθ_s⋯`.
    Fsr { s: String, r: String },
    /// The idempotent `f²_sr(n)` on `θ_sθ_r⋯` (n letters).
    F2 { s: String, r: String, n: usize },
}

fn config_from(cli: &Cli) -> anyhow::Result<Config> {
    let mut c = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if cli.truncation.is_some() {
        c.truncation = cli.truncation;
    }
    if cli.format.is_some() {
        c.format = cli.format;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.jobs.is_some() {
        c.jobs = cli.jobs;
    }
    if cli.cache_dir.is_some() {
        c.cache_dir = cli.cache_dir.clone();
    }
    Ok(c)
}

/// The command line minus global flags, whose effect is already in the config.
fn verb_args(args: impl Iterator<Item = String>) -> Vec<String> {
    const WITH_VALUE: [&str; 6] = ["--config", "--truncation", "--format", "--seed", "--jobs", "--cache-dir"];
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if std::mem::take(&mut skip) || a == "--no-cache" {
            continue;
        }
        let name = a.split('=').next().unwrap_or_default();
        if WITH_VALUE.contains(&name) {
            skip = !a.contains('=');
            continue;
        }
        out.push(a);
    }
    out
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let config = config_from(&cli)?;
    let sys = config.validate()?;
    if let Some(j) = config.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    let cache = cache::Cache::new(if cli.no_cache { None } else { config.cache_dir.as_deref() });
    let format = config.format();
    let mut ctx = Ctx { config, sys, cache, last_key: None };
    let report = match &cli.command {
        Command::Group { action: GroupAction::Validate } => commands::group::validate(&ctx)?,
        Command::Rex { word } => commands::words::rex(&mut ctx, word)?,
        Command::Cores { word } => commands::words::cores(&mut ctx, word)?,
        Command::Morphism { which: MorphismKind::Fsr { s, r } } => commands::morphism::fsr(&mut ctx, s, r)?,
        Command::Morphism { which: MorphismKind::F2 { s, r, n } } => commands::morphism::f2(&mut ctx, s, r, *n)?,
        Command::Basis { kind, up_to } => commands::basis::basis(&mut ctx, *kind, *up_to)?,
        Command::Compare { up_to } => commands::basis::compare(&mut ctx, *up_to)?,
        Command::Verify { suite, up_to, inject_fault } => commands::verify::verify(&mut ctx, *suite, *up_to, *inject_fault)?,
    };
    let prov = Provenance {
        tool: concat!("soergel ", env!("CARGO_PKG_VERSION")).into(),
        command: verb_args(std::env::args().skip(1)),
        config: serde_json::to_value(&ctx.config)?,
        cache_key: ctx.last_key.clone(),
    };
    let text = report::render(&report, &prov, format)?;
    std::io::stdout().write_all(text.as_bytes())?;
    Ok(report.ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
