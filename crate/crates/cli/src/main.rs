//! `tribound`: colorings, weights, obstruction sets and type-III move
//! lower bounds for link diagrams.

mod commands;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{parse_coloring_choice, resolve_cache_dir, CertifyArgs, ColoringChoice, DeltaArgs};
use report::REPORT_SCHEMA;

#[derive(Parser, Debug)]
#[command(name = "tribound", version, about)]
struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct CacheOpts {
    /// Cache directory for obstruction levels (default: $TRIBOUND_CACHE,
    /// then the user cache directory).
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Neither read nor write the cache.
    #[arg(long, conflicts_with = "cache")]
    no_cache: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a diagram file and print its derived structure.
    Validate {
        path: PathBuf,
        /// Include arcs, faces, signs and components.
        #[arg(long)]
        emit_derived: bool,
    },
    /// List Fox colorings in canonical order.
    Colorings {
        path: PathBuf,
        #[arg(short)]
        n: u32,
        /// Also extend each coloring to regions with this outer color.
        #[arg(short = 's', long)]
        outer_color: Option<u32>,
        #[arg(long)]
        nontrivial_only: bool,
    },
    /// Weight of one coloring, or of all of them with the value set.
    Weight {
        path: PathBuf,
        #[arg(short)]
        n: u32,
        /// Polynomial in x, y, z.
        #[arg(short)]
        f: String,
        /// Outer region color.
        #[arg(short = 's', long)]
        outer_color: u32,
        /// Coloring id, or `all`.
        #[arg(long, default_value = "all", value_parser = parse_coloring_choice)]
        coloring: ColoringChoice,
    },
    /// Image of the coboundary and the obstruction levels.
    Delta {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        f: String,
        #[arg(long, default_value_t = 1)]
        max_m: usize,
        /// Refuse to build a level larger than this.
        #[arg(long)]
        level_cap: Option<usize>,
        #[command(flatten)]
        cache: CacheOpts,
    },
    /// Certify a lower bound on type-III moves from SOURCE to TARGET.
    Certify {
        source: PathBuf,
        target: PathBuf,
        #[arg(short)]
        n: u32,
        #[arg(short)]
        f: String,
        #[arg(short = 's', long)]
        outer_color: u32,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[command(flatten)]
        cache: CacheOpts,
    },
    /// Recompute every reference value from the bundled fixtures.
    Reproduce {
        /// Read d1.json .. d6.json from this directory instead.
        #[arg(long, value_name = "DIR")]
        fixtures: Option<PathBuf>,
        #[command(flatten)]
        cache: CacheOpts,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, commands::CliError> {
    match cli.command {
        Command::Validate { path, emit_derived } => commands::validate(&path, emit_derived),
        Command::Colorings { path, n, outer_color, nontrivial_only } => {
            commands::colorings(&path, n, outer_color, nontrivial_only)
        }
        Command::Weight { path, n, f, outer_color, coloring } => {
            commands::weight(&path, n, &f, outer_color, coloring)
        }
        Command::Delta { n, f, max_m, level_cap, cache } => commands::delta(DeltaArgs {
            n,
            f: &f,
            max_m,
            cache: resolve_cache_dir(cache.cache, cache.no_cache),
            level_cap,
        }),
        Command::Certify { source, target, n, f, outer_color, max_m, cache } => {
            commands::certify(CertifyArgs {
                source: &source,
                target: &target,
                n,
                f: &f,
                s: outer_color,
                max_m,
                cache: resolve_cache_dir(cache.cache, cache.no_cache),
            })
        }
        Command::Reproduce { fixtures, cache } => {
            commands::reproduce(fixtures.as_deref(), resolve_cache_dir(cache.cache, cache.no_cache))
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let json = cli.json;
    let start = Instant::now();
    match run(cli) {
        Ok(mut outcome) => {
            outcome.report.timing = json!({ "seconds": start.elapsed().as_secs_f64() });
            let text = if json {
                serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n"
            } else {
                outcome.text
            };
            emit(&text);
            ExitCode::from(outcome.status.exit_code())
        }
        Err(e) => {
            if json {
                let body = json!({
                    "schema": REPORT_SCHEMA,
                    "error": { "kind": e.kind(), "message": e.to_string() },
                });
                emit(&(serde_json::to_string_pretty(&body).expect("error serializes") + "\n"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
