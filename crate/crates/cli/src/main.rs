//! `mj-singular`: exact classification of curve and surface singularities
//! from the command line.
//!
//! Subcommands map onto the library's public operations; reports are JSON
//! with stable key order (or a plain summary with `--plain`).  Exit codes:
//! 0 for a definite result, 2 for `INCONCLUSIVE`, 1 for errors.

mod commands;
mod doc;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};

use commands::{ClassifyOpts, Outcome};

#[derive(Parser)]
#[command(
    name = "mj-singular",
    version,
    about = "Exact classification of curve and surface germs by tangent cone, jet, and Newton polygon criteria"
)]
struct Cli {
    /// Emit a human-readable summary instead of the JSON report.
    #[arg(long, global = true)]
    plain: bool,
    /// Omit the timing field, making the report byte-reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the germ of an input document, or of every file in a directory.
    Classify {
        /// Input document, or a directory of documents (batch mode).
        path: PathBuf,
        /// Power-series truncation order (default: the document's 'order:', else 12).
        #[arg(long)]
        order: Option<u32>,
        /// Jet levels for the corroborating discrepancy bound
        /// (default: the document's 'levels:', else 5 for curves, 3 otherwise).
        #[arg(long)]
        levels: Option<usize>,
        /// Cap on quadric pairs tried in the embedding-dimension-4 search.
        #[arg(long, default_value_t = mj_singular::classify::DEFAULT_QUADRIC_SEARCH_BOUND)]
        search_bound: usize,
        /// Re-classify after this many random linear changes of variables
        /// and fail if two definite verdicts disagree.
        #[arg(long, default_value_t = 0)]
        self_check: usize,
        /// Seed for the random changes of variables.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dimension of one jet fiber of the germ.
    JetDim {
        path: PathBuf,
        /// Jet level (at least 1).
        #[arg(long)]
        level: usize,
    },
    /// Upper bound for the minimal log discrepancy from a sweep of jet levels.
    MldBound {
        path: PathBuf,
        /// Highest jet level of the sweep (default: the document's 'levels:', else 3).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Newton polygon certificate for a hypersurface germ.
    Newton { path: PathBuf },
    /// Embedding dimension of the germ at the origin.
    EmbDim { path: PathBuf },
    /// Canonicity thresholds for a cone over a projectively normal smooth base.
    Cone {
        /// Ambient dimension N of the affine cone.
        #[arg(long = "N")]
        ambient: u32,
        /// Dimension d of the cone.
        #[arg(long = "d")]
        cone_dim: u32,
        /// Degree a of the hyperplane embedding of the base.
        #[arg(long = "a")]
        degree: u32,
    },
}

fn dispatch(command: &Command) -> (&'static str, commands::CommandResult) {
    match command {
        Command::Classify {
            path,
            order,
            levels,
            search_bound,
            self_check,
            seed,
        } => {
            let opts = ClassifyOpts {
                order: *order,
                levels: *levels,
                search_bound: *search_bound,
                self_check: *self_check,
                seed: *seed,
            };
            ("classify", commands::classify(path, &opts))
        }
        Command::JetDim { path, level } => ("jet-dim", commands::jet_dim(path, *level)),
        Command::MldBound { path, levels } => ("mld-bound", commands::mld_bound(path, *levels)),
        Command::Newton { path } => ("newton", commands::newton(path)),
        Command::EmbDim { path } => ("emb-dim", commands::emb_dim(path)),
        Command::Cone {
            ambient,
            cone_dim,
            degree,
        } => ("cone", commands::cone(*ambient, *cone_dim, *degree)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, result) = dispatch(&cli.command);
    match result {
        Ok((body, outcome)) => {
            let mut map = Map::new();
            map.insert("tool".to_string(), Value::String("mj-singular".to_string()));
            map.insert(
                "version".to_string(),
                Value::String(env!("CARGO_PKG_VERSION").to_string()),
            );
            map.insert("command".to_string(), Value::String(name.to_string()));
            for (k, v) in body {
                map.insert(k.to_string(), v);
            }
            if !cli.no_timing {
                map.insert(
                    "timing_ms".to_string(),
                    Value::from(start.elapsed().as_millis() as u64),
                );
            }
            let report = Value::Object(map);
            if cli.plain {
                print!("{}", report::render_plain(&report));
            } else {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serialization")
                );
            }
            match outcome {
                Outcome::Definite => ExitCode::from(0),
                Outcome::Inconclusive => ExitCode::from(2),
                Outcome::Failed => ExitCode::from(1),
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
