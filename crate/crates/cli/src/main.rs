//! `gensimplex`: command-line access to complexes, selections, stellar moves,
//! cell-systems, cellular maps and geometric realizations.
//!
//! Exit codes: 0 on success, 1 on errors or a false verdict, 2 when a search
//! budget ran out or a verdict is indeterminate.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "gensimplex", version, about = "Combinatorial simplicial complexes, selections and stellar moves")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Seed for randomized choices.
    #[arg(long, global = true, env = "STELLAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Expanded nodes allowed in starring searches.
    #[arg(long, global = true, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub search_budget: u64,
    /// Longest move sequence considered by starring searches.
    #[arg(long, global = true, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub search_depth: u64,
    /// Backtracking budget of collapse searches.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub collapse_backtrack: u64,
    /// Worker threads; 1 keeps runs reproducible.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a complex, optionally certifying it as a ball.
    Complex {
        /// Complex JSON file or `deltaN`.
        #[arg(long)]
        input: String,
        #[arg(long)]
        ball: bool,
    },
    /// Iterated barycentric subdivision.
    Subdivide {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1)]
        levels: usize,
    },
    /// Emit an elementary selection `βC → C`.
    Select(commands::SelectArgs),
    /// Lift a selection along a simplicial map and check the square.
    Amalgamate {
        /// Simplicial map `f: B → C`.
        #[arg(long)]
        f: PathBuf,
        /// Elementary selection `s: βC → C`.
        #[arg(long)]
        s: PathBuf,
    },
    /// Apply, invert and search for stellar moves.
    #[command(subcommand)]
    Stellar(commands::StellarCommand),
    /// Check, star and transform cell-systems.
    #[command(subcommand)]
    System(commands::SystemCommand),
    /// Duals, cellularity checks and connection maps.
    #[command(subcommand)]
    Cellular(commands::CellularCommand),
    /// Factor a hereditarily cellular map through elementary selections.
    Dominate {
        /// Face-preserving map JSON.
        #[arg(long)]
        map: PathBuf,
    },
    /// Realizations, mesh sizes and affine approximants.
    #[command(subcommand)]
    Geom(commands::GeomCommand),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.config.threads.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match commands::run(cli.command, &cli.config) {
        Ok(outcome) => ExitCode::from(outcome as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
