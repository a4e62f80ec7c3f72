//! `pq-census`: non-Cayley number queries, atlas construction, classification,
//! orbital graphs and regular Frobenius certificates from the command line.
//!
//! Exit codes: 0 success or a positive answer, 1 a negative answer, 2 an error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pq_census::atlas::Family;
use pq_census::frobenius::SearchMode;
use pq_census::DEFAULT_SEED;
use serde::Serialize;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(
    name = "pq-census",
    version,
    about = "Vertex-transitive graphs of order pq: census checks"
)]
pub struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Print nothing on stdout; only the exit code reports the outcome.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Non-Cayley number predicate.
    #[command(subcommand)]
    Nc(NcCommand),
    /// Rows of the census tables and their permutation representations.
    #[command(subcommand)]
    Atlas(AtlasCommand),
    /// Structure of a permutation group read from a group file.
    #[command(subcommand)]
    Group(GroupCommand),
    /// Orbital graphs of a transitive group.
    Orbitals(OrbitalsArgs),
    /// Certificates and table checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand, Debug)]
pub enum NcCommand {
    /// Decide whether pq is a non-Cayley number (exit 0) or not (exit 1).
    Check {
        p: u64,
        q: u64,
        /// Report every condition that holds, not only the first.
        #[arg(long)]
        all: bool,
    },
    /// Every pq <= MAX that is a non-Cayley number.
    List {
        #[arg(long)]
        max: u64,
        #[arg(long)]
        odd_only: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum AtlasCommand {
    /// Rows of degree at most D with their arithmetic validation.
    List {
        #[arg(long)]
        max_degree: u64,
    },
    /// Build the permutation representation of one row.
    Build(BuildArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    pub family: Family,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub s: Option<u64>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub sign: Option<i8>,
    /// Output group file.
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum GroupCommand {
    /// Order, base, transitivity, rank and primitivity.
    Info { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct OrbitalsArgs {
    pub file: PathBuf,
    /// Directory for `report.json` and `orbitals.g6`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print one graph6 line per undirected orbital graph instead of the JSON report.
    #[arg(long)]
    pub graph6: bool,
    /// Look for a regular subgroup of the supplied group.
    #[arg(long, value_enum)]
    pub cayley_test: Option<CayleyMode>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CayleyMode {
    Exhaustive,
    Randomized,
}

impl From<CayleyMode> for SearchMode {
    fn from(m: CayleyMode) -> SearchMode {
        match m {
            CayleyMode::Exhaustive => SearchMode::Exhaustive,
            CayleyMode::Randomized => SearchMode::Randomized,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Search for a regular Frobenius subgroup of order pq and certify it.
    Corollary {
        file: PathBuf,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Output certificate file.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Re-validate a certificate against a group.
    Certificate { file: PathBuf, certificate: PathBuf },
    /// Validate every table row up to degree D and build the constructible ones.
    Tables {
        #[arg(long)]
        max_degree: u64,
    },
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a [String],
    inputs: &'a Value,
    results: &'a Value,
    seed: u64,
    wall_time_ms: u64,
    version: &'static str,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let started = Instant::now();
    match commands::run(&cli) {
        Ok(outcome) => {
            if !cli.quiet {
                match &outcome.text {
                    Some(text) => print!("{text}"),
                    None => {
                        let report = RunReport {
                            command: &argv,
                            inputs: &outcome.inputs,
                            results: &outcome.results,
                            seed: cli.seed,
                            wall_time_ms: started.elapsed().as_millis() as u64,
                            version: env!("CARGO_PKG_VERSION"),
                        };
                        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
                    }
                }
            }
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("pq-census: {e}");
            ExitCode::from(2)
        }
    }
}
