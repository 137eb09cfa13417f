//! `chevlab`: root systems, Coxeter complexes, finite buildings and their
//! Steinberg modules, with machine-readable verification reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage
//! or validation errors.

mod commands;
mod report;

use std::process::ExitCode;

use chevlab::{Cache, Coefficients};
use clap::{Parser, Subcommand};

use crate::commands::Context;
use crate::report::Status;

#[derive(Parser)]
#[command(name = "chevlab", version, about = "Verify Steinberg-module vanishing mechanisms on finite buildings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Omit timestamps and runtimes so identical runs print identical JSON.
    #[arg(long, global = true)]
    no_meta: bool,

    /// Ignore the on-disk cache and recompute everything.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Coefficients for the Steinberg module: Z, Q or F<p>.
    #[arg(long, global = true, default_value = "Q")]
    ring: String,
}

#[derive(Subcommand)]
enum Command {
    /// Root counts, Cartan and Coxeter matrices, vcd over Z.
    Rootsys {
        /// One of A, B, C, D, E, F, G.
        #[arg(value_name = "TYPE")]
        label: String,
        rank: usize,
    },
    /// Weyl group order, Poincare polynomial, Coxeter complex checks.
    Coxeter {
        #[arg(value_name = "TYPE")]
        label: String,
        rank: usize,
        /// Permit the 2903040-element enumeration of W(E7).
        #[arg(long)]
        allow_e7: bool,
    },
    /// Counts, Solomon-Tits profile and Steinberg rank of a building.
    Building {
        /// `sl` or `sp`.
        group: String,
        /// Matrix size.
        n: usize,
        /// Prime below 256.
        p: u32,
    },
    /// The full pipeline, from Solomon-Tits to vanishing coinvariants.
    Verify {
        group: String,
        n: usize,
        p: u32,
        /// Number of random elements for the inversion check.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Reduce a modular symbol `a,b:c,d` to unimodular ones.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        symbol: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ring = match Coefficients::parse(&cli.ring) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let ctx = Context {
        cache: (!cli.no_cache).then(Context::cache_dir).flatten().map(Cache::new),
        meta: !cli.no_meta,
        seed: cli.seed,
        ring,
    };
    let result = match &cli.command {
        Command::Rootsys { label, rank } => commands::rootsys(&ctx, label, *rank),
        Command::Coxeter { label, rank, allow_e7 } => commands::coxeter(&ctx, label, *rank, *allow_e7),
        Command::Building { group, n, p } => commands::building(&ctx, group, *n, *p),
        Command::Verify { group, n, p, samples } => commands::verify(&ctx, group, *n, *p, *samples),
        Command::Reduce { symbol } => commands::reduce(&ctx, symbol),
    };
    match result {
        Ok(report) => {
            println!("{}", report.to_json());
            match report.verdict() {
                Status::Fail => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
