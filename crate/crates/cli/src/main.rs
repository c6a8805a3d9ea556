//! `qhash`: reproducible experiments on multiqudit quantum hashing over Z_q.
//!
//! Exit codes: 0 on success (and an accepting verify verdict), 1 for a
//! rejecting verify verdict, 2 for usage or data errors.

mod commands;
mod opts;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{
    cmd_bias, cmd_fidelity, cmd_hash, cmd_optimize, cmd_simulate_curve, cmd_table, cmd_tradeoff,
    cmd_verify, BiasArgs, Context, CurveArgs, FidelityArgs, HashArgs, OptimizeArgs, TableArgs,
    TradeoffArgs, VerifyArgs,
};
use opts::FileConfig;
use output::Format;

#[derive(Parser)]
#[command(
    name = "qhash",
    version,
    about = "Multiqudit quantum hashing over cyclic groups: scheme construction, \
             min-max parameter search, and verification-protocol simulation"
)]
struct Cli {
    /// Optional JSON config file; keys are the long flag names. Command-line
    /// flags override the file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format (default: csv for tabular commands, json otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// RNG seed; falls back to the config file, then QHASH_SEED, then 7.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the worst-case collision table (biased and optimized columns).
    Table(TableArgs),
    /// Search for a parameter matrix minimizing worst-case collision.
    Optimize(OptimizeArgs),
    /// Character-sum bias of a set: maximum over nonzero x.
    Bias(BiasArgs),
    /// Print the hash state of a classical input.
    Hash(HashArgs),
    /// Simulate verification of a received hash against an expected input.
    Verify(VerifyArgs),
    /// Feasible qudit counts under collision and decoding limits.
    Tradeoff(TradeoffArgs),
    /// Worst-case collision curve: closed form vs simulated acceptance.
    SimulateCurve(CurveArgs),
    /// Uhlmann fidelity and purity of density matrices.
    Fidelity(FidelityArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match FileConfig::load(cli.config.as_deref()) {
        Ok(file) => Context { file, output: cli.output, format: cli.format, seed_flag: cli.seed },
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Table(args) => cmd_table(args, &ctx),
        Command::Optimize(args) => cmd_optimize(args, &ctx),
        Command::Bias(args) => cmd_bias(args, &ctx),
        Command::Hash(args) => cmd_hash(args, &ctx),
        Command::Verify(args) => cmd_verify(args, &ctx),
        Command::Tradeoff(args) => cmd_tradeoff(args, &ctx),
        Command::SimulateCurve(args) => cmd_simulate_curve(args, &ctx),
        Command::Fidelity(args) => cmd_fidelity(args, &ctx),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
