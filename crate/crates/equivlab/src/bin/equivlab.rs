//! Thin command-line front end over the library: closed-form tables,
//! region sweeps, binning simulations, and the self-check suite.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use equivlab::cli::{self, SourceSpec};
use equivlab::regions::Model;
use equivlab::Result;

#[derive(Parser)]
#[command(
    name = "equivlab",
    version,
    about = "Rate-equivocation regions and random-binning experiments for \
             secure source coding with rate-limited helpers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form one-/two-sided boundaries for a binary symmetric source.
    Fig4 {
        /// Crossover probability δ of the source X = Y ⊕ Ber(δ).
        #[arg(long)]
        delta: f64,
        /// Helper-rate grid: start:stop:step or a comma list.
        #[arg(long)]
        grid: String,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Optimize a region boundary over a helper-rate budget grid.
    Sweep {
        /// Helper model: one | two | secins.
        #[arg(long, default_value = "one")]
        model: String,
        /// Source: bss:<delta> or a path to a serialized joint distribution.
        #[arg(long)]
        source: String,
        /// Budget grid: start:stop:step or a comma list.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random optimizer starts per grid point.
        #[arg(long, default_value_t = 64)]
        starts: usize,
        /// Insecure-link budget (secins model only).
        #[arg(long, default_value_t = 0.0)]
        rins_budget: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate one random-binning code and append its report row.
    Sim {
        /// Helper model: one | two.
        #[arg(long, default_value = "one")]
        model: String,
        /// Source: bss:<delta> or a path to a serialized joint distribution.
        #[arg(long)]
        source: String,
        /// Blocklength.
        #[arg(long)]
        n: usize,
        /// Bits per symbol added to every codebook/bin exponent.
        #[arg(long, default_value_t = 0.3)]
        margin: f64,
        /// Multiplicative typicality slack.
        #[arg(long, default_value_t = 0.35)]
        eps: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Helper operating rate for the achieving-channel construction.
        #[arg(long, default_value_t = 0.5)]
        ry: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the reduction identities and Mrs. Gerber dominance suite.
    Check {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Fig4 { delta, grid, out } => {
            cli::cmd_fig4(delta, &cli::parse_grid(&grid)?, &out)?;
            Ok(0)
        }
        Cmd::Sweep {
            model,
            source,
            grid,
            seed,
            starts,
            rins_budget,
            out,
        } => {
            cli::cmd_sweep(
                Model::parse(&model)?,
                &SourceSpec::parse(&source)?,
                &cli::parse_grid(&grid)?,
                seed,
                starts,
                rins_budget,
                &out,
            )?;
            Ok(0)
        }
        Cmd::Sim {
            model,
            source,
            n,
            margin,
            eps,
            seed,
            trials,
            ry,
            out,
        } => {
            cli::cmd_sim(
                Model::parse(&model)?,
                &SourceSpec::parse(&source)?,
                n,
                margin,
                eps,
                seed,
                trials,
                ry,
                &out,
            )?;
            Ok(0)
        }
        Cmd::Check { seed } => {
            let passed = cli::cmd_check(seed, std::io::stdout().lock())?;
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli::exit_code_for(&err) as u8)
        }
    }
}
