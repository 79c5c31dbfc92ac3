use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "opinion-sim", version, about = "Bounded-confidence opinion dynamics with media, experts and gossip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Parallelism {
    /// Worker threads for replications and cells; output does not depend on it.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run every replication of one config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `base_seed` from the config.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        par: Parallelism,
    },
    /// Run one of the four experiment batteries.
    Scenario {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        par: Parallelism,
    },
    /// Cross a config with lists of tolerances and media reach fractions.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        tolerances: Vec<f64>,
        /// Defaults to the config's own tv_fraction.
        #[arg(long = "tv-fractions", value_delimiter = ',')]
        tv_fractions: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        par: Parallelism,
    },
    /// Generate a network and print degree statistics.
    NetStats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest degree included in the tail-exponent fit.
        #[arg(long = "k-min", default_value_t = 5)]
        k_min: usize,
        /// Write the edge list here.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Chart a time-series CSV as SVG.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out, seed, par } => commands::run(&config, out, seed, par.jobs.into()),
        Command::Scenario { id, out, seed, par } => commands::scenario(id, out, seed, par.jobs.into()),
        Command::Sweep {
            config,
            tolerances,
            tv_fractions,
            out,
            seed,
            par,
        } => commands::sweep(&config, &tolerances, &tv_fractions, out, seed, par.jobs.into()),
        Command::NetStats { n, m, seed, k_min, edges } => commands::net_stats(n, m, seed, k_min, edges),
        Command::Plot { csv, out } => commands::plot(&csv, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
