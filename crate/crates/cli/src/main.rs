//! `rbnlab`: simulate random Boolean networks and measure their randomness.
//!
//! Exit status is 0 on success, 1 for invalid input (bad flags, config keys
//! or parameters) and 2 for runtime failures such as unwritable outputs.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "rbnlab", version, about = "Random Boolean network lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Flat key=value config file.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short, default_value = "rbnlab-out")]
    pub out: PathBuf,
    /// Override one config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Master seed; same as `--set master_seed=N`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one network and write its diagram, fixture and measures.
    Evolve {
        #[command(flatten)]
        common: Common,
        /// Network fixture to evolve instead of a random one.
        #[arg(long)]
        network: Option<PathBuf>,
    },
    /// Sweep the truth-table bias and detect critical points.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the full state-transition graph of a small network.
    #[command(name = "transition-graph")]
    TransitionGraph {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        network: Option<PathBuf>,
    },
    /// Remove the most or least prestigious states one at a time.
    Perturb {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        network: Option<PathBuf>,
        /// most | least
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        /// delete | isolate
        #[arg(long)]
        removal: Option<String>,
    },
    /// Build a CTM table by enumerating small Turing machines.
    #[command(name = "ctm-gen")]
    CtmGen {
        #[arg(long, default_value_t = 2)]
        states: usize,
        #[arg(long = "step-cap", default_value_t = 500)]
        step_cap: usize,
        /// Write the derived square table of this side instead of the
        /// string table.
        #[arg(long)]
        square: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Evolve { common, network } => commands::evolve(&common, network),
        Command::Sweep { common } => commands::sweep(&common),
        Command::TransitionGraph { common, network } => commands::transition_graph(&common, network),
        Command::Perturb {
            common,
            network,
            mode,
            count,
            removal,
        } => commands::perturb(&common, network, mode, count, removal),
        Command::CtmGen {
            states,
            step_cap,
            square,
            out,
        } => commands::ctm_gen(states, step_cap, square, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rbnlab: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
