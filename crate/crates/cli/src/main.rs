//! Command-line pipeline driver. Every subcommand is a thin orchestration
//! over the library: synth generates a reproducible phantom dataset, then
//! combine / evaluate / compare / report run the fusion study end to end.
//!
//! Exit codes: 0 = success, 1 = configuration or input error, 2 = partial
//! failure (some cases failed, the rest were processed).

mod combine;
mod compare;
mod evaluate;
mod prior;
mod report;
mod synth;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "segfuse", version, about = "Segmentation ensemble fusion and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Path to the run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic phantom dataset with simulated segmenters.
    Synth(synth::SynthArgs),
    /// Fuse each case's probability maps with the configured combiner.
    Combine(ConfigArgs),
    /// Evaluate all individual segmenters and all four ensembles.
    Evaluate(ConfigArgs),
    /// Statistically compare ensembles against individual segmenters.
    Compare(compare::CompareArgs),
    /// Render the glyph plot and the overfitting matrix.
    Report(ConfigArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    let outcome = match cli.command {
        Command::Synth(args) => synth::run(&args),
        Command::Combine(args) => combine::run(&args.config),
        Command::Evaluate(args) => evaluate::run(&args.config),
        Command::Compare(args) => compare::run(&args),
        Command::Report(args) => report::run(&args.config),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
