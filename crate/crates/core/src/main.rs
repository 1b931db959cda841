use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lambda_at::cli::{run, InputFormat, RunConfig, EXIT_INPUT_ERROR};
use lambda_at::oracle::DEFAULT_CELL_CAP;

#[derive(Parser)]
#[command(name = "lambda-at", version, about = "Integer homology via lambda-AT-models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Simplicial,
    Voxel3d,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Betti numbers, torsion counts and representative cycles.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Skip the unit-pivot reduction.
        #[arg(long)]
        no_preprocess: bool,
        /// Include representative cycles in the report.
        #[arg(long)]
        cycles: bool,
        /// Compare against the Smith normal form oracle.
        #[arg(long)]
        cross_check: bool,
        /// Largest complex (in cells) the oracle will handle.
        #[arg(long, default_value_t = DEFAULT_CELL_CAP)]
        oracle_cap: usize,
        /// Write the report here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Compute {
        input,
        format,
        no_preprocess,
        cycles,
        cross_check,
        oracle_cap,
        output,
    } = cli.command;
    let config = RunConfig {
        input_path: input,
        format: match format {
            Format::Simplicial => InputFormat::Simplicial,
            Format::Voxel3d => InputFormat::Voxel3d,
        },
        preprocess: !no_preprocess,
        emit_cycles: cycles,
        cross_check,
        oracle_cell_cap: oracle_cap,
        output_path: output,
    };
    match run(&config) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT_ERROR as u8)
        }
    }
}
