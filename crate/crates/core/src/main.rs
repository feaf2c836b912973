use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frab::harness::{self, CliOptions, EXIT_USAGE};

/// Anchored inertial splitting experiments from JSON configs.
#[derive(Parser)]
#[command(name = "frab", version)]
struct Cli {
    /// Directory for trace.csv / result.json / compare.csv (overrides the config).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Suppress the stdout summary.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the config's `algorithm` block.
    Run { config: PathBuf },
    /// Run every block in `algorithms` on the same problem and tabulate.
    Compare { config: PathBuf },
    /// Resolve defaults and check parameters without solving.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let opts = CliOptions { out_dir: cli.out_dir, quiet: cli.quiet };
    let code = match &cli.command {
        Command::Run { config } => harness::run_command(config, &opts),
        Command::Compare { config } => harness::compare_command(config, &opts),
        Command::Validate { config } => harness::validate_command(config, &opts),
    };
    ExitCode::from(code as u8)
}
