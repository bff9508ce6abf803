use std::path::PathBuf;
use std::process::ExitCode;

use annulus_neumann::{exit, run, Command, RunOptions};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "annulus-neumann",
    version,
    about = "Radial Neumann problems on annuli: constants, hypothesis checks, multi-solution search"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Problem config (TOML).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory for all output files.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Exit with status 4 when a checked hypothesis fails.
    #[arg(long, global = true)]
    strict: bool,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// Kernel, cone and geometry constants.
    Constants,
    /// Sample condition (H), the ladder and the theorem hypotheses.
    Check,
    /// Search for solutions and write CSV, SVG and summary.json.
    Solve,
    /// Sign conditions of the non-existence theorem plus a seed sweep.
    Nonexist,
    /// Constants, check and solve for the built-in example.
    Example,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                exit::CONFIG as u8
            } else {
                0
            });
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ANNULUS_NEUMANN_LOG", "warn"))
        .init();

    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(exit::CONFIG as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(exit::RUNTIME as u8);
        }
    }

    let command = match cli.command {
        Cmd::Constants => Command::Constants,
        Cmd::Check => Command::Check,
        Cmd::Solve => Command::Solve,
        Cmd::Nonexist => Command::Nonexist,
        Cmd::Example => Command::Example,
    };
    let opts = RunOptions {
        command,
        config: cli.config,
        out: cli.out,
        strict: cli.strict,
    };
    match run(&opts) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
