use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use choquard::cli::{self, RunOptions, SelftestOptions};

#[derive(Parser)]
#[command(version, about = "Ground states of p-Laplacian Choquard systems on lattice boxes")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the limit problem and every lambda of the sweep, writing CSV and reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Validate a config without computing anything.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let code = match Args::parse().cmd {
        Cmd::Run { config, out, jobs, seed } => match cli::run(&RunOptions { config, out, jobs, seed }) {
            Ok(outcome) => {
                print!("{}", std::fs::read_to_string(outcome.out_dir.join("summary.txt")).unwrap_or_default());
                outcome.exit_code()
            }
            Err(e) => report(&e),
        },
        Cmd::Check { config } => match cli::check(&config) {
            Ok(text) => {
                print!("{text}");
                cli::EXIT_OK
            }
            Err(e) => report(&e),
        },
        Cmd::Selftest { seed } => match cli::selftest(SelftestOptions { seed, ..Default::default() }) {
            Ok(rep) => {
                print!("{rep}");
                if rep.passed() { cli::EXIT_OK } else { cli::EXIT_INVARIANT }
            }
            Err(e) => report(&e),
        },
    };
    ExitCode::from(code as u8)
}

fn report(e: &choquard::Error) -> i32 {
    match e {
        choquard::Error::Config(errs) => {
            eprintln!("invalid configuration:");
            for m in errs {
                eprintln!("  - {m}");
            }
        }
        other => eprintln!("error: {other}"),
    }
    cli::exit_code(e)
}
