//! Drive a full run from a JSON config, as the `choquard run` command does.

use std::path::PathBuf;

use choquard::cli::{self, RunOptions};

fn main() -> choquard::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let config = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/sweep_1d.json")));
    print!("{}", cli::check(&config)?.lines().next().unwrap_or_default());
    println!(" ({})", config.display());

    let out = std::env::temp_dir().join("choquard-example-run");
    let outcome = cli::run(&RunOptions { config, out: Some(out), jobs: None, seed: None })?;
    println!("exit code {}; files in {}", outcome.exit_code(), outcome.out_dir.display());
    print!("{}", std::fs::read_to_string(outcome.out_dir.join("sweep.csv"))?);
    Ok(())
}
