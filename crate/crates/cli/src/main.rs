use std::path::PathBuf;
use std::process::ExitCode;

use blockage_net::commands;
use blockage_net::config::{Mode, RunConfig};
use blockage_net::error::{CliError, Result};
use clap::Parser;

/// Coverage, connectivity and rate of cellular networks with random building
/// blockage, analytically and by simulation.
#[derive(Debug, Parser)]
#[command(name = "blockage-net", version)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Master seed; overrides `scenario.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run mode; overrides `mode`.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

const THREADS_VAR: &str = "BLOCKAGE_NET_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::config(
            THREADS_VAR,
            format!("expected a positive integer, got {raw:?}"),
        )
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(THREADS_VAR, e))
}

fn execute(args: Args) -> Result<()> {
    configure_threads()?;
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.scenario.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.output = Some(out);
    }
    if let Some(mode) = args.mode {
        cfg.mode = Some(mode);
    }
    cfg.validate()?;
    for f in commands::run(&cfg)? {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
