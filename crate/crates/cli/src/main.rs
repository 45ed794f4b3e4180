//! `widomlab`: Chebyshev norms and Widom factors from JSON experiment configs.

mod commands;
mod config;
mod format;
mod svg;

use clap::{Args, Parser, Subcommand};
use commands::{Completion, Failure, RunSettings};
use config::ExperimentConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "widomlab", version, about = "Chebyshev polynomials and Widom factors of plane sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Widom factors over a range of degrees.
    Norms(Common),
    /// Closed-form limits of the Widom factors.
    Limits(Common),
    /// Widom factors of a tree preimage (built-in example by default).
    Shabat(Common),
    /// Point cloud of a Chebyshev polynomial preimage.
    Preimage(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output path prefix; overrides the config.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value_t = 0x5eed_0f_7007)]
    seed: u64,
    /// Solver tolerance; overrides the config.
    #[arg(long)]
    tol: Option<f64>,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("WIDOMLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("WIDOMLAB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Run(e.to_string()))
}

fn run(cli: Cli) -> Result<Completion, Failure> {
    configure_threads()?;
    let (Command::Norms(c) | Command::Limits(c) | Command::Shabat(c) | Command::Preimage(c)) = &cli.command;
    let cfg = ExperimentConfig::load(&c.config).map_err(Failure::Config)?;
    if let Some(t) = c.tol {
        if !(1e-10..=1e-2).contains(&t) {
            return Err(Failure::Config(format!("--tol must lie in [1e-10, 1e-2], got {t}")));
        }
    }
    let settings = RunSettings {
        out: c.out.clone(),
        seed: c.seed,
        tol: c.tol,
    };
    let art = match &cli.command {
        Command::Norms(_) => commands::cmd_norms(&cfg, &settings)?,
        Command::Limits(_) => commands::cmd_limits(&cfg)?,
        Command::Shabat(_) => commands::cmd_shabat(&cfg, &settings)?,
        Command::Preimage(_) => commands::cmd_preimage(&cfg, &settings)?,
    };
    commands::deliver(&art, &cfg, &settings)?;
    Ok(art.completion)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Completion::Full) => ExitCode::SUCCESS,
        Ok(Completion::Partial) => ExitCode::from(1),
        Err(f) => {
            match &f {
                Failure::Config(m) | Failure::Run(m) => eprintln!("widomlab: {m}"),
            }
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
