mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use ecoepi_core::Execution;

use commands::{Ctx, Recipe};
use config::RunConfig;
use error::CliError;
use manifest::{describe, sha256_hex, Manifest};

#[derive(Debug, Parser)]
#[command(name = "ecoepi", version, about = "Eco-epidemiological model analysis and pattern simulation")]
struct Cli {
    /// INI run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `[output] dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Single worker, bit-reproducible output.
    #[arg(long, global = true)]
    serial: bool,
    /// Use h = 0.02 for simulations.
    #[arg(long, global = true)]
    coarse: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interior equilibria.
    Equilibria,
    /// Temporal stability plus local and global conditions.
    Stability,
    /// A priori bounds and pattern nonexistence thresholds.
    Bounds,
    /// Dispersion curves over a wave number grid.
    Dispersion,
    /// Linear diffusive stability verdict.
    TuringCheck,
    /// Verdict map over two parameters.
    RegionScan,
    /// RK4 trajectory of the kinetics.
    Integrate,
    /// Lyapunov spectrum.
    Lyapunov,
    /// One-parameter bifurcation sweep.
    Bifurcate,
    /// Reaction-diffusion run with snapshot output.
    Simulate,
    /// Label a set of saved snapshots.
    Classify,
    /// Rerun a bundled recipe.
    Reproduce {
        #[arg(value_enum)]
        recipe: Recipe,
    },
}

impl Command {
    fn name(&self) -> String {
        match self {
            Command::Equilibria => "equilibria".into(),
            Command::Stability => "stability".into(),
            Command::Bounds => "bounds".into(),
            Command::Dispersion => "dispersion".into(),
            Command::TuringCheck => "turing-check".into(),
            Command::RegionScan => "region-scan".into(),
            Command::Integrate => "integrate".into(),
            Command::Lyapunov => "lyapunov".into(),
            Command::Bifurcate => "bifurcate".into(),
            Command::Simulate => "simulate".into(),
            Command::Classify => "classify".into(),
            Command::Reproduce { recipe } => format!("reproduce {}", recipe.name()),
        }
    }
}

fn thread_count(serial: bool) -> Result<usize, CliError> {
    if serial {
        return Ok(1);
    }
    let requested = match std::env::var("ECOEPI_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .ok()
                .filter(|n| *n > 0)
                .ok_or_else(|| CliError::Validation(format!("ECOEPI_THREADS: `{v}` is not a positive count")))?,
        ),
        Err(_) => None,
    };
    #[cfg(feature = "parallel")]
    {
        if let Some(n) = requested {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
        }
        Ok(rayon::current_num_threads())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = requested;
        Ok(1)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    let threads = thread_count(cli.serial)?;
    let exec = if cli.serial { Execution::Serial } else { Execution::Parallel };

    let (cfg, canonical) = match &cli.command {
        Command::Reproduce { recipe } => {
            let text: String = recipe.configs().iter().map(RunConfig::to_ini_string).collect();
            (None, text)
        }
        _ => {
            let path = cli
                .config
                .as_ref()
                .ok_or_else(|| CliError::Validation("this subcommand needs --config <path>".into()))?;
            let cfg = RunConfig::load(path)?;
            let text = cfg.to_ini_string();
            (Some(cfg), text)
        }
    };
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.out_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut ctx = Ctx::new(out, exec, cli.coarse)?;

    match (&cli.command, &cfg) {
        (Command::Reproduce { recipe }, _) => commands::reproduce(&mut ctx, *recipe)?,
        (cmd, Some(cfg)) => match cmd {
            Command::Equilibria => commands::equilibria(&mut ctx, cfg)?,
            Command::Stability => commands::stability(&mut ctx, cfg)?,
            Command::Bounds => commands::bounds(&mut ctx, cfg)?,
            Command::Dispersion => commands::dispersion_cmd(&mut ctx, cfg)?,
            Command::TuringCheck => commands::turing(&mut ctx, cfg)?,
            Command::RegionScan => commands::region(&mut ctx, cfg)?,
            Command::Integrate => commands::integrate(&mut ctx, cfg)?,
            Command::Lyapunov => commands::lyapunov(&mut ctx, cfg)?,
            Command::Bifurcate => commands::bifurcate(&mut ctx, cfg)?,
            Command::Simulate => commands::simulate(&mut ctx, cfg)?,
            Command::Classify => commands::classify_cmd(&mut ctx, cfg)?,
            Command::Reproduce { .. } => unreachable!(),
        },
        (_, None) => unreachable!("config loaded above"),
    }

    let manifest = Manifest {
        command: cli.command.name(),
        config_sha256: sha256_hex(canonical.as_bytes()),
        ecoepi_version: env!("CARGO_PKG_VERSION"),
        execution: if exec.is_parallel() { "parallel" } else { "serial" },
        threads,
        wall_time_s: started.elapsed().as_secs_f64(),
        artifacts: describe(&ctx.out, &ctx.files)?,
    };
    manifest.write(&ctx.out)?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
