mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use commands::Outcome;
use config::{config_hash, load, BerConfig, Command, ConfigError, ExitConfig, GenCodeConfig, OptimizeConfig, Overrides};

/// Code design and simulation for noncoherent FSK physical-layer network coding.
#[derive(Parser)]
#[command(name = "pnc", version)]
struct Cli {
    /// Worker threads; all cores when absent.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Build a parity-check matrix and write it as an alist file.
    GenCode(RunArgs),
    /// EXIT threshold of one degree distribution.
    Exit(RunArgs),
    /// Rank every feasible degree distribution of a base code.
    Optimize(RunArgs),
    /// Bit and frame error rates over an SNR sweep.
    Ber(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file.
    config: PathBuf,
    /// Output directory.
    #[arg(short, long, default_value = "results")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma list `a,b,c` or range `start:stop[:step]` in dB.
    #[arg(long)]
    snr: Option<String>,
    /// full, partial or none.
    #[arg(long)]
    csi: Option<String>,
    #[arg(long)]
    mod_order: Option<usize>,
    /// bicm or bicm-id.
    #[arg(long)]
    feedback: Option<String>,
    /// Print the resolved configuration and its hash, then stop.
    #[arg(long)]
    dry_run: bool,
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            snr: self.snr.clone(),
            seed: self.seed,
            csi: self.csi.clone(),
            mod_order: self.mod_order,
            feedback: self.feedback.clone(),
        }
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn run<T, F>(cmd: Command, args: &RunArgs, seed: fn(&T) -> u64, body: F) -> anyhow::Result<()>
where
    T: serde::de::DeserializeOwned + Serialize,
    F: FnOnce(&T, &Path, &str) -> anyhow::Result<Outcome>,
{
    let ov = args.overrides();
    let cfg: T = load(cmd, &args.config, &ov)?;
    let hash = config_hash(&cfg)?;
    if args.dry_run {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        println!("config hash {hash}");
        return Ok(());
    }
    commands::ensure_dir(&args.out)?;
    let started = unix_now();
    let clock = Instant::now();
    let outcome = body(&cfg, &args.out, &hash)?;
    let manifest = json!({
        "subcommand": cmd.name(),
        "config_path": args.config,
        "out_dir": args.out,
        "seed": seed(&cfg),
        "overrides": ov,
        "config": cfg,
        "config_hash": hash,
        "version": env!("CARGO_PKG_VERSION"),
        "started_unix": started,
        "finished_unix": unix_now(),
        "wall_seconds": clock.elapsed().as_secs_f64(),
        "outputs": outcome.outputs,
        "telemetry": outcome.telemetry,
    });
    let path = args.out.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(config::config_error("--workers must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match &cli.command {
        Sub::GenCode(a) => run(Command::GenCode, a, |c: &GenCodeConfig| c.seed, commands::gen_code),
        Sub::Exit(a) => run(Command::Exit, a, |c: &ExitConfig| c.detector.seed, commands::exit),
        Sub::Optimize(a) => run(Command::Optimize, a, |c: &OptimizeConfig| c.detector.seed, commands::optimize),
        Sub::Ber(a) => run(Command::Ber, a, |c: &BerConfig| c.trial.seed, commands::ber),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
