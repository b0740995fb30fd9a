use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use taskframe::cli::{cmd_derive, cmd_report, cmd_simulate, cmd_synth, RunConfig};

#[derive(Parser)]
#[command(name = "taskframe", version, about = "Derive task frames from demonstrations and replay them in simulation")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for synthetic data (overrides the scenario and config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate synthetic demonstrations and their ground truth.
    Synth { scenario: PathBuf },
    /// Derive the task frame and task model from trial CSVs.
    Derive {
        #[arg(required = true)]
        trials: Vec<PathBuf>,
        /// Ground truth to attach (default: ground_truth.json beside the trials).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Replay a task model against a simulated environment.
    Simulate { model: PathBuf, scenario: PathBuf },
    /// Render a task-frame report.
    Report { report: PathBuf },
}

fn run(cli: Cli) -> taskframe::Result<()> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::read(p)?,
        None => RunConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let wrote = match cli.cmd {
        Cmd::Synth { scenario } => cmd_synth(&scenario, &cli.out, &cfg)?,
        Cmd::Derive { trials, truth } => cmd_derive(&trials, truth.as_deref(), &cli.out, &cfg)?,
        Cmd::Simulate { model, scenario } => {
            let (file, paths) = cmd_simulate(&model, &scenario, &cli.out, &cfg)?;
            let s = &file.summary;
            println!("steps {}  duration {:.3} s  progress {:.4}  completed {}", s.steps, s.duration_s, s.final_progress, s.completed);
            for (name, v) in s.rmse.fields() {
                println!("  {name:<16} {v:.6}");
            }
            if let Some(c) = &file.versus_nominal {
                println!("versus nominal: f ratio {:.3}, degraded [{}]", c.ratio.f_n, c.degraded.join(", "));
            }
            paths
        }
        Cmd::Report { report } => {
            let (table, paths) = cmd_report(&report, &cli.out)?;
            print!("{table}");
            paths
        }
    };
    for p in wrote {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
