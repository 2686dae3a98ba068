use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gffnet::experiment::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "gffnet", version, about = "Network recovery experiments on massive Gaussian free fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the experiment graph as an edge list.
    Generate(Common),
    /// Error of each estimator along the sample-size grid.
    Sweep(Common),
    /// Tail frequency of the empirical statistic against its bound.
    Concentration(Common),
    /// Exact support recovery frequency along the sample-size grid.
    Recovery(Common),
    /// All estimators on shared samples.
    Compare(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; defaults to the config's `output`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn write_out(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: Cli) -> gffnet::Result<()> {
    let (Command::Generate(c) | Command::Sweep(c) | Command::Concentration(c) | Command::Recovery(c) | Command::Compare(c)) =
        &cli.command;
    let mut cfg = ExperimentConfig::from_path(&c.config)?;
    if let Some(s) = c.seed {
        cfg.master_seed = s;
    }
    let out = c.out.clone().or_else(|| cfg.output.clone());
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = c.threads {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().map_err(|e| gffnet::Error::Config(e.to_string()))?;
    let text = pool.install(|| -> gffnet::Result<String> {
        Ok(match &cli.command {
            Command::Generate(_) => {
                let g = experiment::run_generate(&cfg)?;
                if let Some(w) = &g.warning {
                    eprintln!("warning: {w}");
                }
                g.text
            }
            Command::Sweep(_) => experiment::run_sweep(&cfg)?.to_csv(),
            Command::Concentration(_) => experiment::run_concentration(&cfg)?.to_csv(),
            Command::Recovery(_) => experiment::run_recovery(&cfg)?.to_csv(),
            Command::Compare(_) => experiment::run_compare(&cfg)?.to_csv(),
        })
    })?;
    write_out(out.as_deref(), &text)?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
