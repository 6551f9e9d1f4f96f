use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mmimo_bench::{parse_config, run_experiment, write_csv, CliError, Experiment, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "mmimo-bench", version, about = "Massive-MIMO front-end benchmark experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the configured `out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// System Loss relative to the fully digital front-end.
    Sysloss,
    /// Steering Efficiency over transmit power and antenna count.
    Steereff,
    /// Power-consumption ledger.
    Power,
    /// Component counts.
    Components,
}

impl From<Command> for Experiment {
    fn from(c: Command) -> Self {
        match c {
            Command::Sysloss => Experiment::Sysloss,
            Command::Steereff => Experiment::Steereff,
            Command::Power => Experiment::Power,
            Command::Components => Experiment::Components,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn load(cli: &Cli, experiment: Experiment) -> Result<RunConfig, CliError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = parse_config(&text).map_err(|e| match (e, &cli.config) {
        (CliError::Config(msg), Some(path)) => CliError::Config(format!("{}: {msg}", path.display())),
        (e, _) => e,
    })?;
    if let Some(found) = cfg.experiment {
        if found != experiment {
            return Err(CliError::Config(format!(
                "config is for `{}` but `{}` was requested",
                found.as_str(),
                experiment.as_str()
            )));
        }
    }
    cfg.experiment = Some(experiment);
    if let Some(seed) = cli.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let experiment = Experiment::from(cli.command);
    let cfg = load(cli, experiment)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let outcome = run_experiment(&cfg, experiment)?;

    fs::create_dir_all(&cfg.out).map_err(io_err(&cfg.out))?;
    let csv_path = cfg.out.join(format!("{}.csv", experiment.as_str()));
    let file = fs::File::create(&csv_path).map_err(io_err(&csv_path))?;
    write_csv(&outcome.rows, file).map_err(|e| CliError::Io {
        path: csv_path.display().to_string(),
        source: std::io::Error::other(e),
    })?;
    let echo_path = cfg.out.join(format!("{}.config.toml", experiment.as_str()));
    fs::write(&echo_path, cfg.echo()).map_err(io_err(&echo_path))?;
    eprintln!("wrote {} rows to {}", outcome.rows.len(), csv_path.display());

    match outcome.exclusion_failure {
        Some(msg) => Err(CliError::Experiment(format!("exclusion rate above 20%: {msg}"))),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mmimo-bench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
