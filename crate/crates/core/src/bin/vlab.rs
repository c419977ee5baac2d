use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vlab::config::{ExperimentConfig, RunSection};
use vlab::experiments::{cmd_converge, cmd_counterexample, cmd_maximal, cmd_transform, Outcome};

#[derive(Parser)]
#[command(
    name = "vlab",
    version,
    about = "Fourier analysis experiments on bounded Vilenkin groups"
)]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `[run] seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// No summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fast transform against the naive transform, with Parseval.
    Transform,
    /// Maximal operators: weak-L_p / H_p ratios and Fejér domination.
    Maximal,
    /// Divergence construction for p < 1/2.
    Counterexample,
    /// Uniform convergence of T-means on band-limited functions.
    Converge,
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).map_err(|e| e.to_string())?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.run.get_or_insert_with(RunSection::default).seed = Some(seed);
    }
    let outcome = match cli.command {
        Command::Transform => cmd_transform(&cfg),
        Command::Maximal => cmd_maximal(&cfg),
        Command::Counterexample => cmd_counterexample(&cfg),
        Command::Converge => cmd_converge(&cfg),
    }
    .map_err(|e| e.to_string())?;
    let target = cli.out.clone().or_else(|| cfg.out().map(PathBuf::from));
    match target {
        Some(path) => std::fs::write(&path, &outcome.csv).map_err(|e| format!("{}: {e}", path.display()))?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&outcome.csv).map_err(|e| e.to_string())?;
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if !cli.quiet {
                for note in &outcome.notes {
                    eprintln!("{note}");
                }
            }
            for v in &outcome.violations {
                eprintln!("violation: {v}");
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
