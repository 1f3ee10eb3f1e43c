//! Batch sweep runner: one subcommand per scenario, CSV output.
//!
//! ```text
//! mimo-sweep <scenario> [--config FILE] [--seed N] [--trials N] [--out PATH]
//! ```
//!
//! Missing flags fall back to the scenario's built-in defaults. Runs with
//! the same seed are byte-identical regardless of thread count.

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

use coupled_mimo::harness::{default_config, emit_csv, run_scenario, Scenario};

#[derive(Parser, Debug)]
#[command(
    name = "mimo-sweep",
    about = "Monte-Carlo sweeps for coupled massive-MIMO arrays",
    after_help = "Scenarios: gd_vs_spacing, gm_vs_count, ec_vs_count_snr, ec_vs_theta_spacing, \
                  rate_feq_vs_zf, ec_vs_theta_bound, ec_vs_directions"
)]
struct Cli {
    /// Scenario to run.
    scenario: String,

    /// `key = value` config file overriding the scenario defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Monte-Carlo trials per grid point.
    #[arg(long)]
    trials: Option<usize>,

    /// Output CSV path (default: <scenario>.csv).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> coupled_mimo::Result<PathBuf> {
    let scenario: Scenario = cli.scenario.parse()?;
    let mut config = default_config(scenario);
    if let Some(path) = &cli.config {
        config.apply_file(path)?;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(trials) = cli.trials {
        config.trials = trials;
    }
    let out = cli
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", scenario.name())));

    let rows = run_scenario(&config)?;
    emit_csv(&rows, &out)?;
    eprintln!(
        "wrote {} rows to {} (scenario {}, seed {}, trials {})",
        rows.len(),
        out.display(),
        scenario.name(),
        config.seed,
        config.trials
    );
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
