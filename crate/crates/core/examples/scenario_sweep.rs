//! Drive a full sweep scenario from code and print the CSV it would write.
//!
//! The same sweeps are available from the command line:
//!
//! ```text
//! mimo-sweep ec_vs_directions --seed 1 --trials 500 --out ec.csv
//! ```
//!
//! ```text
//! cargo run --example scenario_sweep
//! ```

use coupled_mimo::harness::{csv_string, default_config, run_scenario, Scenario};

fn main() -> coupled_mimo::Result<()> {
    let mut config = default_config(Scenario::EcVsDirections);
    // trim the default grid so the example finishes in seconds
    config.p_list = vec![10, 40, 70];
    config.snr_db_list = vec![10.0];
    config.trials = 100;
    config.seed = 1;

    eprintln!(
        "running {} over P ∈ {:?} at {:?} dB, {} trials per point...",
        config.scenario, config.p_list, config.snr_db_list, config.trials
    );
    let rows = run_scenario(&config)?;
    print!("{}", csv_string(&rows)?);
    eprintln!("\n(effective capacity climbs with the number of incident directions)");
    Ok(())
}
