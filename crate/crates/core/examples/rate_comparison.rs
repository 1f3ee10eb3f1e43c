//! Shannon rate of the equivalent precoder against the zero-forcing
//! baseline as the array grows (single UE antenna, single stream).
//!
//! ```text
//! cargo run --example rate_comparison
//! ```

use coupled_mimo::harness::{default_config, run_scenario, Scenario};

fn main() -> coupled_mimo::Result<()> {
    let mut config = default_config(Scenario::RateFeqVsZf);
    config.snr_db_list = vec![10.0];
    config.trials = 200;
    config.seed = 3;

    println!(
        "rate vs antenna count at 10 dB ({} trials, d = {}λ, P = {}):\n",
        config.trials, config.spacings[0], config.p_list[0]
    );
    let rows = run_scenario(&config)?;
    println!("{:>6} {:>12} {:>12}", "M", "Feq b/s/Hz", "ZF b/s/Hz");
    for pair in rows.chunks(2) {
        let m = &pair[0].params[2].1;
        println!(
            "{:>6} {:>12.4} {:>12.4}",
            m.to_string(),
            pair[0].value,
            pair[1].value
        );
    }
    println!("\nwith one UE antenna the channel has rank one, so the power-normalized");
    println!("ZF precoder aligns with the same direction and the curves coincide;");
    println!("the equivalent precoder keeps growing with M either way.");
    Ok(())
}
