//! Build the rate-optimal equivalent precoder for one channel draw and
//! factor it into 2·N_s phase-only RF columns plus a real baseband matrix.
//!
//! ```text
//! cargo run --example precoder_factorization
//! ```

use coupled_mimo::array::ArrayGeometry;
use coupled_mimo::channel::ChannelRealization;
use coupled_mimo::coupling::{CouplingModel, DipoleParams};
use coupled_mimo::precoding::optimal_precoder;
use coupled_mimo::seed;

fn main() -> coupled_mimo::Result<()> {
    let geometry = ArrayGeometry::new(16, 8, 0.1)?;
    let dipole = DipoleParams::half_wave(50.0)?;
    let coupling = CouplingModel::new(&geometry, &dipole)?;

    let mut rng = seed::stream(2024);
    let channel = ChannelRealization::sample(&geometry, &coupling.k, 4, 70, 1.0, &mut rng)?;
    println!(
        "equivalent channel: {}x{}, rank {}, leading singular values {:.2?}",
        channel.h_eq.nrows(),
        channel.h_eq.ncols(),
        channel.rank,
        channel.singular_values.iter().take(4).collect::<Vec<_>>()
    );

    let n_s = 2;
    let snr = 10.0; // 10 dB
    let precoder = optimal_precoder(&channel, n_s, snr)?;
    println!("\nprecoder for N_s = {n_s} streams at 10 dB:");
    println!(
        "  eigenmode powers f_i² = {:.4?}  (sum = N_s² = {})",
        precoder.f_sq,
        n_s * n_s
    );
    println!(
        "  F_eq {}x{}, F_RF {}x{}, F_BB {}x{}",
        precoder.f_eq.nrows(),
        precoder.f_eq.ncols(),
        precoder.f_rf.nrows(),
        precoder.f_rf.ncols(),
        precoder.f_bb.nrows(),
        precoder.f_bb.ncols()
    );

    let error = (precoder.reconstruct() - &precoder.f_eq).norm() / precoder.f_eq.norm();
    println!("  reconstruction ||F_RF·F_BB - F_eq|| / ||F_eq|| = {error:.2e}");

    let worst_modulus = precoder
        .f_rf
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    println!("  max | |F_RF entry| - 1 | = {worst_modulus:.2e}");

    println!(
        "\nRF chains: {} used instead of {} -> {} saved",
        precoder.rf_chains_used,
        geometry.num_antennas(),
        precoder.rf_chains_saved
    );
    Ok(())
}
