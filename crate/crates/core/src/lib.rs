//! Link-level simulation of massive-MIMO downlinks with antenna mutual
//! coupling.
//!
//! The model is a rectangular grid of identical half-wave dipoles at a base
//! station. Signals reach a multi-antenna UE through `P` plane-wave
//! directions, so the equivalent channel is `H_eq = H·Aᵀ·K`: small-scale
//! fading `H`, far-field steering `A`, and the mutual-coupling matrix
//! `K = Z_L(Z_L·I + Z_M)^{−1}` built from induced-EMF dipole impedances.
//!
//! On top of the channel the crate provides
//!
//! - the rate-optimal equivalent precoder (SVD alignment plus water-filling
//!   eigenmode powers) and its exact factorization into a phase-only RF
//!   matrix with `2·N_s` columns and a real baseband matrix — so `2·N_s` RF
//!   chains replace one chain per antenna ([`precoding`]);
//! - Shannon rates, receive diversity gains, and the QoS effective capacity
//!   with its closed-form upper bound ([`metrics`]);
//! - deterministic, seed-reproducible Monte-Carlo sweeps with CSV output
//!   ([`harness`]), also exposed through the `mimo-sweep` binary.
//!
//! Runnable walkthroughs for each capability live in `examples/`.
//!
//! ```
//! use coupled_mimo::array::ArrayGeometry;
//! use coupled_mimo::channel::ChannelRealization;
//! use coupled_mimo::coupling::{CouplingModel, DipoleParams};
//! use coupled_mimo::precoding::optimal_precoder;
//! use coupled_mimo::seed;
//!
//! let geometry = ArrayGeometry::new(4, 2, 0.5)?;
//! let dipole = DipoleParams::half_wave(50.0)?;
//! let coupling = CouplingModel::new(&geometry, &dipole)?;
//! let mut rng = seed::stream(7);
//! let channel = ChannelRealization::sample(&geometry, &coupling.k, 2, 10, 1.0, &mut rng)?;
//! let precoder = optimal_precoder(&channel, 1, 10.0)?;
//! assert_eq!(precoder.rf_chains_used, 2);
//! assert!((precoder.f_rf.clone() * precoder.f_bb.map(|b| b.into()) - &precoder.f_eq).norm() < 1e-9);
//! # Ok::<(), coupled_mimo::Error>(())
//! ```

pub mod array;
pub mod channel;
pub mod coupling;
mod error;
pub mod harness;
pub mod metrics;
pub mod precoding;
pub mod seed;

pub use error::{Error, Result};
pub use num_complex::Complex64;
