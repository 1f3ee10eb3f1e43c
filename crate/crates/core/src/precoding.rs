//! Equivalent precoder construction and its RF/baseband factorization.
//!
//! The optimal equivalent precoder aligns with the right singular vectors of
//! the equivalent channel and loads the eigenmodes by the Lagrangian
//! allocation
//!
//! ```text
//! f_i² = N_s·Σ_k(1/λ_k²)/(SNR·r) + N_s²/r − N_s/(SNR·λ_i²)
//! ```
//!
//! under the total-power constraint Σ f_i² = N_s². The allocation can turn
//! negative on weak modes at low SNR; the weakest mode is then dropped and
//! the allocation re-solved over the remaining set (water-filling clamp).
//!
//! Any M×N_s precoder factors exactly into a phase-only RF matrix with 2N_s
//! columns and a real baseband matrix: each entry is written as the sum of
//! two equal-magnitude phasors. A transmitter therefore needs 2N_s RF chains
//! instead of M.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::error::{Error, Result};

/// Eigenmode powers f_i² for the given singular values (nonincreasing).
///
/// Returns one entry per input mode; dropped modes get 0. The active entries
/// sum to N_s².
pub fn power_allocation(singular_values: &[f64], n_s: usize, snr: f64) -> Result<Vec<f64>> {
    if singular_values.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one singular value is required".into(),
        ));
    }
    if n_s == 0 {
        return Err(Error::InvalidArgument("stream count must be >= 1".into()));
    }
    if !snr.is_finite() || snr <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "linear SNR must be positive, got {snr}"
        )));
    }
    if singular_values.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidArgument(
            "singular values must be sorted nonincreasing".into(),
        ));
    }
    if singular_values.iter().any(|s| s.is_nan() || *s <= 0.0) {
        return Err(Error::InvalidArgument(
            "singular values must be positive".into(),
        ));
    }

    let ns = n_s as f64;
    let total = ns * ns;
    let mut active = singular_values.len();
    loop {
        let inv_sq_sum: f64 = singular_values[..active]
            .iter()
            .map(|l| 1.0 / (l * l))
            .sum();
        let water = ns * inv_sq_sum / (snr * active as f64) + total / active as f64;
        let weakest = water - ns / (snr * singular_values[active - 1].powi(2));
        if weakest >= 0.0 || active == 1 {
            let mut powers = vec![0.0; singular_values.len()];
            for (i, lambda) in singular_values[..active].iter().enumerate() {
                powers[i] = (water - ns / (snr * lambda * lambda)).max(0.0);
            }
            return Ok(powers);
        }
        active -= 1;
    }
}

/// Equivalent precoder with its eigenmode powers and exact phase-only
/// factorization.
#[derive(Debug, Clone)]
pub struct Precoder {
    /// Equivalent precoding matrix `F_eq = V_H·Σ_F`, M×N_s.
    pub f_eq: DMatrix<Complex64>,
    /// Eigenmode powers f_i², one per stream.
    pub f_sq: Vec<f64>,
    /// Phase-only RF factor, M×2N_s; every entry has unit modulus.
    pub f_rf: DMatrix<Complex64>,
    /// Real baseband factor, 2N_s×N_s.
    pub f_bb: DMatrix<f64>,
    /// Stream count N_s.
    pub n_s: usize,
    /// RF chains the factorization needs: 2N_s.
    pub rf_chains_used: usize,
    /// RF chains saved relative to one chain per antenna: max(M − 2N_s, 0).
    pub rf_chains_saved: usize,
}

impl Precoder {
    /// F_RF · F_BB as a complex matrix, for reconstruction checks.
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        &self.f_rf * self.f_bb.map(|b| Complex64::new(b, 0.0))
    }
}

/// Rate-optimal equivalent precoder for one channel realization.
///
/// Requires `n_s ≤ rank`; there is no sensible eigenmode loading for more
/// streams than the channel supports, so that regime is rejected rather
/// than guessed at.
pub fn optimal_precoder(
    realization: &ChannelRealization,
    n_s: usize,
    snr: f64,
) -> Result<Precoder> {
    if n_s == 0 {
        return Err(Error::InvalidArgument("stream count must be >= 1".into()));
    }
    if n_s > realization.rank {
        return Err(Error::UnsupportedConfiguration(format!(
            "{n_s} streams exceed the channel rank {}",
            realization.rank
        )));
    }
    let leading: Vec<f64> = realization
        .singular_values
        .iter()
        .take(n_s)
        .copied()
        .collect();
    let f_sq = power_allocation(&leading, n_s, snr)?;
    let sigma_f = DMatrix::from_diagonal(&DVector::from_iterator(
        n_s,
        f_sq.iter().map(|p| Complex64::new(p.sqrt(), 0.0)),
    ));
    let f_eq = realization.v.columns(0, n_s) * sigma_f;
    let (f_rf, f_bb) = rf_baseband_factorization(&f_eq);
    let m = f_eq.nrows();
    Ok(Precoder {
        f_eq,
        f_sq,
        f_rf,
        f_bb,
        n_s,
        rf_chains_used: 2 * n_s,
        rf_chains_saved: rf_chain_savings(m, n_s),
    })
}

/// Exact factorization of an arbitrary M×N_s matrix into a unit-modulus RF
/// factor (M×2N_s) and a real baseband factor (2N_s×N_s).
///
/// Column j uses b_j = ½·maxᵢ|f_ij| and writes each entry as
/// b_j·(e^{j(∠f−α)} + e^{j(∠f+α)}) with α = arccos(|f|/(2b_j)). An all-zero
/// column gets b_j = 0 with zero phases.
pub fn rf_baseband_factorization(f_eq: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<f64>) {
    let m = f_eq.nrows();
    let cols = f_eq.ncols();
    let mut f_rf = DMatrix::from_element(m, 2 * cols, Complex64::new(1.0, 0.0));
    let mut f_bb = DMatrix::zeros(2 * cols, cols);
    for j in 0..cols {
        let peak = (0..m).map(|i| f_eq[(i, j)].norm()).fold(0.0, f64::max);
        let b = 0.5 * peak;
        if b == 0.0 {
            continue; // phases stay at 0, baseband rows stay 0
        }
        f_bb[(2 * j, j)] = b;
        f_bb[(2 * j + 1, j)] = b;
        for i in 0..m {
            let entry = f_eq[(i, j)];
            let angle = entry.arg();
            let alpha = (entry.norm() / (2.0 * b)).min(1.0).acos();
            f_rf[(i, 2 * j)] = Complex64::from_polar(1.0, angle - alpha);
            f_rf[(i, 2 * j + 1)] = Complex64::from_polar(1.0, angle + alpha);
        }
    }
    (f_rf, f_bb)
}

/// Zero-forcing baseline: right pseudo-inverse of the first N_s rows of the
/// equivalent channel, rescaled so its squared singular values sum to N_s²
/// (the same power budget the optimal precoder satisfies).
pub fn zf_precoder(h_eq: &DMatrix<Complex64>, n_s: usize) -> Result<DMatrix<Complex64>> {
    if n_s == 0 || n_s > h_eq.nrows() {
        return Err(Error::InvalidArgument(format!(
            "stream count {n_s} must be within 1..={}",
            h_eq.nrows()
        )));
    }
    let block = h_eq.rows(0, n_s).into_owned();
    let svd = block.svd(true, true);
    let sv = &svd.singular_values;
    let threshold = h_eq.ncols().max(n_s) as f64 * sv[0] * 1e-12;
    if sv.iter().any(|s| *s <= threshold) {
        return Err(Error::Numerical(
            "row block of the equivalent channel is rank deficient".into(),
        ));
    }
    let u = svd.u.expect("svd requested u");
    let v = svd.v_t.expect("svd requested v_t").adjoint();
    let inv_sigma = DMatrix::from_diagonal(&sv.map(|s| Complex64::new(1.0 / s, 0.0)));
    let pinv = v * inv_sigma * u.adjoint(); // M×N_s
    let scale = n_s as f64 / pinv.norm();
    Ok(pinv * Complex64::new(scale, 0.0))
}

/// Equivalent detection matrix at the UE.
#[derive(Debug, Clone)]
pub struct DetectionMatrix {
    /// W_eq, N×N_s with orthonormal columns.
    pub w_eq: DMatrix<Complex64>,
}

impl DetectionMatrix {
    /// The identity-over-zero block form: the default detector.
    pub fn identity_block(ue_antennas: usize, n_s: usize) -> Result<Self> {
        if n_s == 0 || ue_antennas < n_s {
            return Err(Error::InvalidArgument(format!(
                "need at least {n_s} UE antennas, got {ue_antennas}"
            )));
        }
        let w_eq = DMatrix::from_fn(ue_antennas, n_s, |i, j| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(DetectionMatrix { w_eq })
    }

    /// Detector spanning the channel's leading left singular subspace; the
    /// choice under which the matrix rate meets the closed form.
    pub fn channel_matched(realization: &ChannelRealization, n_s: usize) -> Result<Self> {
        if n_s == 0 || n_s > realization.rank {
            return Err(Error::InvalidArgument(format!(
                "{n_s} streams exceed the channel rank {}",
                realization.rank
            )));
        }
        Ok(DetectionMatrix {
            w_eq: realization.u.columns(0, n_s).into_owned(),
        })
    }
}

/// RF chains saved by the 2N_s-chain factorization: max(M − 2N_s, 0).
pub fn rf_chain_savings(m: usize, n_s: usize) -> usize {
    m.saturating_sub(2 * n_s)
}
