//! Rate, diversity-gain and effective-capacity metrics.
//!
//! Rates are bits/s/Hz. The matrix-form rate
//!
//! ```text
//! R = log₂ det( I + (SNR/N_s)·W†·H_eq·F·F†·H_eq†·W·(W†W)^{−1} )
//! ```
//!
//! agrees with the closed form Σᵢ log₂(1 + (SNR/N_s)·f_i²·λ_i²) whenever the
//! precoder/detector pair is aligned with the channel's singular subspaces;
//! both routes are kept and cross-checked in tests.
//!
//! The effective capacity of a rate process under QoS exponent θ is
//! `−(1/θT)·ln E{e^{−θTB·R}}` (bits/s). The estimator works in the log
//! domain: at the frame/bandwidth scales used here θTB·R reaches thousands
//! of nats and naive exponentials underflow.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::array::ArrayGeometry;
use crate::channel::ChannelRealization;
use crate::coupling::{CouplingModel, DipoleParams};
use crate::error::{Error, Result};
use crate::precoding::optimal_precoder;
use crate::seed;

/// Statistical QoS parameters for effective capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosParams {
    /// QoS statistical exponent θ (1/bit); larger is stricter.
    pub theta: f64,
    /// Frame duration T in seconds.
    pub frame_duration: f64,
    /// Bandwidth B in Hz.
    pub bandwidth: f64,
}

impl QosParams {
    pub fn new(theta: f64, frame_duration: f64, bandwidth: f64) -> Result<Self> {
        let bad = |v: f64| v.is_nan() || v <= 0.0;
        if bad(theta) || bad(frame_duration) || bad(bandwidth) {
            return Err(Error::InvalidArgument(format!(
                "QoS parameters must be positive, got theta={theta}, T={frame_duration}, B={bandwidth}"
            )));
        }
        Ok(QosParams {
            theta,
            frame_duration,
            bandwidth,
        })
    }
}

/// One Monte-Carlo rate draw, tagged with the stream seed that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSample {
    /// Achievable rate in bits/s/Hz; never negative.
    pub rate: f64,
    pub realization_seed: u64,
}

/// Mean with its standard error over independent trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
}

impl MonteCarloEstimate {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        MonteCarloEstimate {
            mean,
            stderr,
            trials: n,
        }
    }
}

/// Shared knobs for the Monte-Carlo link estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    /// UE antenna count N.
    pub ue_antennas: usize,
    /// Independent incident directions P.
    pub directions: usize,
    /// Data streams N_s.
    pub streams: usize,
    /// Linear SNR at the BS.
    pub snr: f64,
    /// Large-scale fading coefficient β.
    pub beta: f64,
    pub trials: usize,
    pub seed: u64,
}

// ---------------------------------------------------------------------------
// Rates
// ---------------------------------------------------------------------------

/// Matrix-form achievable rate (bits/s/Hz).
pub fn shannon_rate(
    h_eq: &DMatrix<Complex64>,
    f_eq: &DMatrix<Complex64>,
    w_eq: &DMatrix<Complex64>,
    snr: f64,
    n_s: usize,
) -> Result<f64> {
    if w_eq.nrows() != h_eq.nrows() {
        return Err(Error::ShapeMismatch(format!(
            "detector has {} rows but the channel has {} outputs",
            w_eq.nrows(),
            h_eq.nrows()
        )));
    }
    if f_eq.nrows() != h_eq.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "precoder has {} rows but the channel has {} inputs",
            f_eq.nrows(),
            h_eq.ncols()
        )));
    }
    if n_s == 0 {
        return Err(Error::InvalidArgument("stream count must be >= 1".into()));
    }
    if !snr.is_finite() || snr <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "linear SNR must be positive, got {snr}"
        )));
    }
    let gram = w_eq.adjoint() * w_eq;
    let gram_inv = gram
        .try_inverse()
        .ok_or_else(|| Error::Numerical("detection Gram matrix W†W is singular".into()))?;
    let g = w_eq.adjoint() * h_eq * f_eq;
    let k = w_eq.ncols();
    let inner = DMatrix::identity(k, k)
        + (&g * g.adjoint() * gram_inv) * Complex64::new(snr / n_s as f64, 0.0);
    let det = inner.determinant();
    Ok((det.re.ln() / std::f64::consts::LN_2).max(0.0))
}

/// Closed-form maximum rate over the active eigenmodes (bits/s/Hz):
/// Σᵢ log₂(1 + (SNR/N_s)·f_i²·λ_i²).
pub fn max_rate_closed_form(
    singular_values: &[f64],
    f_sq: &[f64],
    n_s: usize,
    snr: f64,
) -> Result<f64> {
    if singular_values.len() != f_sq.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} singular values but {} mode powers",
            singular_values.len(),
            f_sq.len()
        )));
    }
    if n_s == 0 || !snr.is_finite() || snr <= 0.0 {
        return Err(Error::InvalidArgument(
            "need n_s >= 1 and a positive linear SNR".into(),
        ));
    }
    let scale = snr / n_s as f64;
    Ok(singular_values
        .iter()
        .zip(f_sq)
        .map(|(l, p)| (1.0 + scale * p * l * l).log2())
        .sum())
}

// ---------------------------------------------------------------------------
// Receive SNR and diversity gains
// ---------------------------------------------------------------------------

/// Per-trial receive-SNR values ξ_t = SNR·N·β·‖F†·H_eq†·H_eq·F‖_F with the
/// rate-optimal precoder for each realization.
fn receive_snr_samples(
    geometry: &ArrayGeometry,
    coupling: &DMatrix<Complex64>,
    cfg: &LinkConfig,
) -> Result<Vec<f64>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trial count must be >= 1".into()));
    }
    (0..cfg.trials)
        .map(|t| {
            let mut rng = seed::stream(seed::derive(&[cfg.seed, t as u64]));
            let realization = ChannelRealization::sample(
                geometry,
                coupling,
                cfg.ue_antennas,
                cfg.directions,
                cfg.beta,
                &mut rng,
            )?;
            let precoder = optimal_precoder(&realization, cfg.streams, cfg.snr)?;
            let inner = precoder.f_eq.adjoint()
                * realization.h_eq.adjoint()
                * &realization.h_eq
                * &precoder.f_eq;
            Ok(cfg.snr * cfg.ue_antennas as f64 * cfg.beta * inner.norm())
        })
        .collect()
}

/// Monte-Carlo expectation of the UE receive SNR for one array configuration.
pub fn receive_snr_expectation(
    geometry: &ArrayGeometry,
    coupling: &CouplingModel,
    cfg: &LinkConfig,
) -> Result<MonteCarloEstimate> {
    let samples = receive_snr_samples(geometry, &coupling.k, cfg)?;
    Ok(MonteCarloEstimate::from_samples(&samples))
}

/// Difference of two receive-SNR expectations under common random numbers:
/// both sides see identical direction and fading draws trial by trial, so
/// the estimate of a vanishing gain is exactly zero.
fn paired_gain(
    geometry: &ArrayGeometry,
    baseline: &ArrayGeometry,
    dipole: &DipoleParams,
    cfg: &LinkConfig,
) -> Result<MonteCarloEstimate> {
    let coupling = CouplingModel::new(geometry, dipole)?;
    let coupling_base = CouplingModel::new(baseline, dipole)?;
    let a = receive_snr_samples(geometry, &coupling.k, cfg)?;
    let b = receive_snr_samples(baseline, &coupling_base.k, cfg)?;
    let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    Ok(MonteCarloEstimate::from_samples(&diffs))
}

/// Antenna-number receive diversity gain: ξ at (counts, d_min) minus ξ at
/// (min_counts, d_min), both at the same minimum spacing.
pub fn diversity_gain_antenna_number(
    counts: (usize, usize),
    min_counts: (usize, usize),
    min_spacing: f64,
    dipole: &DipoleParams,
    cfg: &LinkConfig,
) -> Result<MonteCarloEstimate> {
    let geometry = ArrayGeometry::new(counts.0, counts.1, min_spacing)?;
    let baseline = ArrayGeometry::new(min_counts.0, min_counts.1, min_spacing)?;
    paired_gain(&geometry, &baseline, dipole, cfg)
}

/// Antenna-spacing receive diversity gain: ξ at (min_counts, d) minus ξ at
/// (min_counts, d_min), both with the same element count.
pub fn diversity_gain_spacing(
    spacing: f64,
    min_spacing: f64,
    min_counts: (usize, usize),
    dipole: &DipoleParams,
    cfg: &LinkConfig,
) -> Result<MonteCarloEstimate> {
    let geometry = ArrayGeometry::new(min_counts.0, min_counts.1, spacing)?;
    let baseline = ArrayGeometry::new(min_counts.0, min_counts.1, min_spacing)?;
    paired_gain(&geometry, &baseline, dipole, cfg)
}

// ---------------------------------------------------------------------------
// Effective capacity
// ---------------------------------------------------------------------------

/// Effective capacity (bits/s) of a sampled rate process:
/// −(1/θT)·ln( mean(e^{−θTB·Rᵢ}) ), evaluated with log-sum-exp.
pub fn effective_capacity(rates: &[f64], qos: &QosParams) -> Result<f64> {
    if rates.is_empty() {
        return Err(Error::InvalidArgument(
            "effective capacity needs at least one rate sample".into(),
        ));
    }
    let tb = qos.theta * qos.frame_duration * qos.bandwidth;
    let peak = rates
        .iter()
        .map(|r| -tb * r)
        .fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = rates.iter().map(|r| (-tb * r - peak).exp()).sum();
    let ln_mean = peak + (sum / rates.len() as f64).ln();
    Ok(-ln_mean / (qos.theta * qos.frame_duration))
}

/// Effective capacity with a bootstrap confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCapacityEstimate {
    /// Point estimate in bits/s.
    pub value: f64,
    /// Bootstrap standard error.
    pub stderr: f64,
    /// 95% bootstrap percentile interval.
    pub ci_low: f64,
    pub ci_high: f64,
    pub samples: usize,
}

/// Bootstrap the effective-capacity estimator over the given rate samples.
pub fn effective_capacity_with_ci(
    rates: &[f64],
    qos: &QosParams,
    resamples: usize,
    seed_value: u64,
) -> Result<EffectiveCapacityEstimate> {
    let value = effective_capacity(rates, qos)?;
    if resamples < 2 {
        return Err(Error::InvalidArgument(
            "bootstrap needs at least 2 resamples".into(),
        ));
    }
    let mut rng = seed::stream(seed::derive(&[seed_value, 0xb007]));
    let n = rates.len();
    let mut replicates = Vec::with_capacity(resamples);
    let mut scratch = vec![0.0; n];
    for _ in 0..resamples {
        for slot in scratch.iter_mut() {
            *slot = rates[rng.random_range(0..n)];
        }
        replicates.push(effective_capacity(&scratch, qos)?);
    }
    let mean = replicates.iter().sum::<f64>() / resamples as f64;
    let var = replicates
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .sum::<f64>()
        / (resamples - 1) as f64;
    replicates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pick = |q: f64| replicates[((resamples - 1) as f64 * q).round() as usize];
    Ok(EffectiveCapacityEstimate {
        value,
        stderr: var.sqrt(),
        ci_low: pick(0.025),
        ci_high: pick(0.975),
        samples: n,
    })
}

/// Closed-form effective-capacity upper bound (bits/s) from the coupling
/// trace term tr(Aᵀ·K·K†·Ā) = ‖Aᵀ·K‖_F².
pub fn effective_capacity_upper_bound_from_trace(
    trace: f64,
    r: usize,
    n_s: usize,
    snr: f64,
    directions: usize,
    bandwidth: f64,
) -> f64 {
    let r_f = r as f64;
    let ns = n_s as f64;
    let inner = ns / (r_f * r_f) * (ns + r_f / snr) * (trace + (directions * r) as f64);
    bandwidth * (r_f * (snr / ns).log2() + r_f * inner.log2())
}

/// Closed-form effective-capacity upper bound for one steering/coupling pair.
pub fn effective_capacity_upper_bound(
    steering: &DMatrix<Complex64>,
    coupling: &DMatrix<Complex64>,
    r: usize,
    n_s: usize,
    snr: f64,
    bandwidth: f64,
) -> Result<f64> {
    if steering.nrows() != coupling.nrows() || coupling.nrows() != coupling.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "steering {}x{} does not match coupling {}x{}",
            steering.nrows(),
            steering.ncols(),
            coupling.nrows(),
            coupling.ncols()
        )));
    }
    if r == 0
        || n_s == 0
        || !snr.is_finite()
        || snr <= 0.0
        || bandwidth.is_nan()
        || bandwidth <= 0.0
    {
        return Err(Error::InvalidArgument(
            "need r >= 1, n_s >= 1 and positive SNR and bandwidth".into(),
        ));
    }
    let trace = (steering.transpose() * coupling).norm_squared();
    Ok(effective_capacity_upper_bound_from_trace(
        trace,
        r,
        n_s,
        snr,
        steering.ncols(),
        bandwidth,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::IncidentDirections;
    use crate::channel::sample_fading;
    use crate::precoding::DetectionMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_precoder_gives_zero_rate() {
        let h = DMatrix::from_element(2, 4, c(0.7, -0.2));
        let f = DMatrix::zeros(4, 2);
        let w = DetectionMatrix::identity_block(2, 2).unwrap();
        let rate = shannon_rate(&h, &f, &w.w_eq, 10.0, 2).unwrap();
        assert_eq!(rate, 0.0);
    }

    #[test]
    fn scalar_case_matches_hand_evaluation() {
        // 1×1 everything, F carries the whole N_s-normalized power.
        let h = DMatrix::from_element(1, 1, c(1.0, 0.0));
        let w = DMatrix::from_element(1, 1, c(1.0, 0.0));
        for n_s in [1usize, 2, 3] {
            let f = DMatrix::from_element(1, 1, c(n_s as f64, 0.0));
            for snr in [0.5, 1.0, 10.0] {
                let rate = shannon_rate(&h, &f, &w, snr, n_s).unwrap();
                let want = (1.0 + snr * n_s as f64).log2();
                assert!((rate - want).abs() < 1e-12, "rate {rate} want {want}");
            }
        }
    }

    #[test]
    fn matrix_rate_matches_closed_form_with_matched_pair() {
        let mut rng = seed::stream(1001);
        for trial in 0..50u64 {
            let n = 2 + (trial % 7) as usize; // UE antennas 2..8, rank up to 8
            let p = 8 + (trial % 4) as usize;
            let m = 9 + (trial % 5) as usize;
            let dirs = IncidentDirections::sample(p, &mut rng).unwrap();
            let geometry = ArrayGeometry::new(m, 1, 0.3).unwrap();
            let a = crate::array::steering_matrix(&geometry, &dirs);
            let h = sample_fading(n, p, &mut rng);
            let k = DMatrix::identity(m, m);
            let re = ChannelRealization::new(h, a, &k, 1.0).unwrap();
            let n_s = 1 + (trial as usize) % re.rank;
            let snr = 10f64.powf((trial % 3) as f64 - 1.0);
            let pre = optimal_precoder(&re, n_s, snr).unwrap();
            let w = DetectionMatrix::channel_matched(&re, n_s).unwrap();
            let matrix_rate = shannon_rate(&re.h_eq, &pre.f_eq, &w.w_eq, snr, n_s).unwrap();
            let lead: Vec<f64> = re.singular_values.iter().take(n_s).copied().collect();
            let closed = max_rate_closed_form(&lead, &pre.f_sq, n_s, snr).unwrap();
            assert!(
                (matrix_rate - closed).abs() < 1e-9 * closed.max(1.0),
                "matrix {matrix_rate} vs closed {closed}"
            );
        }
    }

    #[test]
    fn closed_form_edge_values() {
        // All mode powers zero -> rate 0 through the per-mode form.
        assert_eq!(
            max_rate_closed_form(&[2.0, 1.0], &[0.0, 0.0], 1, 5.0).unwrap(),
            0.0
        );
        // One mode, unit everything: log2(2) = 1.
        let r = max_rate_closed_form(&[1.0], &[1.0], 1, 1.0).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        assert!(max_rate_closed_form(&[1.0], &[1.0, 1.0], 1, 1.0).is_err());
    }

    #[test]
    fn singular_detector_is_reported() {
        let h = DMatrix::from_element(2, 3, c(1.0, 0.0));
        let f = DMatrix::from_element(3, 1, c(1.0, 0.0));
        let w = DMatrix::from_fn(2, 2, |_, j| if j == 0 { c(1.0, 0.0) } else { c(2.0, 0.0) });
        assert!(matches!(
            shannon_rate(&h, &f, &w, 1.0, 1),
            Err(Error::Numerical(_))
        ));
    }

    fn tiny_link(seed_value: u64, snr: f64, trials: usize) -> LinkConfig {
        LinkConfig {
            ue_antennas: 4,
            directions: 6,
            streams: 1,
            snr,
            beta: 1.0,
            trials,
            seed: seed_value,
        }
    }

    #[test]
    fn receive_snr_is_deterministic() {
        let geometry = ArrayGeometry::new(2, 2, 0.4).unwrap();
        let dipole = DipoleParams::half_wave(50.0).unwrap();
        let coupling = CouplingModel::new(&geometry, &dipole).unwrap();
        let cfg = tiny_link(7, 10.0, 1);
        let a = receive_snr_expectation(&geometry, &coupling, &cfg).unwrap();
        let b = receive_snr_expectation(&geometry, &coupling, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.stderr, 0.0);
        assert_eq!(a.trials, 1);
    }

    #[test]
    fn receive_snr_single_antenna_matches_scalar_reduction() {
        // M = 1: H_eq = k·(row sums of H) and the precoder is a unit phase
        // times N_s = 1, so ξ_t = SNR·N·β·|k|²·‖H·1‖².
        let geometry = ArrayGeometry::new(1, 1, 0.1).unwrap();
        let dipole = DipoleParams::half_wave(50.0).unwrap();
        let coupling = CouplingModel::new(&geometry, &dipole).unwrap();
        let cfg = tiny_link(31, 2.5, 8);
        let estimate = receive_snr_expectation(&geometry, &coupling, &cfg).unwrap();

        let k = coupling.k[(0, 0)];
        let mut hand = Vec::new();
        for t in 0..cfg.trials {
            let mut rng = seed::stream(seed::derive(&[cfg.seed, t as u64]));
            let _dirs = IncidentDirections::sample(cfg.directions, &mut rng).unwrap();
            let h = sample_fading(cfg.ue_antennas, cfg.directions, &mut rng);
            let row_sums: f64 = (0..cfg.ue_antennas)
                .map(|i| {
                    (0..cfg.directions)
                        .map(|p| h[(i, p)])
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .sum();
            hand.push(cfg.snr * cfg.ue_antennas as f64 * cfg.beta * k.norm_sqr() * row_sums);
        }
        let hand_mean = hand.iter().sum::<f64>() / hand.len() as f64;
        assert!(
            (estimate.mean - hand_mean).abs() < 1e-10 * hand_mean,
            "{} vs {hand_mean}",
            estimate.mean
        );
    }

    #[test]
    fn receive_snr_is_linear_in_snr_at_single_stream() {
        let geometry = ArrayGeometry::new(2, 2, 0.3).unwrap();
        let dipole = DipoleParams::half_wave(50.0).unwrap();
        let coupling = CouplingModel::new(&geometry, &dipole).unwrap();
        let lo = receive_snr_expectation(&geometry, &coupling, &tiny_link(5, 2.0, 6)).unwrap();
        let hi = receive_snr_expectation(&geometry, &coupling, &tiny_link(5, 4.0, 6)).unwrap();
        assert!((hi.mean - 2.0 * lo.mean).abs() < 1e-12 * hi.mean);
    }

    #[test]
    fn diversity_baselines_vanish_exactly() {
        let dipole = DipoleParams::half_wave(50.0).unwrap();
        let cfg = tiny_link(11, 10.0, 5);
        let gm = diversity_gain_antenna_number((1, 1), (1, 1), 0.1, &dipole, &cfg).unwrap();
        assert_eq!(gm.mean, 0.0);
        assert_eq!(gm.stderr, 0.0);
        let gd = diversity_gain_spacing(0.1, 0.1, (2, 2), &dipole, &cfg).unwrap();
        assert_eq!(gd.mean, 0.0);
        assert_eq!(gd.stderr, 0.0);
    }

    #[test]
    fn spacing_gain_scales_with_snr_where_nondegenerate() {
        // At M_min = 4 the coupling depends on the spacing, so the gain is
        // nonzero and exactly linear in SNR for a single stream.
        let dipole = DipoleParams::half_wave(50.0).unwrap();
        let mut values = Vec::new();
        for snr in [1.0, 10f64.sqrt(), 10.0] {
            let cfg = tiny_link(13, snr, 30);
            let g = diversity_gain_spacing(0.5, 0.1, (2, 2), &dipole, &cfg).unwrap();
            values.push(g.mean);
        }
        assert!(values[0] > 0.0);
        assert!(values[1] > values[0]);
        assert!(values[2] > values[1]);
        assert!((values[2] - 10.0 * values[0]).abs() < 1e-9 * values[2].abs());
    }

    #[test]
    fn effective_capacity_of_constant_rate() {
        let qos = QosParams::new(0.7, 1e-3, 1e6).unwrap();
        let rates = vec![3.25; 40];
        let ec = effective_capacity(&rates, &qos).unwrap();
        let want = qos.bandwidth * 3.25;
        assert!((ec - want).abs() < 1e-12 * want);
    }

    #[test]
    fn effective_capacity_approaches_mean_rate_as_theta_vanishes() {
        let qos = QosParams::new(1e-9, 1e-3, 1e6).unwrap();
        let rates: Vec<f64> = (0..500).map(|i| 2.0 + (i as f64 * 0.37).sin()).collect();
        let ec = effective_capacity(&rates, &qos).unwrap();
        let mean_rate = rates.iter().sum::<f64>() / rates.len() as f64;
        let want = qos.bandwidth * mean_rate;
        assert!((ec - want).abs() < 1e-3 * want, "{ec} vs {want}");
    }

    #[test]
    fn effective_capacity_two_atom_closed_form() {
        // theta*T*B = 1 with rates {1, 2}: EC = -(1/θT)·ln((e^{-1}+e^{-2})/2).
        let qos = QosParams::new(1.0, 1e-3, 1e3).unwrap();
        let ec = effective_capacity(&[1.0, 2.0], &qos).unwrap();
        let want = -1.0 / (qos.theta * qos.frame_duration)
            * (((-1.0f64).exp() + (-2.0f64).exp()) / 2.0).ln();
        assert!((ec - want).abs() < 1e-9 * want.abs());
    }

    #[test]
    fn effective_capacity_underflow_resistance_and_monotonicity() {
        let rates: Vec<f64> = (0..200).map(|i| 8.0 + (i % 7) as f64 * 0.5).collect();
        let mut previous = f64::INFINITY;
        for theta in [1e-3, 1e-2, 1e-1, 1.0, 10.0] {
            let qos = QosParams::new(theta, 1e-3, 1e6).unwrap();
            let ec = effective_capacity(&rates, &qos).unwrap();
            assert!(ec.is_finite(), "theta {theta} underflowed: {ec}");
            assert!(ec < previous, "EC must decrease in theta");
            previous = ec;
        }
        // Jensen: never above the mean-rate line.
        let mean_rate = rates.iter().sum::<f64>() / rates.len() as f64;
        assert!(previous <= 1e6 * mean_rate);
    }

    #[test]
    fn effective_capacity_rejects_empty_samples() {
        let qos = QosParams::new(0.01, 1e-3, 1e6).unwrap();
        assert!(effective_capacity(&[], &qos).is_err());
        assert!(QosParams::new(0.0, 1e-3, 1e6).is_err());
        assert!(QosParams::new(0.01, 0.0, 1e6).is_err());
        assert!(QosParams::new(0.01, 1e-3, 0.0).is_err());
    }

    #[test]
    fn bootstrap_interval_brackets_the_estimate() {
        let mut rng = seed::stream(404);
        let rates: Vec<f64> = (0..300).map(|_| rng.random_range(4.0..9.0)).collect();
        let qos = QosParams::new(0.01, 1e-3, 1e6).unwrap();
        let est = effective_capacity_with_ci(&rates, &qos, 400, 42).unwrap();
        assert!(est.ci_low <= est.value && est.value <= est.ci_high);
        assert!(est.stderr > 0.0);
        let again = effective_capacity_with_ci(&rates, &qos, 400, 42).unwrap();
        assert_eq!(est, again);
    }

    #[test]
    fn upper_bound_trace_of_unit_modulus_steering() {
        let (m, p) = (6, 9);
        let a = DMatrix::from_fn(m, p, |i, j| {
            Complex64::from_polar(1.0, (i * 5 + j) as f64 * 0.37)
        });
        let k = DMatrix::identity(m, m);
        let trace = (a.transpose() * &k).norm_squared();
        assert!((trace - (m * p) as f64).abs() < 1e-9);
        // r = n_s = 1, snr = 2: B·(log2(2) + log2((1 + 1/2)·(trace + P)))
        let bound = effective_capacity_upper_bound(&a, &k, 1, 1, 2.0, 1e6).unwrap();
        let direct = 1e6 * (2.0f64.log2() + (1.5 * (trace + p as f64)).log2());
        assert!(
            (bound - direct).abs() < 1e-9 * direct.abs(),
            "{bound} vs {direct}"
        );
    }

    #[test]
    fn upper_bound_validates_inputs() {
        let a = DMatrix::from_element(3, 2, c(1.0, 0.0));
        let k = DMatrix::identity(3, 3);
        assert!(effective_capacity_upper_bound(&a, &k, 0, 1, 1.0, 1e6).is_err());
        assert!(effective_capacity_upper_bound(&a, &k, 1, 1, 0.0, 1e6).is_err());
        let k_bad = DMatrix::<Complex64>::identity(2, 2);
        assert!(effective_capacity_upper_bound(&a, &k_bad, 1, 1, 1.0, 1e6).is_err());
    }
}
