//! Small-scale fading and equivalent-channel assembly.
//!
//! The downlink sees `P` independent incident directions. With fading
//! `H ∈ C^{N×P}`, steering `A ∈ C^{M×P}` and coupling `K ∈ C^{M×M}`, the
//! equivalent channel is `H_eq = H·Aᵀ·K` (the steering matrix enters
//! transposed: it maps the M antenna ports onto the P departure directions).
//! Each realization carries the thin SVD of `H_eq`, which everything
//! downstream (precoding, rate formulas) is built from.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::array::{steering_matrix, ArrayGeometry, IncidentDirections};
use crate::error::{Error, Result};

/// Relative threshold under which a singular value does not count toward the
/// numerical rank: σ_i > max(N, M) · σ_1 · RANK_TOLERANCE.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// i.i.d. CN(0, 1) fading matrix: real and imaginary parts are independent
/// Gaussians with variance 0.5 each.
pub fn sample_fading<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, p, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
    })
}

/// One channel draw: fading, steering, the equivalent channel and its SVD.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Small-scale fading `H`, N×P.
    pub fading: DMatrix<Complex64>,
    /// Steering matrix `A`, M×P.
    pub steering: DMatrix<Complex64>,
    /// Large-scale fading coefficient β.
    pub beta: f64,
    /// Equivalent channel `H_eq = H·Aᵀ·K`, N×M.
    pub h_eq: DMatrix<Complex64>,
    /// Left singular vectors, N×k (thin).
    pub u: DMatrix<Complex64>,
    /// Singular values, nonincreasing, length k = min(N, M).
    pub singular_values: DVector<f64>,
    /// Right singular vectors, M×k (thin).
    pub v: DMatrix<Complex64>,
    /// Numerical rank r ≤ min(N, M, P).
    pub rank: usize,
}

impl ChannelRealization {
    /// Assemble the equivalent channel from its components and decompose it.
    pub fn new(
        fading: DMatrix<Complex64>,
        steering: DMatrix<Complex64>,
        coupling: &DMatrix<Complex64>,
        beta: f64,
    ) -> Result<Self> {
        if fading.ncols() != steering.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "fading is {}x{} but steering holds {} directions",
                fading.nrows(),
                fading.ncols(),
                steering.ncols()
            )));
        }
        if coupling.nrows() != coupling.ncols() || coupling.nrows() != steering.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "coupling must be {m}x{m} to match the steering matrix, got {}x{}",
                coupling.nrows(),
                coupling.ncols(),
                m = steering.nrows()
            )));
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "large-scale fading coefficient must be positive, got {beta}"
            )));
        }
        let h_eq = &fading * steering.transpose() * coupling;
        let svd = h_eq.clone().svd(true, true);
        let u = svd.u.expect("svd requested u");
        let v = svd.v_t.expect("svd requested v_t").adjoint();
        let singular_values = svd.singular_values;
        let threshold =
            fading.nrows().max(coupling.nrows()) as f64 * singular_values[0] * RANK_TOLERANCE;
        let rank = singular_values.iter().filter(|s| **s > threshold).count();
        Ok(ChannelRealization {
            fading,
            steering,
            beta,
            h_eq,
            u,
            singular_values,
            v,
            rank,
        })
    }

    /// Draw directions and fading from `rng` and assemble a realization for
    /// the given geometry and coupling matrix.
    pub fn sample<R: Rng + ?Sized>(
        geometry: &ArrayGeometry,
        coupling: &DMatrix<Complex64>,
        ue_antennas: usize,
        directions: usize,
        beta: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let dirs = IncidentDirections::sample(directions, rng)?;
        let steering = steering_matrix(geometry, &dirs);
        let fading = sample_fading(ue_antennas, directions, rng);
        ChannelRealization::new(fading, steering, coupling, beta)
    }
}
