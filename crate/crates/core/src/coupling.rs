//! Dipole mutual-impedance modeling and the array coupling matrix.
//!
//! Mutual impedances between identical side-by-side half-wave dipoles come
//! from the induced-EMF closed forms, which reduce to sine/cosine integrals.
//! For a rectangular grid the mutual impedance of a pair depends only on the
//! grid offset, so the M×M impedance matrix is assembled from the O(m·n)
//! unique offset values and tiled; the result is complex symmetric and
//! block-Toeplitz with Toeplitz blocks.
//!
//! The coupling matrix `K = Z_L (Z_L I + Z_M)^{−1}` maps ideal element
//! signals to their coupled counterparts. It is obtained by a linear solve
//! rather than an explicit inverse.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::array::ArrayGeometry;
use crate::error::{Error, Result};

/// Free-space wave impedance in Ohms.
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730313;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Power series is used up to this argument; the continued fraction beyond.
const SERIES_CUTOFF: f64 = 6.0;

// ---------------------------------------------------------------------------
// Sine and cosine integrals
// ---------------------------------------------------------------------------

/// Si and Cin by power series, valid for |x| <= SERIES_CUTOFF.
///
/// Si(x)  = Σ_{k≥0} (−1)^k x^{2k+1} / ((2k+1)·(2k+1)!)
/// Cin(x) = Σ_{k≥1} (−1)^{k+1} x^{2k} / ((2k)·(2k)!)
fn si_cin_series(x: f64) -> (f64, f64) {
    let x2 = x * x;

    let mut si = x;
    let mut term = x; // (−1)^k x^{2k+1}/(2k+1)!
    for k in 1..=64 {
        term *= -x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
        let add = term / (2 * k + 1) as f64;
        si += add;
        if add.abs() < 1e-18 * si.abs().max(1e-30) {
            break;
        }
    }

    let mut v = x2 / 2.0; // (−1)^{k+1} x^{2k}/(2k)!
    let mut cin = v / 2.0;
    for k in 2..=64 {
        v *= -x2 / ((2 * k - 1) as f64 * (2 * k) as f64);
        let add = v / (2 * k) as f64;
        cin += add;
        if add.abs() < 1e-18 * cin.abs().max(1e-30) {
            break;
        }
    }

    (si, cin)
}

/// Exponential integral E1(i·x) by the modified Lentz continued fraction.
///
/// Si and Ci follow from E1(ix) = −Ci(x) + i·(Si(x) − π/2). The fraction
/// converges over the whole range this crate sweeps; it replaces the
/// divergent large-argument asymptotic series, which cannot reach 1e−10
/// absolute error until x ≈ 26.
fn e1_imaginary_axis(x: f64) -> Complex64 {
    let z = Complex64::new(0.0, x);
    let tiny = Complex64::new(1e-290, 0.0);
    let one = Complex64::new(1.0, 0.0);

    let mut b = z + 1.0;
    let mut c = Complex64::new(1e290, 0.0);
    let mut d = one / b;
    let mut h = d;
    for i in 1..=400u32 {
        let a = -((i as f64) * (i as f64));
        b += 2.0;
        d = b + d * a;
        if d.norm_sqr() < tiny.re * tiny.re {
            d = tiny;
        }
        c = b + a / c;
        if c.norm_sqr() < tiny.re * tiny.re {
            c = tiny;
        }
        d = one / d;
        let delta = c * d;
        h *= delta;
        if (delta - one).norm() < 1e-16 {
            break;
        }
    }
    h * (-z).exp()
}

fn si_unchecked(x: f64) -> f64 {
    if x < 0.0 {
        return -si_unchecked(-x);
    }
    if x <= SERIES_CUTOFF {
        si_cin_series(x).0
    } else {
        FRAC_PI_2 + e1_imaginary_axis(x).im
    }
}

fn ci_unchecked(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= SERIES_CUTOFF {
        let (_, cin) = si_cin_series(x);
        EULER_GAMMA + x.ln() - cin
    } else {
        -e1_imaginary_axis(x).re
    }
}

/// Sine integral Si(x) = ∫₀ˣ sin(t)/t dt. Odd in x; Si(0) = 0.
pub fn sine_integral(x: f64) -> f64 {
    si_unchecked(x)
}

/// Cosine integral Ci(x) = −∫ₓ^∞ cos(t)/t dt, defined for x > 0.
pub fn cosine_integral(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "cosine integral requires x > 0, got {x}"
        )));
    }
    Ok(ci_unchecked(x))
}

// ---------------------------------------------------------------------------
// Dipole parameters and EMF impedances
// ---------------------------------------------------------------------------

/// Physical parameters of the identical dipole elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleParams {
    /// Dipole length in wavelengths.
    pub length: f64,
    /// Wire radius in wavelengths. Must satisfy the thin-wire assumption.
    pub radius: f64,
    /// Load impedance Z_L at every element, in Ohms.
    pub load_impedance: Complex64,
}

impl DipoleParams {
    pub fn new(length: f64, radius: f64, load_impedance: Complex64) -> Result<Self> {
        if length.is_nan() || length <= 0.0 || radius.is_nan() || radius <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "dipole length and radius must be positive, got {length}, {radius}"
            )));
        }
        if radius >= length / 50.0 {
            return Err(Error::InvalidArgument(format!(
                "thin-wire assumption violated: radius {radius} >= length/50 = {}",
                length / 50.0
            )));
        }
        if load_impedance.re.is_nan() || load_impedance.re <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "load impedance must have positive real part, got {load_impedance}"
            )));
        }
        Ok(DipoleParams {
            length,
            radius,
            load_impedance,
        })
    }

    /// Half-wave dipole with diameter 0.001λ and the given real load in Ohms.
    pub fn half_wave(load_ohms: f64) -> Result<Self> {
        DipoleParams::new(0.5, 0.0005, Complex64::new(load_ohms, 0.0))
    }
}

/// Mutual impedance of two parallel side-by-side half-wave dipoles separated
/// by `separation` wavelengths (induced-EMF closed form).
pub fn mutual_impedance(separation: f64, dipole: &DipoleParams) -> Result<Complex64> {
    if separation.is_nan() || separation <= 0.0 {
        return Err(Error::Domain(format!(
            "separation must be positive, got {separation} (self impedance is a separate operation)"
        )));
    }
    if (dipole.length - 0.5).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "side-by-side closed form is for half-wave dipoles, got length {}",
            dipole.length
        )));
    }
    let l = dipole.length;
    let hyp = separation.hypot(l);
    let u0 = TAU * separation;
    let u1 = TAU * (hyp + l);
    let u2 = TAU * (hyp - l);
    let scale = FREE_SPACE_IMPEDANCE / (4.0 * PI);
    let r = scale * (2.0 * ci_unchecked(u0) - ci_unchecked(u1) - ci_unchecked(u2));
    let x = -scale * (2.0 * si_unchecked(u0) - si_unchecked(u1) - si_unchecked(u2));
    Ok(Complex64::new(r, x))
}

/// Self impedance of a finite-radius dipole by the induced-EMF method,
/// referred to the current maximum. The real part carries no radius term;
/// the radius enters the reactance through Ci(4π·a²/l).
pub fn self_impedance(dipole: &DipoleParams) -> Complex64 {
    let kl = TAU * dipole.length;
    let g = EULER_GAMMA;
    let r = FREE_SPACE_IMPEDANCE / (2.0 * PI)
        * (g + kl.ln() - ci_unchecked(kl)
            + 0.5 * kl.sin() * (si_unchecked(2.0 * kl) - 2.0 * si_unchecked(kl))
            + 0.5
                * kl.cos()
                * (g + (kl / 2.0).ln() + ci_unchecked(2.0 * kl) - 2.0 * ci_unchecked(kl)));
    let radius_arg = 2.0 * TAU * dipole.radius * dipole.radius / dipole.length;
    let x = FREE_SPACE_IMPEDANCE / (4.0 * PI)
        * (2.0 * si_unchecked(kl) + kl.cos() * (2.0 * si_unchecked(kl) - si_unchecked(2.0 * kl))
            - kl.sin()
                * (2.0 * ci_unchecked(kl) - ci_unchecked(2.0 * kl) - ci_unchecked(radius_arg)));
    Complex64::new(r, x)
}

// ---------------------------------------------------------------------------
// Impedance matrix and coupling matrix
// ---------------------------------------------------------------------------

/// Mutual impedance matrix `Z_M ∈ C^{M×M}` for a rectangular grid.
///
/// The entry for a pair at grid offset (Δc, Δe) is the pair impedance at
/// separation `d·√(Δc² + Δe²)`; the diagonal is the self impedance. Only the
/// `m·n` unique offsets are evaluated, then tiled over the full matrix.
pub fn impedance_matrix(
    geometry: &ArrayGeometry,
    dipole: &DipoleParams,
) -> Result<DMatrix<Complex64>> {
    let (m, n) = (geometry.per_row, geometry.per_col);
    let mut offsets = vec![Complex64::new(0.0, 0.0); m * n];
    for dc in 0..m {
        for de in 0..n {
            offsets[dc * n + de] = if dc == 0 && de == 0 {
                self_impedance(dipole)
            } else {
                let distance = geometry.spacing * ((dc * dc + de * de) as f64).sqrt();
                mutual_impedance(distance, dipole)?
            };
        }
    }
    let total = geometry.num_antennas();
    Ok(DMatrix::from_fn(total, total, |i, j| {
        let (ci, ei) = (i / n, i % n);
        let (cj, ej) = (j / n, j % n);
        offsets[ci.abs_diff(cj) * n + ei.abs_diff(ej)]
    }))
}

/// Coupling matrix `K` solving `K (Z_L I + Z_M) = Z_L I`.
///
/// Fails with a condition-number report when the loaded impedance matrix is
/// numerically singular; otherwise the relative residual is guaranteed below
/// 1e−8.
pub fn coupling_matrix(z_m: &DMatrix<Complex64>, z_l: Complex64) -> Result<DMatrix<Complex64>> {
    if z_m.nrows() != z_m.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "impedance matrix must be square, got {}x{}",
            z_m.nrows(),
            z_m.ncols()
        )));
    }
    let m = z_m.nrows();
    let mut loaded = z_m.clone();
    for i in 0..m {
        loaded[(i, i)] += z_l;
    }
    let rhs = DMatrix::from_diagonal_element(m, m, z_l);
    // K·S = Z_L·I with S complex symmetric, so solve Sᵀ Kᵀ = Z_L I.
    let solution = loaded.transpose().lu().solve(&rhs);
    let k = match solution {
        Some(kt) => kt.transpose(),
        None => {
            let sv = loaded.clone().svd(false, false).singular_values;
            let cond = if sv[sv.len() - 1] > 0.0 {
                sv[0] / sv[sv.len() - 1]
            } else {
                f64::INFINITY
            };
            return Err(Error::Numerical(format!(
                "loaded impedance matrix Z_L I + Z_M is singular (condition number {cond:.3e})"
            )));
        }
    };
    let residual = (&k * &loaded - &rhs).norm() / rhs.norm();
    if residual > 1e-8 {
        return Err(Error::Numerical(format!(
            "coupling solve residual {residual:.3e} exceeds 1e-8"
        )));
    }
    Ok(k)
}

/// Mutual impedance matrix together with the coupling matrix it induces.
#[derive(Debug, Clone)]
pub struct CouplingModel {
    /// Mutual impedance matrix `Z_M`, Ohms.
    pub z_m: DMatrix<Complex64>,
    /// Dimensionless coupling matrix `K = Z_L (Z_L I + Z_M)^{−1}`.
    pub k: DMatrix<Complex64>,
}

impl CouplingModel {
    pub fn new(geometry: &ArrayGeometry, dipole: &DipoleParams) -> Result<Self> {
        let z_m = impedance_matrix(geometry, dipole)?;
        let k = coupling_matrix(&z_m, dipole.load_impedance)?;
        Ok(CouplingModel { z_m, k })
    }
}
