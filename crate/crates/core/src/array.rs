//! Rectangular antenna-array geometry and far-field steering matrices.
//!
//! The array has `per_row` elements along the x axis and `per_col` elements
//! along the y axis, all separated by the same spacing `d` (expressed as a
//! multiple of the carrier wavelength). The element at grid position (1, 1)
//! is the phase reference; the response of element (c, e) toward azimuth φ
//! and elevation θ is
//!
//! ```text
//! exp{ j·2π·d·[ (c−1)·cosφ·sinθ + (e−1)·sinφ·sinθ ] }
//! ```
//!
//! Antennas are vectorized column-major over the grid (the y index varies
//! fastest); the impedance matrix in [`crate::coupling`] uses the same order,
//! which is the only thing that matters — any consistent order is unitarily
//! equivalent.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};

/// Rectangular grid of identical antenna elements.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    /// Antennas per row (x direction), `m`.
    pub per_row: usize,
    /// Antennas per column (y direction), `n`.
    pub per_col: usize,
    /// Element spacing as a multiple of the carrier wavelength.
    pub spacing: f64,
    /// Carrier wavelength in meters. Only spacing/wavelength ratios enter any
    /// formula, so this stays 1.0 unless absolute lengths are needed.
    pub wavelength: f64,
}

impl ArrayGeometry {
    /// Build a `per_row × per_col` grid with the given spacing in wavelengths.
    pub fn new(per_row: usize, per_col: usize, spacing: f64) -> Result<Self> {
        if per_row == 0 || per_col == 0 {
            return Err(Error::InvalidArgument(format!(
                "antenna counts must be at least 1, got {per_row}x{per_col}"
            )));
        }
        if !spacing.is_finite() || spacing <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "antenna spacing must be positive, got {spacing}"
            )));
        }
        Ok(ArrayGeometry {
            per_row,
            per_col,
            spacing,
            wavelength: 1.0,
        })
    }

    /// Total element count `M = m·n`.
    pub fn num_antennas(&self) -> usize {
        self.per_row * self.per_col
    }

    /// Array length and width `(a, b)` in wavelengths: `a = d·(m−1)`,
    /// `b = d·(n−1)`.
    pub fn aperture(&self) -> (f64, f64) {
        (
            self.spacing * (self.per_row - 1) as f64,
            self.spacing * (self.per_col - 1) as f64,
        )
    }

    /// Linear index of grid element (c, e), both 1-based; the y index varies
    /// fastest. Steering and impedance matrices share this order.
    pub fn linear_index(&self, c: usize, e: usize) -> usize {
        (c - 1) * self.per_col + (e - 1)
    }

    /// Grid position (c, e), 1-based, of a linear antenna index.
    pub fn grid_position(&self, index: usize) -> (usize, usize) {
        (index / self.per_col + 1, index % self.per_col + 1)
    }
}

/// A set of plane-wave incident directions: one azimuth per direction and a
/// single elevation shared by all of them within a channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidentDirections {
    pub azimuths: Vec<f64>,
    pub elevation: f64,
}

impl IncidentDirections {
    /// Validate angles: all azimuths and the elevation must lie in [−π/2, π/2].
    pub fn new(azimuths: Vec<f64>, elevation: f64) -> Result<Self> {
        if azimuths.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one incident direction is required".into(),
            ));
        }
        let in_range = |a: f64| (-FRAC_PI_2..=FRAC_PI_2).contains(&a);
        if !in_range(elevation) {
            return Err(Error::InvalidArgument(format!(
                "elevation {elevation} outside [-pi/2, pi/2]"
            )));
        }
        if let Some(bad) = azimuths.iter().find(|a| !in_range(**a)) {
            return Err(Error::InvalidArgument(format!(
                "azimuth {bad} outside [-pi/2, pi/2]"
            )));
        }
        Ok(IncidentDirections {
            azimuths,
            elevation,
        })
    }

    /// Draw `count` azimuths and one shared elevation, all i.i.d. uniform on
    /// [−π/2, π/2]. The elevation is drawn first.
    pub fn sample<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "direction count must be at least 1".into(),
            ));
        }
        let elevation = rng.random_range(-FRAC_PI_2..=FRAC_PI_2);
        let azimuths = (0..count)
            .map(|_| rng.random_range(-FRAC_PI_2..=FRAC_PI_2))
            .collect();
        Ok(IncidentDirections {
            azimuths,
            elevation,
        })
    }

    /// Number of directions `P`.
    pub fn len(&self) -> usize {
        self.azimuths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.azimuths.is_empty()
    }
}

/// Phase response of grid element (c, e) (1-based) toward one direction.
///
/// Element (1, 1) is the zero-phase reference, so the result is exactly 1
/// there and for any element when the elevation is zero.
pub fn steering_element(
    geometry: &ArrayGeometry,
    c: usize,
    e: usize,
    azimuth: f64,
    elevation: f64,
) -> Result<Complex64> {
    if c < 1 || c > geometry.per_row || e < 1 || e > geometry.per_col {
        return Err(Error::InvalidArgument(format!(
            "element index ({c}, {e}) outside {}x{} grid",
            geometry.per_row, geometry.per_col
        )));
    }
    Ok(steering_element_unchecked(
        geometry, c, e, azimuth, elevation,
    ))
}

fn steering_element_unchecked(
    geometry: &ArrayGeometry,
    c: usize,
    e: usize,
    azimuth: f64,
    elevation: f64,
) -> Complex64 {
    let sin_el = elevation.sin();
    let phase = TAU
        * geometry.spacing
        * ((c - 1) as f64 * azimuth.cos() * sin_el + (e - 1) as f64 * azimuth.sin() * sin_el);
    Complex64::from_polar(1.0, phase)
}

/// Steering matrix `A ∈ C^{M×P}`: column q is the vectorized per-direction
/// response grid for direction q. Every entry has unit modulus.
pub fn steering_matrix(
    geometry: &ArrayGeometry,
    directions: &IncidentDirections,
) -> DMatrix<Complex64> {
    let m_total = geometry.num_antennas();
    let p = directions.len();
    let mut a = DMatrix::zeros(m_total, p);
    for (q, &az) in directions.azimuths.iter().enumerate() {
        let sin_el = directions.elevation.sin();
        let kx = TAU * geometry.spacing * az.cos() * sin_el;
        let ky = TAU * geometry.spacing * az.sin() * sin_el;
        for c in 0..geometry.per_row {
            for e in 0..geometry.per_col {
                let idx = c * geometry.per_col + e;
                a[(idx, q)] = Complex64::from_polar(1.0, kx * c as f64 + ky * e as f64);
            }
        }
    }
    a
}
