//! Experiment scenarios, their defaults, and the `key = value` config format.

use num_complex::Complex64;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::coupling::DipoleParams;
use crate::error::{Error, Result};

/// The seven batch sweeps the library ships.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Spacing receive diversity gain versus element spacing and SNR.
    GdVsSpacing,
    /// Antenna-number receive diversity gain versus element count and SNR.
    GmVsCount,
    /// Effective capacity versus antenna count and SNR.
    EcVsCountSnr,
    /// Effective capacity versus QoS exponent and element spacing.
    EcVsThetaSpacing,
    /// Shannon rate of the equivalent precoder against the ZF baseline.
    RateFeqVsZf,
    /// Effective capacity against its closed-form upper bound versus θ.
    EcVsThetaBound,
    /// Effective capacity versus the number of incident directions.
    EcVsDirections,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::GdVsSpacing,
        Scenario::GmVsCount,
        Scenario::EcVsCountSnr,
        Scenario::EcVsThetaSpacing,
        Scenario::RateFeqVsZf,
        Scenario::EcVsThetaBound,
        Scenario::EcVsDirections,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::GdVsSpacing => "gd_vs_spacing",
            Scenario::GmVsCount => "gm_vs_count",
            Scenario::EcVsCountSnr => "ec_vs_count_snr",
            Scenario::EcVsThetaSpacing => "ec_vs_theta_spacing",
            Scenario::RateFeqVsZf => "rate_feq_vs_zf",
            Scenario::EcVsThetaBound => "ec_vs_theta_bound",
            Scenario::EcVsDirections => "ec_vs_directions",
        }
    }

    /// Stable index mixed into per-point seeds.
    pub(crate) fn index(self) -> u64 {
        Scenario::ALL.iter().position(|s| *s == self).unwrap() as u64
    }

    /// Names of the swept-parameter columns, in emission order.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Scenario::GdVsSpacing => &["spacing", "snr_db"],
            Scenario::GmVsCount | Scenario::EcVsCountSnr | Scenario::RateFeqVsZf => {
                &["m", "n", "num_antennas", "snr_db"]
            }
            Scenario::EcVsThetaSpacing => &["theta", "spacing", "snr_db"],
            Scenario::EcVsThetaBound => &["theta", "snr_db"],
            Scenario::EcVsDirections => &["directions", "snr_db"],
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .iter()
            .copied()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
                Error::Config(format!(
                    "unknown scenario '{s}'; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Full parameterization of one sweep run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// SNR grid in dB (converted to linear internally).
    pub snr_db_list: Vec<f64>,
    /// (per-row, per-column) grids to sweep or, for fixed-geometry
    /// scenarios, a single entry.
    pub antenna_counts: Vec<(usize, usize)>,
    /// Element spacings in wavelengths.
    pub spacings: Vec<f64>,
    /// QoS statistical exponents.
    pub theta_list: Vec<f64>,
    /// Incident-direction counts.
    pub p_list: Vec<usize>,
    /// UE antennas N.
    pub ue_antennas: usize,
    /// Data streams N_s.
    pub streams: usize,
    pub trials: usize,
    pub seed: u64,
    /// Frame duration T in seconds.
    pub frame_duration: f64,
    /// Bandwidth B in Hz.
    pub bandwidth: f64,
    /// Element load impedance Z_L in Ohms.
    pub load_impedance: Complex64,
    /// Dipole length in wavelengths.
    pub dipole_length: f64,
    /// Dipole diameter in wavelengths.
    pub dipole_diameter: f64,
    /// Large-scale fading coefficient β.
    pub beta: f64,
    /// Baseline grid for the antenna-number gain.
    pub min_counts: (usize, usize),
    /// Baseline spacing d_min in wavelengths.
    pub min_spacing: f64,
}

/// Scenario defaults: 128 elements as a 16×8 grid, d_min = 0.1λ, Z_L = 50 Ω,
/// P = 70, T = 1 ms, B = 1 MHz, half-wave dipoles of diameter 0.001λ.
pub fn default_config(scenario: Scenario) -> ExperimentConfig {
    let mut config = ExperimentConfig {
        scenario,
        snr_db_list: vec![0.0, 5.0, 10.0],
        antenna_counts: vec![(4, 2), (6, 3), (8, 4), (12, 6), (16, 8)],
        spacings: (1..=10).map(|i| i as f64 / 10.0).collect(),
        theta_list: vec![0.001, 0.01, 0.1, 1.0],
        p_list: vec![70],
        ue_antennas: 4,
        streams: 1,
        trials: 500,
        seed: 1,
        frame_duration: 1e-3,
        bandwidth: 1e6,
        load_impedance: Complex64::new(50.0, 0.0),
        dipole_length: 0.5,
        dipole_diameter: 0.001,
        beta: 1.0,
        min_counts: (1, 1),
        min_spacing: 0.1,
    };
    match scenario {
        Scenario::GdVsSpacing => {
            config.antenna_counts = vec![(1, 1)];
        }
        Scenario::GmVsCount => {
            config.spacings = vec![0.1];
        }
        Scenario::EcVsCountSnr => {
            config.spacings = vec![0.5];
            config.theta_list = vec![0.01];
        }
        Scenario::EcVsThetaSpacing => {
            config.antenna_counts = vec![(16, 8)];
            config.snr_db_list = vec![10.0];
        }
        Scenario::RateFeqVsZf => {
            config.ue_antennas = 1;
            config.spacings = vec![0.1];
        }
        Scenario::EcVsThetaBound => {
            config.antenna_counts = vec![(8, 4)];
            config.spacings = vec![0.5];
        }
        Scenario::EcVsDirections => {
            config.antenna_counts = vec![(16, 8)];
            config.spacings = vec![0.5];
            config.theta_list = vec![0.01];
            config.p_list = vec![10, 30, 50, 70, 90, 110];
        }
    }
    config
}

impl ExperimentConfig {
    /// Defaults for `scenario` overridden by a config file.
    pub fn from_file(scenario: Scenario, path: &Path) -> Result<Self> {
        let mut config = default_config(scenario);
        config.apply_file(path)?;
        Ok(config)
    }

    /// Apply `key = value` lines; `#` starts a comment, lists are
    /// comma-separated, antenna grids are written `16x8`.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    /// Set one configuration key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "snr_db" => self.snr_db_list = parse_list(value, parse_f64)?,
            "antenna_counts" => self.antenna_counts = parse_list(value, parse_counts)?,
            "spacings" => self.spacings = parse_list(value, parse_f64)?,
            "thetas" => self.theta_list = parse_list(value, parse_f64)?,
            "directions" => self.p_list = parse_list(value, parse_usize)?,
            "ue_antennas" => self.ue_antennas = parse_usize(value)?,
            "streams" => self.streams = parse_usize(value)?,
            "trials" => self.trials = parse_usize(value)?,
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::Config(format!("bad seed '{value}'")))?
            }
            "frame_duration" => self.frame_duration = parse_f64(value)?,
            "bandwidth" => self.bandwidth = parse_f64(value)?,
            "load_impedance" => self.load_impedance = parse_complex(value)?,
            "dipole_length" => self.dipole_length = parse_f64(value)?,
            "dipole_diameter" => self.dipole_diameter = parse_f64(value)?,
            "beta" => self.beta = parse_f64(value)?,
            "min_count" => self.min_counts = parse_counts(value)?,
            "min_spacing" => self.min_spacing = parse_f64(value)?,
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// The dipole the configured array is built from.
    pub fn dipole(&self) -> Result<DipoleParams> {
        DipoleParams::new(
            self.dipole_length,
            self.dipole_diameter / 2.0,
            self.load_impedance,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty: [(&str, bool); 5] = [
            ("snr_db", self.snr_db_list.is_empty()),
            ("antenna_counts", self.antenna_counts.is_empty()),
            ("spacings", self.spacings.is_empty()),
            ("thetas", self.theta_list.is_empty()),
            ("directions", self.p_list.is_empty()),
        ];
        for (name, empty) in nonempty {
            if empty {
                return Err(Error::Config(format!("list '{name}' must be nonempty")));
            }
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.ue_antennas == 0 || self.streams == 0 {
            return Err(Error::Config("ue_antennas and streams must be >= 1".into()));
        }
        if self.p_list.contains(&0) {
            return Err(Error::Config("direction counts must be >= 1".into()));
        }
        self.dipole()?;
        Ok(())
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("bad number '{s}'")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("bad count '{s}'")))
}

fn parse_counts(s: &str) -> Result<(usize, usize)> {
    let (m, n) = s
        .trim()
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Config(format!("bad antenna grid '{s}', expected e.g. 16x8")))?;
    Ok((parse_usize(m)?, parse_usize(n)?))
}

/// Parse "50", "50+3i" or "50-3i" (no exponent notation inside complex forms).
fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        for (pos, ch) in body.char_indices().rev() {
            if (ch == '+' || ch == '-') && pos > 0 {
                let prev = body.as_bytes()[pos - 1];
                if prev == b'e' || prev == b'E' {
                    continue;
                }
                let re = parse_f64(&body[..pos])?;
                let im_text = &body[pos..];
                let im = if im_text == "+" || im_text == "-" {
                    parse_f64(&format!("{im_text}1"))?
                } else {
                    parse_f64(im_text)?
                };
                return Ok(Complex64::new(re, im));
            }
        }
        return Ok(Complex64::new(0.0, parse_f64(body)?));
    }
    Ok(Complex64::new(parse_f64(t)?, 0.0))
}

fn parse_list<T>(s: &str, item: fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(|part| item(part.trim())).collect()
}
