//! Deterministic batch sweeps over the seven reference scenarios.
//!
//! A scenario is a nested parameter grid. Each grid point derives its own
//! seed from (master seed, scenario, the point's parameter values), every
//! trial inside a point derives its stream from (point seed, trial index),
//! and rows are emitted in grid order — so results are byte-identical
//! across runs and thread counts, and removing one grid point cannot
//! change any other row.
//!
//! Structurally infeasible points (more streams than the channel rank can
//! support) are flagged with an `error:<code>` metric and the run continues.

mod config;
mod csv;

pub use config::{default_config, ExperimentConfig, Scenario};
pub use csv::{csv_string, emit_csv, fmt_float, ParamValue, SweepRow};

use rayon::prelude::*;
use std::f64::consts::LN_2;

use crate::array::ArrayGeometry;
use crate::channel::ChannelRealization;
use crate::coupling::CouplingModel;
use crate::error::Result;
use crate::metrics::{
    diversity_gain_antenna_number, diversity_gain_spacing,
    effective_capacity_upper_bound_from_trace, effective_capacity_with_ci, max_rate_closed_form,
    shannon_rate, LinkConfig, QosParams,
};
use crate::precoding::{optimal_precoder, zf_precoder, DetectionMatrix};
use crate::seed;

const BOOTSTRAP_RESAMPLES: usize = 200;

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// One grid point with every swept (or scenario-fixed) quantity resolved.
#[derive(Debug, Clone, Copy)]
struct GridPoint {
    counts: (usize, usize),
    spacing: f64,
    snr_db: f64,
    theta: f64,
    directions: usize,
}

impl GridPoint {
    /// Seed identity of the point: a function of its parameter values, not
    /// its position, so dropping one grid point leaves every other row
    /// untouched.
    fn seed_parts(&self) -> [u64; 6] {
        [
            self.counts.0 as u64,
            self.counts.1 as u64,
            self.spacing.to_bits(),
            self.snr_db.to_bits(),
            self.theta.to_bits(),
            self.directions as u64,
        ]
    }
}

fn enumerate_points(config: &ExperimentConfig) -> Vec<GridPoint> {
    let mut points = Vec::new();
    let mut push = |counts, spacing, snr_db, theta, directions| {
        points.push(GridPoint {
            counts,
            spacing,
            snr_db,
            theta,
            directions,
        });
    };
    let counts0 = config.antenna_counts[0];
    let spacing0 = config.spacings[0];
    let theta0 = config.theta_list[0];
    let p0 = config.p_list[0];
    match config.scenario {
        Scenario::GdVsSpacing => {
            for &spacing in &config.spacings {
                for &snr_db in &config.snr_db_list {
                    push(counts0, spacing, snr_db, theta0, p0);
                }
            }
        }
        Scenario::GmVsCount | Scenario::EcVsCountSnr | Scenario::RateFeqVsZf => {
            for &counts in &config.antenna_counts {
                for &snr_db in &config.snr_db_list {
                    push(counts, spacing0, snr_db, theta0, p0);
                }
            }
        }
        Scenario::EcVsThetaSpacing => {
            for &theta in &config.theta_list {
                for &spacing in &config.spacings {
                    for &snr_db in &config.snr_db_list {
                        push(counts0, spacing, snr_db, theta, p0);
                    }
                }
            }
        }
        Scenario::EcVsThetaBound => {
            for &theta in &config.theta_list {
                for &snr_db in &config.snr_db_list {
                    push(counts0, spacing0, snr_db, theta, p0);
                }
            }
        }
        Scenario::EcVsDirections => {
            for &directions in &config.p_list {
                for &snr_db in &config.snr_db_list {
                    push(counts0, spacing0, snr_db, theta0, directions);
                }
            }
        }
    }
    points
}

fn point_params(scenario: Scenario, pt: &GridPoint) -> Vec<(&'static str, ParamValue)> {
    match scenario {
        Scenario::GdVsSpacing => vec![
            ("spacing", ParamValue::Float(pt.spacing)),
            ("snr_db", ParamValue::Float(pt.snr_db)),
        ],
        Scenario::GmVsCount | Scenario::EcVsCountSnr | Scenario::RateFeqVsZf => vec![
            ("m", ParamValue::Int(pt.counts.0 as i64)),
            ("n", ParamValue::Int(pt.counts.1 as i64)),
            (
                "num_antennas",
                ParamValue::Int((pt.counts.0 * pt.counts.1) as i64),
            ),
            ("snr_db", ParamValue::Float(pt.snr_db)),
        ],
        Scenario::EcVsThetaSpacing => vec![
            ("theta", ParamValue::Float(pt.theta)),
            ("spacing", ParamValue::Float(pt.spacing)),
            ("snr_db", ParamValue::Float(pt.snr_db)),
        ],
        Scenario::EcVsThetaBound => vec![
            ("theta", ParamValue::Float(pt.theta)),
            ("snr_db", ParamValue::Float(pt.snr_db)),
        ],
        Scenario::EcVsDirections => vec![
            ("directions", ParamValue::Int(pt.directions as i64)),
            ("snr_db", ParamValue::Float(pt.snr_db)),
        ],
    }
}

/// Execute the configured sweep and return rows in grid order.
pub fn run_scenario(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let points = enumerate_points(config);
    let nested: Result<Vec<Vec<SweepRow>>> = points
        .par_iter()
        .map(|pt| evaluate_point(config, pt))
        .collect();
    Ok(nested?.into_iter().flatten().collect())
}

fn make_row(
    config: &ExperimentConfig,
    pt: &GridPoint,
    metric: impl Into<String>,
    value: f64,
    stderr: f64,
) -> SweepRow {
    SweepRow {
        scenario: config.scenario.name(),
        params: point_params(config.scenario, pt),
        metric: metric.into(),
        value,
        stderr,
        trials: config.trials,
        seed: config.seed,
    }
}

fn error_row(config: &ExperimentConfig, pt: &GridPoint, code: &str) -> SweepRow {
    make_row(config, pt, format!("error:{code}"), f64::NAN, f64::NAN)
}

/// Streams must fit the smallest dimension of the equivalent channel.
fn streams_feasible(config: &ExperimentConfig, pt: &GridPoint, extra_count_cap: usize) -> bool {
    let m = pt.counts.0 * pt.counts.1;
    config.streams
        <= config
            .ue_antennas
            .min(m)
            .min(pt.directions)
            .min(extra_count_cap)
}

fn link_config(config: &ExperimentConfig, pt: &GridPoint, point_seed: u64) -> LinkConfig {
    LinkConfig {
        ue_antennas: config.ue_antennas,
        directions: pt.directions,
        streams: config.streams,
        snr: db_to_linear(pt.snr_db),
        beta: config.beta,
        trials: config.trials,
        seed: point_seed,
    }
}

fn evaluate_point(config: &ExperimentConfig, pt: &GridPoint) -> Result<Vec<SweepRow>> {
    let mut parts = vec![config.seed, config.scenario.index()];
    parts.extend_from_slice(&pt.seed_parts());
    let point_seed = seed::derive(&parts);
    match config.scenario {
        Scenario::GdVsSpacing => {
            if !streams_feasible(config, pt, usize::MAX) {
                return Ok(vec![error_row(config, pt, "unsupported_config")]);
            }
            let dipole = config.dipole()?;
            let estimate = diversity_gain_spacing(
                pt.spacing,
                config.min_spacing,
                pt.counts,
                &dipole,
                &link_config(config, pt, point_seed),
            )?;
            Ok(vec![make_row(
                config,
                pt,
                "gd",
                estimate.mean,
                estimate.stderr,
            )])
        }
        Scenario::GmVsCount => {
            let baseline_m = config.min_counts.0 * config.min_counts.1;
            if !streams_feasible(config, pt, baseline_m) {
                return Ok(vec![error_row(config, pt, "unsupported_config")]);
            }
            let dipole = config.dipole()?;
            let estimate = diversity_gain_antenna_number(
                pt.counts,
                config.min_counts,
                config.min_spacing,
                &dipole,
                &link_config(config, pt, point_seed),
            )?;
            Ok(vec![make_row(
                config,
                pt,
                "gm",
                estimate.mean,
                estimate.stderr,
            )])
        }
        Scenario::EcVsCountSnr | Scenario::EcVsThetaSpacing | Scenario::EcVsDirections => {
            effective_capacity_rows(config, pt, point_seed, false)
        }
        Scenario::EcVsThetaBound => effective_capacity_rows(config, pt, point_seed, true),
        Scenario::RateFeqVsZf => rate_comparison_rows(config, pt, point_seed),
    }
}

fn effective_capacity_rows(
    config: &ExperimentConfig,
    pt: &GridPoint,
    point_seed: u64,
    with_bound: bool,
) -> Result<Vec<SweepRow>> {
    if !streams_feasible(config, pt, usize::MAX) {
        return Ok(vec![error_row(config, pt, "unsupported_config")]);
    }
    let geometry = ArrayGeometry::new(pt.counts.0, pt.counts.1, pt.spacing)?;
    let dipole = config.dipole()?;
    let coupling = CouplingModel::new(&geometry, &dipole)?;
    let snr = db_to_linear(pt.snr_db);

    let mut rates = Vec::with_capacity(config.trials);
    let mut traces = Vec::new();
    for t in 0..config.trials {
        let mut rng = seed::stream(seed::derive(&[point_seed, t as u64]));
        let realization = ChannelRealization::sample(
            &geometry,
            &coupling.k,
            config.ue_antennas,
            pt.directions,
            config.beta,
            &mut rng,
        )?;
        let precoder = optimal_precoder(&realization, config.streams, snr)?;
        let leading: Vec<f64> = realization
            .singular_values
            .iter()
            .take(config.streams)
            .copied()
            .collect();
        rates.push(max_rate_closed_form(
            &leading,
            &precoder.f_sq,
            config.streams,
            snr,
        )?);
        if with_bound {
            traces.push((realization.steering.transpose() * &coupling.k).norm_squared());
        }
    }

    let qos = QosParams::new(pt.theta, config.frame_duration, config.bandwidth)?;
    let estimate = effective_capacity_with_ci(&rates, &qos, BOOTSTRAP_RESAMPLES, point_seed)?;
    let mut rows = vec![make_row(config, pt, "ec", estimate.value, estimate.stderr)];

    if with_bound {
        let n = traces.len() as f64;
        let trace_mean = traces.iter().sum::<f64>() / n;
        let trace_var = traces
            .iter()
            .map(|x| (x - trace_mean) * (x - trace_mean))
            .sum::<f64>()
            / (n - 1.0).max(1.0);
        let trace_se = (trace_var / n).sqrt();
        let r = config.streams;
        let bound = effective_capacity_upper_bound_from_trace(
            trace_mean,
            r,
            config.streams,
            snr,
            pt.directions,
            config.bandwidth,
        );
        // delta method: d bound / d trace = B·r / (ln2 · (trace + P·r))
        let slope =
            config.bandwidth * r as f64 / (LN_2 * (trace_mean + (pt.directions * r) as f64));
        rows.push(make_row(
            config,
            pt,
            "ec_upper_bound",
            bound,
            slope * trace_se,
        ));
    }
    Ok(rows)
}

fn rate_comparison_rows(
    config: &ExperimentConfig,
    pt: &GridPoint,
    point_seed: u64,
) -> Result<Vec<SweepRow>> {
    if !streams_feasible(config, pt, usize::MAX) {
        return Ok(vec![error_row(config, pt, "unsupported_config")]);
    }
    let geometry = ArrayGeometry::new(pt.counts.0, pt.counts.1, pt.spacing)?;
    let dipole = config.dipole()?;
    let coupling = CouplingModel::new(&geometry, &dipole)?;
    let snr = db_to_linear(pt.snr_db);
    let detector = DetectionMatrix::identity_block(config.ue_antennas, config.streams)?;

    let mut feq_rates = Vec::with_capacity(config.trials);
    let mut zf_rates = Vec::with_capacity(config.trials);
    for t in 0..config.trials {
        let mut rng = seed::stream(seed::derive(&[point_seed, t as u64]));
        let realization = ChannelRealization::sample(
            &geometry,
            &coupling.k,
            config.ue_antennas,
            pt.directions,
            config.beta,
            &mut rng,
        )?;
        let precoder = optimal_precoder(&realization, config.streams, snr)?;
        let leading: Vec<f64> = realization
            .singular_values
            .iter()
            .take(config.streams)
            .copied()
            .collect();
        feq_rates.push(max_rate_closed_form(
            &leading,
            &precoder.f_sq,
            config.streams,
            snr,
        )?);
        let zf = zf_precoder(&realization.h_eq, config.streams)?;
        zf_rates.push(shannon_rate(
            &realization.h_eq,
            &zf,
            &detector.w_eq,
            snr,
            config.streams,
        )?);
    }

    let stats = |samples: &[f64]| {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0).max(1.0);
        (mean, (var / n).sqrt())
    };
    let (feq_mean, feq_se) = stats(&feq_rates);
    let (zf_mean, zf_se) = stats(&zf_rates);
    Ok(vec![
        make_row(config, pt, "rate_feq", feq_mean, feq_se),
        make_row(config, pt, "rate_zf", zf_mean, zf_se),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_ec_config() -> ExperimentConfig {
        let mut config = default_config(Scenario::EcVsThetaBound);
        config.antenna_counts = vec![(2, 2)];
        config.theta_list = vec![0.01, 0.1];
        config.snr_db_list = vec![10.0];
        config.p_list = vec![6];
        config.trials = 8;
        config
    }

    #[test]
    fn theta_bound_scenario_emits_two_metrics_per_point() {
        let config = tiny_ec_config();
        let rows = run_scenario(&config).unwrap();
        assert_eq!(rows.len(), 4); // 2 thetas × (ec + bound)
        assert_eq!(rows[0].metric, "ec");
        assert_eq!(rows[1].metric, "ec_upper_bound");
        assert!(rows.iter().all(|r| r.value.is_finite()));
        // within a point the bound sits above the estimate
        assert!(rows[1].value > rows[0].value);
    }

    #[test]
    fn rows_are_deterministic_across_thread_counts() {
        let config = tiny_ec_config();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_scenario(&config))
            .unwrap();
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_scenario(&config))
            .unwrap();
        assert_eq!(csv_string(&single).unwrap(), csv_string(&multi).unwrap());
    }

    #[test]
    fn removing_a_grid_point_leaves_other_rows_untouched() {
        let mut full = default_config(Scenario::GdVsSpacing);
        full.antenna_counts = vec![(2, 2)];
        full.spacings = vec![0.1, 0.4, 0.7];
        full.snr_db_list = vec![10.0];
        full.p_list = vec![5];
        full.trials = 4;
        let mut trimmed = full.clone();
        trimmed.spacings = vec![0.1, 0.7]; // drop the middle point
        let full_rows = run_scenario(&full).unwrap();
        let trimmed_rows = run_scenario(&trimmed).unwrap();
        assert_eq!(full_rows[0], trimmed_rows[0]);
        assert_eq!(full_rows[2], trimmed_rows[1]);
    }

    #[test]
    fn single_trial_runs_are_byte_identical() {
        let mut config = default_config(Scenario::EcVsCountSnr);
        config.antenna_counts = vec![(2, 2)];
        config.snr_db_list = vec![10.0];
        config.p_list = vec![5];
        config.trials = 1;
        let first = csv_string(&run_scenario(&config).unwrap()).unwrap();
        let second = csv_string(&run_scenario(&config).unwrap()).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn spacing_gain_baseline_row_is_exactly_zero() {
        let mut config = default_config(Scenario::GdVsSpacing);
        config.spacings = vec![0.1, 0.4];
        config.snr_db_list = vec![10.0];
        config.p_list = vec![5];
        config.trials = 4;
        config.antenna_counts = vec![(2, 2)];
        let rows = run_scenario(&config).unwrap();
        assert_eq!(rows.len(), 2);
        // first point is d = d_min: the gain vanishes exactly
        assert_eq!(rows[0].value, 0.0);
        assert_eq!(rows[0].stderr, 0.0);
        assert!(rows[1].value != 0.0);
    }

    #[test]
    fn infeasible_points_are_flagged_and_the_run_continues() {
        let mut config = default_config(Scenario::EcVsCountSnr);
        config.antenna_counts = vec![(1, 1), (2, 2)];
        config.snr_db_list = vec![10.0];
        config.p_list = vec![6];
        config.trials = 4;
        config.streams = 2; // exceeds M = 1 at the first point
        config.ue_antennas = 2;
        let rows = run_scenario(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].metric, "error:unsupported_config");
        assert!(rows[0].value.is_nan());
        assert_eq!(rows[1].metric, "ec");
        assert!(rows[1].value.is_finite());
    }

    #[test]
    fn rate_scenario_emits_both_series() {
        let mut config = default_config(Scenario::RateFeqVsZf);
        config.antenna_counts = vec![(2, 2), (4, 2)];
        config.snr_db_list = vec![10.0];
        config.p_list = vec![6];
        config.trials = 5;
        let rows = run_scenario(&config).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].metric, "rate_feq");
        assert_eq!(rows[1].metric, "rate_zf");
        assert_eq!(rows[0].params, rows[1].params);
        // rates are per-Hz and positive here
        assert!(rows.iter().all(|r| r.value > 0.0));
    }

    #[test]
    fn grid_enumeration_matches_declared_columns() {
        for scenario in Scenario::ALL {
            let mut config = default_config(scenario);
            config.trials = 2;
            config.p_list = vec![4.min(config.p_list[0])];
            config.antenna_counts.truncate(1);
            config.spacings.truncate(2);
            config.snr_db_list.truncate(1);
            config.theta_list.truncate(1);
            if scenario == Scenario::GdVsSpacing {
                config.antenna_counts = vec![(2, 1)];
            }
            let rows = run_scenario(&config).unwrap();
            assert!(!rows.is_empty());
            let names: Vec<&str> = rows[0].params.iter().map(|(n, _)| *n).collect();
            assert_eq!(names.as_slice(), scenario.param_names());
            csv_string(&rows).unwrap();
        }
    }
}
