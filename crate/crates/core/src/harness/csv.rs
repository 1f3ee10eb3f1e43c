//! Sweep rows and their CSV serialization.
//!
//! Layout: `scenario,<swept params...>,metric,value,stderr,trials,seed`.
//! Floats are written with 17 significant digits so a parse-back reproduces
//! the exact bit pattern.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A swept-parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => f.write_str(&fmt_float(*v)),
        }
    }
}

/// One metric at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: &'static str,
    /// Swept-parameter(name, value) pairs; identical names across all rows
    /// of a scenario.
    pub params: Vec<(&'static str, ParamValue)>,
    /// Metric name; infeasible grid points carry `error:<code>` here.
    pub metric: String,
    pub value: f64,
    pub stderr: f64,
    pub trials: usize,
    pub seed: u64,
}

/// 17-significant-digit serialization; round-trips f64 bit-exactly.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render rows as a CSV document (header + one line per row).
pub fn csv_string(rows: &[SweepRow]) -> Result<String> {
    let first = rows
        .first()
        .ok_or_else(|| Error::InvalidArgument("cannot emit a CSV without any rows".into()))?;
    let names: Vec<&str> = first.params.iter().map(|(name, _)| *name).collect();
    let mut out = String::new();
    out.push_str("scenario,");
    out.push_str(&names.join(","));
    out.push_str(",metric,value,stderr,trials,seed\n");
    for row in rows {
        if row.scenario != first.scenario
            || row.params.len() != names.len()
            || row
                .params
                .iter()
                .zip(&names)
                .any(|((n, _), want)| n != want)
        {
            return Err(Error::InvalidArgument(format!(
                "row for metric '{}' does not match the scenario's column layout",
                row.metric
            )));
        }
        out.push_str(row.scenario);
        for (_, value) in &row.params {
            out.push(',');
            out.push_str(&value.to_string());
        }
        out.push(',');
        out.push_str(&row.metric);
        out.push(',');
        out.push_str(&fmt_float(row.value));
        out.push(',');
        out.push_str(&fmt_float(row.stderr));
        out.push(',');
        out.push_str(&row.trials.to_string());
        out.push(',');
        out.push_str(&row.seed.to_string());
        out.push('\n');
    }
    Ok(out)
}

/// Write rows to a CSV file.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(rows)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row(metric: &str, value: f64) -> SweepRow {
        SweepRow {
            scenario: "demo",
            params: vec![
                ("spacing", ParamValue::Float(0.1)),
                ("snr_db", ParamValue::Int(10)),
            ],
            metric: metric.to_string(),
            value,
            stderr: value / 100.0,
            trials: 7,
            seed: 3,
        }
    }

    #[test]
    fn empty_rows_are_rejected() {
        assert!(csv_string(&[]).is_err());
    }

    #[test]
    fn single_row_gives_header_plus_line() {
        let text = csv_string(&[sample_row("gd", 1.5)]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "scenario,spacing,snr_db,metric,value,stderr,trials,seed"
        );
        assert!(lines[1].starts_with("demo,1.0000000000000001e-1,10,gd,"));
        assert!(lines[1].ends_with(",7,3"));
    }

    #[test]
    fn floats_round_trip_bit_exactly() {
        for v in [
            0.1,
            -3.25e-17,
            1.0 / 3.0,
            9.87654321e12,
            f64::MIN_POSITIVE,
            0.0,
            -0.0,
            f64::NAN,
        ] {
            let text = fmt_float(v);
            let back: f64 = text.parse().unwrap();
            assert!(
                back.to_bits() == v.to_bits() || (v.is_nan() && back.is_nan()),
                "value {v} serialized as {text} round-tripped to {back}"
            );
        }
    }

    #[test]
    fn emitted_file_parses_back_to_identical_values() {
        let rows = vec![sample_row("gd", 1.0 / 3.0), sample_row("gd", 2.0 / 7.0)];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        emit_csv(&rows, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        for (line, row) in text.lines().skip(1).zip(&rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0], "demo");
            let value: f64 = fields[4].parse().unwrap();
            let stderr: f64 = fields[5].parse().unwrap();
            assert_eq!(value.to_bits(), row.value.to_bits());
            assert_eq!(stderr.to_bits(), row.stderr.to_bits());
        }
    }

    #[test]
    fn mismatched_layouts_are_rejected() {
        let mut odd = sample_row("gd", 1.0);
        odd.params = vec![("other", ParamValue::Int(1))];
        assert!(csv_string(&[sample_row("gd", 1.0), odd]).is_err());
    }
}
