//! Two-column `timestamp,value` CSV files.
//!
//! Timestamps are ISO-8601 (`2009-01-01T00:30:00`, a space separator,
//! minute precision and RFC 3339 offsets are accepted; offsets are dropped
//! and the local wall time kept). Irradiance is W/m², power MW. The step is
//! taken from the first two rows and every later row must follow it
//! exactly, unless interpolation of short gaps is enabled.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime, TimeDelta};
use serde::{Deserialize, Serialize};

use super::series::{PowerTimeSeries, SeriesKind, DEFAULT_STEP_MINUTES};
use crate::error::{Error, Result};

/// What to do when rows are missing between two timestamps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapPolicy {
    #[default]
    Fail,
    /// Linearly interpolate gaps of at most `max_missing` samples.
    Interpolate { max_missing: usize },
}

impl GapPolicy {
    pub const MAX_INTERPOLATED: usize = 2;

    pub fn interpolate() -> Self {
        GapPolicy::Interpolate {
            max_missing: Self::MAX_INTERPOLATED,
        }
    }
}

pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    for fmt in [
        "%Y-%m-%dT%H:%M:%S%.f",
        "%Y-%m-%d %H:%M:%S%.f",
        "%Y-%m-%dT%H:%M",
        "%Y-%m-%d %H:%M",
    ] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t);
        }
    }
    DateTime::parse_from_rfc3339(s).ok().map(|t| t.naive_local())
}

pub fn read_series_csv(path: &Path, kind: SeriesKind, gaps: GapPolicy) -> Result<PowerTimeSeries> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    parse_series_csv(&text, path, kind, gaps)
}

/// Parse CSV text; `path` is only used in error messages.
pub fn parse_series_csv(
    text: &str,
    path: &Path,
    kind: SeriesKind,
    gaps: GapPolicy,
) -> Result<PowerTimeSeries> {
    let err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut rows: Vec<(usize, NaiveDateTime, f64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            err(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != 2 {
            return Err(err(
                line,
                format!("expected 2 columns (timestamp,value), found {}", record.len()),
            ));
        }
        let Some(ts) = parse_timestamp(&record[0]) else {
            if rows.is_empty() && record[0].eq_ignore_ascii_case("timestamp") {
                continue;
            }
            return Err(err(line, format!("invalid timestamp {:?}", &record[0])));
        };
        let value: f64 = record[1]
            .parse()
            .map_err(|_| err(line, format!("invalid number {:?}", &record[1])))?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(err(line, format!("value {value} must be finite and >= 0")));
        }
        rows.push((line, ts, value));
    }

    let Some(&(_, start, first)) = rows.first() else {
        return Err(err(1, "no data rows".into()));
    };
    let step = match rows.get(1) {
        Some(&(line, t, _)) => {
            let step = t - start;
            if step <= TimeDelta::zero() {
                return Err(err(line, "timestamps must be strictly increasing".into()));
            }
            step
        }
        None => TimeDelta::minutes(DEFAULT_STEP_MINUTES),
    };

    let mut samples = vec![first];
    for pair in rows.windows(2) {
        let (_, t0, v0) = pair[0];
        let (line, t1, v1) = pair[1];
        let delta = t1 - t0;
        if delta <= TimeDelta::zero() {
            return Err(err(line, "timestamps must be strictly increasing".into()));
        }
        if delta == step {
            samples.push(v1);
            continue;
        }
        let (step_ms, delta_ms) = (step.num_milliseconds(), delta.num_milliseconds());
        if delta_ms % step_ms != 0 {
            return Err(err(
                line,
                format!("interval {delta} is not a multiple of the {step} step"),
            ));
        }
        let missing = (delta_ms / step_ms - 1) as usize;
        match gaps {
            GapPolicy::Interpolate { max_missing } if missing <= max_missing => {
                for j in 1..=missing {
                    let w = j as f64 / (missing + 1) as f64;
                    samples.push(v0 + (v1 - v0) * w);
                }
                samples.push(v1);
            }
            _ => {
                return Err(err(
                    line,
                    format!("{missing} missing sample(s) before {t1} (step {step})"),
                ))
            }
        }
    }
    PowerTimeSeries::new(start, step, samples, kind)
}

pub fn write_series_csv(path: &Path, series: &PowerTimeSeries) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "timestamp,value")?;
        for (k, v) in series.samples().iter().enumerate() {
            writeln!(w, "{},{}", series.timestamp(k).format(TIMESTAMP_FORMAT), v)?;
        }
        w.flush()
    };
    write(&mut w).map_err(|e| Error::io(path, e))
}
