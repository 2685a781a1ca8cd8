use chrono::{NaiveDate, NaiveDateTime, TimeDelta};

use crate::error::{Error, Result};

/// What a [`PowerTimeSeries`] carries: irradiance in W/m² or power in MW.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Irradiance,
    Power,
}

/// Uniformly sampled trace. Sample `k` covers `[start + k*step, start + (k+1)*step)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTimeSeries {
    start: NaiveDateTime,
    step: TimeDelta,
    samples: Vec<f64>,
    kind: SeriesKind,
}

pub const DEFAULT_STEP_MINUTES: i64 = 30;

/// Day used by the single-day generators.
pub fn reference_day() -> NaiveDate {
    NaiveDate::from_ymd_opt(2001, 1, 1).expect("valid date")
}

impl PowerTimeSeries {
    pub fn new(
        start: NaiveDateTime,
        step: TimeDelta,
        samples: Vec<f64>,
        kind: SeriesKind,
    ) -> Result<Self> {
        if step <= TimeDelta::zero() {
            return Err(Error::Contract(format!("step must be positive, got {step}")));
        }
        if samples.is_empty() {
            return Err(Error::Contract("time series needs at least one sample".into()));
        }
        if let Some((k, v)) = samples
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Domain(format!(
                "sample {k} is {v}; samples must be finite and >= 0"
            )));
        }
        Ok(PowerTimeSeries {
            start,
            step,
            samples,
            kind,
        })
    }

    pub fn start(&self) -> NaiveDateTime {
        self.start
    }

    pub fn step(&self) -> TimeDelta {
        self.step
    }

    pub fn step_hours(&self) -> f64 {
        self.step.num_milliseconds() as f64 / 3_600_000.0
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn timestamp(&self, k: usize) -> NaiveDateTime {
        self.start + self.step * k as i32
    }

    pub fn end(&self) -> NaiveDateTime {
        self.timestamp(self.samples.len())
    }

    pub fn duration_hours(&self) -> f64 {
        self.step_hours() * self.samples.len() as f64
    }

    /// Left-rectangle integral `sum(sample * step)`: MWh for power, Wh/m²
    /// for irradiance.
    pub fn integral(&self) -> f64 {
        self.samples.iter().sum::<f64>() * self.step_hours()
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(
            self.start,
            self.step,
            self.samples.iter().map(|v| v * k).collect(),
            self.kind,
        )
    }

    pub fn map(&self, kind: SeriesKind, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.start,
            self.step,
            self.samples.iter().map(|v| f(*v)).collect(),
            kind,
        )
    }

    /// Constant series aligned with `self`.
    pub fn constant_like(&self, value: f64, kind: SeriesKind) -> Result<Self> {
        Self::new(self.start, self.step, vec![value; self.samples.len()], kind)
    }

    pub fn is_aligned(&self, other: &PowerTimeSeries) -> bool {
        self.start == other.start && self.step == other.step && self.len() == other.len()
    }

    pub fn steps_per_day(&self) -> Result<usize> {
        let day = TimeDelta::days(1).num_milliseconds();
        let step = self.step.num_milliseconds();
        if day % step != 0 {
            return Err(Error::Contract(format!(
                "step of {} does not divide 24 h",
                self.step
            )));
        }
        Ok((day / step) as usize)
    }

    /// Repeat a series covering exactly one day `days` times from `start`.
    pub fn tile_daily(&self, start: NaiveDateTime, days: usize) -> Result<Self> {
        let per_day = self.steps_per_day()?;
        if self.len() != per_day {
            return Err(Error::Contract(format!(
                "tiling needs exactly one day of samples ({per_day}), got {}",
                self.len()
            )));
        }
        let samples = self.samples.iter().copied().cycle().take(per_day * days).collect();
        Self::new(start, self.step, samples, self.kind)
    }
}
